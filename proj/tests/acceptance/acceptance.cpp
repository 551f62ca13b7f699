// Acceptance suite.  Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.  Arguments select a subset, e.g.
// `acceptance 3 4`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>

#include "covpolar/error.hpp"
#include "covpolar/exact/gram.hpp"
#include "covpolar/io/io.hpp"
#include "covpolar/lattice/ortho.hpp"
#include "covpolar/padic/padic.hpp"
#include "covpolar/polar/polar.hpp"
#include "covpolar/sampling/rng.hpp"
#include "covpolar/sampling/sampler.hpp"
#include "covpolar/sphere/sphere.hpp"
#include "covpolar/stats/report.hpp"
#include "covpolar/stats/stats.hpp"
#include "support.hpp"

namespace cp = covpolar;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, std::string const& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string fmt(double x, int prec = 5) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

// Numeric field of a report entry; NaN when the entry holds an error.
double field(nlohmann::json const& entry, char const* key) {
  return entry.is_object() && entry.contains(key) && entry.at(key).is_number()
             ? entry.at(key).get<double>()
             : std::nan("");
}

constexpr double kRadius = 1.2;
constexpr std::int64_t kReferenceT2 = 500;
constexpr std::int64_t kPrime = 3;

// Corpora shared between criteria, built on first use.
struct Shared {
  std::map<std::int64_t, cp::Corpus> sphere;
  std::optional<cp::Corpus> reference;

  cp::Corpus const& sphere5(std::int64_t n2) {
    auto it = sphere.find(n2);
    if (it == sphere.end()) it = sphere.emplace(n2, cp::sphere_summaries(5, n2, kRadius)).first;
    return it->second;
  }
  cp::Corpus const& reference5() {
    if (!reference) reference = cp::reference_summaries(5, kReferenceT2, kRadius);
    return *reference;
  }
};

Shared shared;

std::vector<std::int64_t> admissible_norms(int d, std::int64_t max_n2) {
  cp::AdmissibleSpec spec(d, kPrime);
  std::vector<std::int64_t> out;
  for (std::int64_t n = 1; n <= max_n2; ++n) {
    if (cp::is_admissible(spec, n)) out.push_back(n);
  }
  return out;
}

// 1. Covolume and the exact 2-to-1 pattern of v -> Lambda_v.
void bijection(Outcome& o) {
  std::uint64_t vectors = 0, norms = 0;
  for (auto [d, max_n2] : {std::pair{4, 300}, std::pair{5, 200}}) {
    for (auto n2 : admissible_norms(d, max_n2)) {
      try {
        auto rec = cp::verify_bijection(d, n2);
        vectors += rec.vectors;
        o.check(rec.vectors == 2 * rec.sublattices,
                "d=" + std::to_string(d) + " N=" + std::to_string(n2) + " not 2-to-1");
        o.check(rec.vectors == cp::count_sphere(d, n2, true),
                "d=" + std::to_string(d) + " N=" + std::to_string(n2) + " vector count");
      } catch (cp::Error const& e) {
        o.check(false, e.what());
      }
      ++norms;
    }
  }
  o.detail << norms << " norms, " << vectors << " vectors";
}

// 2. normal_vector(orthogonal_basis(v)) = +-v on the same corpora.
void round_trip(Outcome& o) {
  std::uint64_t vectors = 0, mismatches = 0;
  for (auto [d, max_n2] : {std::pair{4, 300}, std::pair{5, 200}}) {
    for (auto n2 : admissible_norms(d, max_n2)) {
      cp::SphereEnumerator it(d, n2, true);
      cp::IntVector x;
      while (it.next(x)) {
        cp::PrimVector v(x);
        auto back = cp::normal_vector(cp::orthogonal_basis(v));
        if (!(back == v || back == v.negated())) {
          if (mismatches++ == 0) o.check(false, "first mismatch at " + cp::to_string(x));
        }
        ++vectors;
      }
    }
  }
  o.detail << vectors << " vectors, " << mismatches << " mismatches";
  o.check(mismatches == 0, "round trip");
}

// 3. Canonical form and minima are invariant under unimodular congruence.
void shape_invariance(Outcome& o) {
  std::mt19937_64 rng(20240603);
  std::uniform_int_distribution<int> entry(-4, 4);
  std::size_t grams = 0, transforms = 0, failures = 0;
  for (std::size_t rank : {3u, 4u}) {
    for (int g = 0; g < 100; ++g) {
      cp::IntMatrix b(rank, rank);
      do {
        for (std::size_t i = 0; i < rank; ++i)
          for (std::size_t j = 0; j < rank; ++j) b(i, j) = entry(rng);
      } while (cp::determinant(b) == 0);
      cp::GramForm form(b.transpose() * b);
      auto base = cp::reduce_shape(form);
      ++grams;
      for (int t = 0; t < 100; ++t) {
        auto u = cp::testing::random_unimodular(rank, rng);
        auto moved = cp::reduce_shape(cp::GramForm(cp::testing::congruent(form.matrix(), u)));
        bool ok = moved.canonical.reduced.matrix() == base.canonical.reduced.matrix() &&
                  moved.minima == base.minima;
        if (!ok && failures++ == 0) {
          o.check(false, "first failure at Gram " + cp::to_string(form.matrix()));
        }
        ++transforms;
      }
    }
  }
  o.detail << grams << " Grams, " << transforms << " transforms, " << failures << " failures";
  o.check(failures == 0, "invariance");
}

cp::RealMatrix gaussian_matrix(int n, cp::Rng& rng) {
  cp::RealMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  return g;
}

// 4. Iwasawa reconstruction and the orthogonal fixed case.
void iwasawa(Outcome& o) {
  cp::Rng rng(4);
  double worst = 0, worst_structure = 0, worst_orth = 0;
  for (int t = 0; t < 1000; ++t) {
    int n = 2 + t % 5;
    cp::RealMatrix g = gaussian_matrix(n, rng);
    if (g.determinant() < 0) g.col(0) *= -1;
    auto r = cp::iwasawa(g);
    worst = std::max(worst, (r.rho * r.a * r.n - g).cwiseAbs().maxCoeff());
    cp::RealMatrix id = cp::RealMatrix::Identity(n, n);
    double s = (r.rho.transpose() * r.rho - id).cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
      if (!(r.a(i, i) > 0)) s = 1;
      if (r.n(i, i) != 1) s = 1;
      for (int j = 0; j < i; ++j) s = std::max({s, std::abs(r.n(i, j)), std::abs(r.a(i, j)),
                                                std::abs(r.a(j, i))});
    }
    worst_structure = std::max(worst_structure, s);

    cp::RealMatrix q = Eigen::HouseholderQR<cp::RealMatrix>(gaussian_matrix(n, rng)).householderQ();
    if (q.determinant() < 0) q.col(0) *= -1;
    auto rq = cp::iwasawa(q);
    worst_orth = std::max({worst_orth, (rq.rho - q).cwiseAbs().maxCoeff(),
                           (rq.a - id).cwiseAbs().maxCoeff(), (rq.n - id).cwiseAbs().maxCoeff()});
  }
  o.detail << "reconstruction " << fmt(worst) << ", structure " << fmt(worst_structure)
           << ", orthogonal " << fmt(worst_orth);
  o.check(worst < 1e-10, "reconstruction error");
  o.check(worst_structure < 1e-10, "factor structure");
  o.check(worst_orth < 1e-10, "orthogonal input");
}

// 5. Every rotation found for every vector certifies, with an independent
// recheck of the block form, the SL_d(Z) product and the covolume.
void certificates(Outcome& o) {
  std::uint64_t pairs = 0, failures = 0, vectors = 0;
  auto fail = [&](std::string const& what) {
    if (failures++ == 0) o.check(false, what);
  };
  for (auto [d, norms] : {std::pair{4, std::vector<std::int64_t>{1, 3, 4, 7, 11}},
                          std::pair{5, std::vector<std::int64_t>{1, 2, 4, 7}}}) {
    for (auto n2 : norms) {
      for (auto const& c : cp::enumerate_sphere(d, n2, true)) {
        cp::PrimVector v(c);
        cp::FactoryContext ctx(v, kPrime);
        ++vectors;
        for (auto const& g1 : cp::find_p_rotations(v, kPrime, 1)) {
          ++pairs;
          try {
            auto cert = ctx.certify(g1);
            auto step = ctx.step(g1);
            if (cp::covolume_sq(step.lattice) != n2) fail("covolume at " + cp::to_string(c));
            if (cp::determinant(cert.g_w) != 1) fail("det g_w at " + cp::to_string(c));
            auto const& g2 = cert.gamma2;
            std::size_t const last = g2.rows() - 1;
            for (std::size_t j = 0; j < last; ++j) {
              if (g2.numerator(last, j) != 0) fail("block form at " + cp::to_string(c));
            }
            if (g2.numerator(last, last) != 1 || g2.exponent(last, last) != 0) {
              fail("block corner at " + cp::to_string(c));
            }
            // Over the common denominator: N1 g_v N2 = p^(e1 + e2) g_w.
            cp::IntMatrix lhs = g1.common_numerators() * ctx.g_v() * g2.common_numerators();
            cp::BigInt scale = 1;
            for (unsigned e = g1.max_exponent() + g2.max_exponent(); e > 0; --e) scale *= kPrime;
            cp::IntMatrix rhs = cert.g_w;
            for (std::size_t i = 0; i < rhs.rows(); ++i)
              for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(i, j) *= scale;
            if (lhs != rhs) fail("product at " + cp::to_string(c));
          } catch (cp::Error const& e) {
            fail(e.what());
          }
        }
      }
    }
  }
  o.detail << vectors << " vectors, " << pairs << " (v, gamma1) pairs, " << failures
           << " failures";
}

// 6. P(y >= 2) for the rank-2 Haar sampler.
void rank2(Outcome& o) {
  cp::Rng rng(6);
  std::size_t const n = 1000000;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += cp::sample_shape_rank2_xy(rng).y >= 2;
  double const p = static_cast<double>(hits) / n;
  double const target = 3 / (2 * M_PI);
  o.detail << "P(y>=2) = " << fmt(p) << " vs " << fmt(target);
  o.check(std::abs(p - target) < 0.01, "rank-2 calibration");
}

// 7. Mean ball counts against the mean-value formula.
void mean_value(Outcome& o) {
  cp::Rng rng(7);
  std::vector<std::uint32_t> counts;
  for (int i = 0; i < 100000; ++i) {
    auto g = cp::sample_shape_haar(3, rng);
    counts.push_back(static_cast<std::uint32_t>(cp::count_points_in_ball(g, kRadius)));
  }
  auto m3 = cp::mean_ball_count(counts);
  double const s3 = cp::siegel_mean(3, kRadius);
  double const rel3 = std::abs(m3.mean - s3) / s3;
  auto const& corpus = shared.sphere5(2002);
  auto m4 = cp::mean_ball_count(corpus.ball_count);
  double const s4 = cp::siegel_mean(4, kRadius);
  double const rel4 = std::abs(m4.mean - s4) / s4;
  o.detail << "rank 3 Haar " << fmt(m3.mean) << " vs " << fmt(s3) << " (" << fmt(100 * rel3, 3)
           << "%); d=5 N=2002 " << fmt(m4.mean) << " vs " << fmt(s4) << " (" << fmt(100 * rel4, 3)
           << "%, " << corpus.size() << " lattices)";
  o.check(rel3 < 0.03, "rank-3 mean");
  o.check(rel4 < 0.05, "N=2002 mean");
}

// 8. Orientation and shape statistics on d = 5 spheres.
void desk_scale(Outcome& o) {
  // 2001 = 3 * 667 is not admissible for p = 3; 2002 is the nearest norm that is.
  std::vector<std::int64_t> const norms{247, 1000, 2002};
  cp::AdmissibleSpec spec(5, kPrime);
  std::vector<cp::Corpus> targets;
  for (auto n2 : norms) {
    o.check(cp::is_admissible(spec, n2), "N=" + std::to_string(n2) + " admissible");
    targets.push_back(shared.sphere5(n2));
  }
  auto const& reference = shared.reference5();
  cp::ReportConfig cfg;
  auto report = cp::build_report(targets, reference, cfg);

  auto const& sections = report.at("targets");
  auto const& last = sections.back();
  double const disc = field(last.at("cap_discrepancy"), "value");
  bool const trend = report.at("discrepancy_trend").value("pass", false);
  double const ks_pair = field(report.at("ks_lambda1_largest_pair"), "statistic");
  double const ks_ref = field(last.at("ks_lambda1_vs_reference"), "statistic");
  double const corr = field(last.at("independence"), "correlation");

  o.detail << "discrepancy";
  for (auto const& s : sections) o.detail << " " << fmt(field(s.at("cap_discrepancy"), "value"), 3);
  o.detail << " (trend " << (trend ? "ok" : "broken") << "); KS pair " << fmt(ks_pair, 3)
           << "; KS vs reference " << fmt(ks_ref, 3) << "; |corr| " << fmt(std::abs(corr), 3);
  o.check(trend, "discrepancy trend");
  o.check(disc < 0.05, "discrepancy at largest N");
  o.check(ks_pair < 0.05, "KS lambda1 between the two largest corpora");
  o.check(ks_ref < 0.07, "KS lambda1 vs reference");
  o.check(std::abs(corr) < 0.05, "independence");
}

// 9. The reference split at random into halves is its own null.
void null_self_test(Outcome& o) {
  auto const& reference = shared.reference5();
  std::vector<std::size_t> idx(reference.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  cp::Rng rng(9);
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
  std::size_t const half = idx.size() / 2;
  std::vector<std::size_t> a(idx.begin(), idx.begin() + half), b(idx.begin() + half, idx.end());
  idx = {};
  auto ca = reference.subset(a, "half-a");
  auto cb = reference.subset(b, "half-b");
  a = {};
  b = {};
  auto report = cp::build_report({ca}, cb, cp::ReportConfig{});

  std::vector<std::string> failing;
  std::function<void(nlohmann::json const&, std::string const&)> walk =
      [&](nlohmann::json const& j, std::string const& path) {
        if (j.is_object()) {
          if (j.contains("error")) failing.push_back(path + " (error)");
          if (path != "report" && j.contains("pass") && j.at("pass").is_boolean() &&
              !j.at("pass").get<bool>()) {
            failing.push_back(path);
          }
          for (auto const& item : j.items()) {
            if (item.key() != "pass") walk(item.value(), path + "/" + item.key());
          }
        } else if (j.is_array()) {
          for (std::size_t i = 0; i < j.size(); ++i) walk(j[i], path + "/" + std::to_string(i));
        }
      };
  walk(report, "report");
  auto const& t = report.at("targets").at(0);
  o.detail << "halves of " << reference.size() << ": discrepancy "
           << fmt(field(t.at("cap_discrepancy"), "value"), 3) << ", KS lambda1 "
           << fmt(field(t.at("ks_lambda1_vs_reference"), "statistic"), 3)
           << ", KS ratio " << fmt(field(t.at("ks_ratio_vs_reference"), "statistic"), 3)
           << ", mean " << fmt(field(t.at("mean_ball_count"), "mean")) << " vs "
           << fmt(field(t.at("mean_ball_count"), "target")) << ", |corr| "
           << fmt(std::abs(field(t.at("independence"), "correlation")), 3);
  for (auto const& f : failing) o.check(false, f);
  o.check(cp::report_passes(report), "report pass flag");
}

// 10. Two CLI processes with the same configuration write the same bytes.
void determinism(Outcome& o) {
  namespace fs = std::filesystem;
  fs::path const dir = fs::temp_directory_path() / ("covpolar-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string const cli = COVPOLAR_CLI_PATH;
  auto p = [&](std::string const& name) { return (dir / name).string(); };
  std::vector<std::pair<std::string, std::vector<std::string>>> const steps{
      {"enumerate --dim 5 --norm2 247 --primitive --prime 3 --out " + p("v.jsonl"),
       {"v.jsonl", "v.jsonl.meta.json"}},
      {"polar --in " + p("v.jsonl") + " --out " + p("v.csv"), {"v.csv"}},
      {"sample --source haar --dim 5 --count 500 --seed 11 --out " + p("h.csv"), {"h.csv"}},
      {"sample --source reference --dim 5 --tmax2 60 --out " + p("r.csv"), {"r.csv"}},
      {"factory --vector 1,2,3,4 --prime 3 --out " + p("f.json"), {"f.json"}},
      {"report --target " + p("v.csv") + " --target " + p("h.csv") + " --reference " +
           p("r.csv") + " --seed 5 --caps 200 --histogram " + p("hist.csv") + " --out " +
           p("rep.json"),
       {"rep.json", "hist.csv"}},
  };
  std::map<std::string, std::string> first;
  std::size_t files = 0, differ = 0;
  for (int round = 0; round < 2; ++round) {
    for (auto const& [args, outputs] : steps) {
      std::string const cmd = cli + " " + args + " > " + p("stdout.txt") + " 2>&1";
      // The report exits 1 when a statistical test fails; the bytes still count.
      int const rc = std::system(cmd.c_str());
      if (rc != 0 && args.rfind("report", 0) != 0) o.check(false, "command failed: " + args);
      for (auto const& f : outputs) {
        std::string bytes;
        try {
          bytes = cp::read_file(p(f));
        } catch (cp::Error const& e) {
          o.check(false, e.what());
        }
        if (round == 0) {
          first[f] = bytes;
        } else {
          ++files;
          if (first[f] != bytes || bytes.empty()) {
            ++differ;
            o.check(false, f + " differs");
          }
        }
      }
    }
    if (round == 0) {
      for (auto const& [args, outputs] : steps) {
        for (auto const& f : outputs) fs::remove(p(f));
      }
    }
  }
  fs::remove_all(dir);
  o.detail << files << " files compared, " << differ << " differ";
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> const criteria{
      {"exact bijection and covolume", bijection},
      {"normal round trip", round_trip},
      {"shape-class invariance", shape_invariance},
      {"Iwasawa decomposition", iwasawa},
      {"p-adic factory certificates", certificates},
      {"rank-2 Haar calibration", rank2},
      {"mean-value anchor", mean_value},
      {"d=5 orientation and shape statistics", desk_scale},
      {"reference null self-test", null_self_test},
      {"CLI determinism", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    int const id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    auto const start = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o);
    } catch (std::exception const& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    double const secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << " "
              << criteria[k].first << ": " << o.detail.str() << " (" << fmt(secs, 3) << " s)"
              << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
