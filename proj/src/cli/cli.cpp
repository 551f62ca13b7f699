#include "covpolar/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include "covpolar/error.hpp"
#include "covpolar/io/io.hpp"
#include "covpolar/lattice/ortho.hpp"
#include "covpolar/padic/padic.hpp"
#include "covpolar/sampling/sampler.hpp"
#include "covpolar/stats/report.hpp"

namespace covpolar::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  int d = 0;
  std::int64_t p = 0;
  std::vector<std::int64_t> norm2_list;
  std::int64_t tmax2 = 0;
  std::uint64_t seed = 1;
  bool primitive = false;
  bool strict = false;
  double radius = 1.2;
  std::size_t caps = 1000;
  std::optional<double> threshold_discrepancy, threshold_ks, threshold_mean, threshold_corr;
  int height_bound = 1;
  unsigned jobs = 1;
  std::string source;
  std::size_t count = 0;
  std::vector<std::int64_t> vector;
  std::string in, out, config, reference, histogram;
  std::vector<std::string> targets;
};

json to_json(RunConfig const& c) {
  json j{{"command", c.command}, {"jobs", c.jobs}};
  auto put = [&](char const* k, auto const& v, bool present) {
    if (present) j[k] = v;
  };
  put("dim", c.d, c.d != 0);
  put("prime", c.p, c.p != 0);
  put("norm2", c.norm2_list, !c.norm2_list.empty());
  put("tmax2", c.tmax2, c.tmax2 != 0);
  put("seed", c.seed, c.command == "sample" || c.command == "report");
  put("primitive", c.primitive, c.command == "enumerate");
  put("strict", c.strict, true);
  put("radius", c.radius, c.command != "enumerate" && c.command != "factory");
  put("caps", c.caps, c.command == "report");
  put("threshold_discrepancy", c.threshold_discrepancy.value_or(0), c.threshold_discrepancy.has_value());
  put("threshold_ks", c.threshold_ks.value_or(0), c.threshold_ks.has_value());
  put("threshold_mean", c.threshold_mean.value_or(0), c.threshold_mean.has_value());
  put("threshold_corr", c.threshold_corr.value_or(0), c.threshold_corr.has_value());
  put("height_bound", c.height_bound, c.command == "factory");
  put("source", c.source, !c.source.empty());
  put("count", c.count, c.count != 0);
  put("vector", c.vector, !c.vector.empty());
  put("in", c.in, !c.in.empty());
  put("out", c.out, !c.out.empty());
  put("config", c.config, !c.config.empty());
  put("reference", c.reference, !c.reference.empty());
  put("histogram", c.histogram, !c.histogram.empty());
  put("target", c.targets, !c.targets.empty());
  return j;
}

// Admissibility is advisory unless --strict.
void check_admissible(RunConfig const& c, std::int64_t n2, std::ostream& err) {
  if (c.p == 0) return;
  std::string problem;
  if (c.d < 4) {
    problem = "admissibility is only defined for d >= 4";
  } else if (!is_admissible(AdmissibleSpec(c.d, c.p), n2)) {
    problem = "norm2 " + std::to_string(n2) + " is not admissible for d = " +
              std::to_string(c.d) + ", p = " + std::to_string(c.p);
  }
  if (problem.empty()) return;
  if (c.strict) throw ValidationError(problem);
  err << "warning: " << problem << "\n";
}

void validate_prime(RunConfig const& c) {
  if (c.p != 0 && (c.p < 3 || !is_prime(c.p))) {
    throw ValidationError("--prime must be an odd prime");
  }
}

// Runs f(i) for i < n on `jobs` threads; f writes only to slot i.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F const& f) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(m);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::pair<std::string, std::string>> csv_meta(RunConfig const& c,
                                                          json const& inputs) {
  return {{"config", to_json(c).dump()}, {"input_sha256", inputs.dump()}};
}

void write_with_meta(RunConfig const& c, std::string const& body, json const& inputs) {
  write_file(c.out, body);
  json meta{{"config", to_json(c)}, {"input_sha256", inputs}, {"output_sha256", sha256_hex(body)}};
  write_file(c.out + ".meta.json", json_text(meta));
}

json input_hashes(std::vector<std::string> const& paths) {
  json j = json::object();
  for (auto const& p : paths) j[p] = sha256_file(p);
  return j;
}

// ---------------------------------------------------------------------------

int do_enumerate(RunConfig const& c, std::ostream& out, std::ostream& err) {
  if (c.d < 3) throw ValidationError("--dim must be at least 3");
  validate_prime(c);
  std::vector<std::int64_t> norms = c.norm2_list;
  if (c.tmax2 > 0) {
    for (std::int64_t n = 1; n <= c.tmax2; ++n) norms.push_back(n);
  }
  if (norms.empty()) throw ValidationError("one of --norm2, --norm2-list, --tmax2 is required");
  std::string body;
  std::size_t lines = 0;
  for (auto n2 : norms) {
    if (n2 < 1) throw ValidationError("norm2 values must be positive");
    check_admissible(c, n2, err);
    SphereEnumerator e(c.d, n2, SphereEnumerator::Options{c.primitive, false});
    IntVector v;
    while (e.next(v)) {
      body += vector_record(v);
      body += '\n';
      ++lines;
    }
  }
  write_with_meta(c, body, json::object());
  out << lines << " vectors written to " << c.out << "\n";
  return 0;
}

int do_polar(RunConfig const& c, std::ostream& out, std::ostream& err) {
  if (c.in.empty()) throw ValidationError("--in is required");
  validate_prime(c);
  if (!(c.radius > 0)) throw ValidationError("--radius must be positive");
  auto records = parse_vector_jsonl(read_file(c.in));
  if (records.empty()) throw ValidationError("input has no vectors");
  int const d = records.front().d;
  std::vector<std::int64_t> checked;
  for (auto const& r : records) {
    if (r.d != d) throw ValidationError("input mixes dimensions");
    if (std::find(checked.begin(), checked.end(), r.norm2) == checked.end()) {
      RunConfig cd = c;
      cd.d = d;
      check_admissible(cd, r.norm2, err);
      checked.push_back(r.norm2);
    }
  }
  std::vector<PolarRow> rows(records.size());
  parallel_for(records.size(), c.jobs, [&](std::size_t i) {
    auto const& r = records[i];
    rows[i] = polar_row("sphere-" + std::to_string(r.norm2), polar_point(PrimVector(r.v)),
                        c.radius);
  });
  json inputs = input_hashes({c.in});
  write_file(c.out, polar_csv(d, rows, csv_meta(c, inputs)));
  out << rows.size() << " polar records written to " << c.out << "\n";
  return 0;
}

json class_json(EquivalenceClass const& cls) {
  json members = json::array();
  for (auto const& m : cls.members) members.push_back(m.coords());
  return json{{"v", cls.v.coords()},   {"p", cls.p},
              {"class", members},      {"truncated", cls.truncated},
              {"certificates", cls.certificates}};
}

int do_factory(RunConfig const& c, std::ostream& out, std::ostream& err) {
  if (c.p == 0) throw ValidationError("--prime is required");
  validate_prime(c);
  if (c.height_bound < 0) throw ValidationError("--height-bound must be non-negative");
  std::vector<IntVector> vectors;
  json inputs = json::object();
  if (!c.vector.empty()) vectors.push_back(c.vector);
  if (!c.in.empty()) {
    for (auto& r : parse_vector_jsonl(read_file(c.in))) vectors.push_back(std::move(r.v));
    inputs = input_hashes({c.in});
  }
  if (vectors.empty()) throw ValidationError("--vector or --in is required");
  ClassBounds bounds;
  bounds.height = c.height_bound;
  json results = json::array();
  for (auto const& v : vectors) {
    PrimVector pv(v);
    RunConfig cd = c;
    cd.d = static_cast<int>(v.size());
    check_admissible(cd, pv.norm2(), err);
    results.push_back(class_json(equivalence_class(pv, c.p, bounds)));
  }
  json doc;
  if (c.in.empty() && results.size() == 1) {
    doc = results[0];
  } else {
    doc["results"] = results;
  }
  doc["config"] = to_json(c);
  doc["input_sha256"] = inputs;
  write_file(c.out, json_text(doc));
  out << results.size() << " classes written to " << c.out << "\n";
  return 0;
}

int do_sample(RunConfig const& c, std::ostream& out, std::ostream& err) {
  if (!(c.radius > 0)) throw ValidationError("--radius must be positive");
  validate_prime(c);
  std::vector<PolarRow> rows;
  if (c.source == "haar") {
    if (c.d < 3 || c.d > 5) throw ValidationError("haar sampling supports --dim 3 to 5");
    if (c.count == 0) throw ValidationError("--count is required for haar sampling");
    rows.resize(c.count);
    // One sub-stream per sample, so the output does not depend on --jobs.
    parallel_for(c.count, c.jobs, [&](std::size_t i) {
      Rng rng = Rng::substream(c.seed, i);
      auto o = sample_orientation(c.d, rng);
      auto g = sample_shape_haar(c.d - 1, rng);
      rows[i] = polar_row("haar", o, g, c.radius);
    });
  } else if (c.source == "reference" || c.source == "sphere") {
    if (c.d < 3) throw ValidationError("--dim must be at least 3");
    std::vector<IntVector> vectors;
    std::string label;
    if (c.source == "reference") {
      if (c.tmax2 < 1) throw ValidationError("--tmax2 is required for reference sampling");
      for_each_reference_vector(c.d, c.tmax2, [&](IntVector const& v) { vectors.push_back(v); });
    } else {
      if (c.norm2_list.size() != 1) throw ValidationError("--norm2 is required for sphere sampling");
      check_admissible(c, c.norm2_list[0], err);
      SphereEnumerator e(c.d, c.norm2_list[0], SphereEnumerator::Options{true, true});
      IntVector v;
      while (e.next(v)) vectors.push_back(v);
    }
    rows.resize(vectors.size());
    parallel_for(vectors.size(), c.jobs, [&](std::size_t i) {
      auto p = polar_point(PrimVector(vectors[i]));
      std::string src = c.source == "reference" ? "reference" : "sphere-" + std::to_string(p.n2);
      rows[i] = polar_row(src, p, c.radius);
    });
  } else {
    throw ValidationError("--source must be haar, reference or sphere");
  }
  write_file(c.out, polar_csv(c.d, rows, csv_meta(c, json::object())));
  out << rows.size() << " samples written to " << c.out << "\n";
  return 0;
}

Corpus load_corpus(std::string const& path, double radius) {
  auto label = std::filesystem::path(path).filename().string();
  auto csv = parse_polar_csv(read_file(path), label);
  for (auto const& [k, v] : csv.meta) {
    if (k != "config") continue;
    json cfg;
    try {
      cfg = json::parse(v);
    } catch (json::exception const&) {
      throw ValidationError(path + ": unreadable config comment");
    }
    if (cfg.contains("radius") && cfg["radius"].get<double>() != radius) {
      throw ValidationError(path + ": ball counts were computed at radius " +
                            format_double(cfg["radius"].get<double>()) +
                            ", report radius is " + format_double(radius));
    }
  }
  return std::move(csv.corpus);
}

int do_report(RunConfig const& c, std::ostream& out, std::ostream&, CLI::App const& sub) {
  if (c.targets.empty()) throw ValidationError("at least one --target is required");
  if (c.reference.empty()) throw ValidationError("--reference is required");
  ReportConfig rc;
  std::vector<std::string> paths = c.targets;
  paths.push_back(c.reference);
  if (!c.config.empty()) {
    try {
      rc = report_config_from_json(json::parse(read_file(c.config)));
    } catch (json::exception const& e) {
      throw ValidationError(c.config + ": " + e.what());
    }
    paths.push_back(c.config);
  }
  // Flags given on the command line override the config file.
  if (sub.count("--seed")) rc.seed = c.seed;
  if (sub.count("--caps")) rc.caps = c.caps;
  if (sub.count("--radius")) rc.radius = c.radius;
  if (c.threshold_discrepancy) rc.thresholds.discrepancy = *c.threshold_discrepancy;
  if (c.threshold_ks) rc.thresholds.ks = *c.threshold_ks;
  if (c.threshold_mean) rc.thresholds.mean_relative = *c.threshold_mean;
  if (c.threshold_corr) rc.thresholds.correlation = *c.threshold_corr;

  std::vector<Corpus> targets;
  for (auto const& t : c.targets) targets.push_back(load_corpus(t, rc.radius));
  Corpus reference = load_corpus(c.reference, rc.radius);
  for (auto const& t : targets) {
    if (t.d != reference.d) throw ValidationError("target and reference dimensions differ");
  }
  json report = build_report(targets, reference, rc);
  report["run_config"] = to_json(c);
  report["input_sha256"] = input_hashes(paths);
  write_file(c.out, json_text(report));
  if (!c.histogram.empty()) {
    auto const& last = targets.back();
    double hi = *std::max_element(last.lambda1.begin(), last.lambda1.end());
    write_file(c.histogram, histogram_csv(histogram(last.lambda1, rc.histogram_bins, 0.0,
                                                    std::max(hi, 1e-9))));
  }
  out << "report written to " << c.out << (report["pass"].get<bool>() ? " (pass)" : " (fail)")
      << "\n";
  return 0;
}

unsigned default_jobs() {
  if (char const* env = std::getenv("COVPOLAR_JOBS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (std::exception const&) {
    }
    throw ValidationError("COVPOLAR_JOBS must be a positive integer");
  }
  return 1;
}

}  // namespace

int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Primitive sublattices of Z^d: enumeration, polar coordinates, p-adic "
               "factory and equidistribution statistics"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* s) {
    s->add_option("--jobs", c.jobs, "worker threads (default: COVPOLAR_JOBS or 1)")
        ->check(CLI::PositiveNumber);
    s->add_option("--out", c.out, "output path")->required();
  };
  auto add_admissibility = [&](CLI::App* s) {
    s->add_option("--prime", c.p, "odd prime p for the admissibility check");
    s->add_flag("--strict", c.strict, "treat inadmissible norms as errors");
  };

  auto* en = app.add_subcommand("enumerate", "primitive vectors on spheres, as JSONL");
  en->add_option("--dim", c.d, "dimension d")->required();
  auto* n1 = en->add_option_function<std::int64_t>(
      "--norm2", [&](std::int64_t n) { c.norm2_list = {n}; }, "squared norm N");
  auto* nl = en->add_option("--norm2-list", c.norm2_list, "comma-separated squared norms")
                 ->delimiter(',');
  auto* nt = en->add_option("--tmax2", c.tmax2, "all squared norms 1..T");
  n1->excludes(nl)->excludes(nt);
  nl->excludes(nt);
  en->add_flag("--primitive", c.primitive, "only primitive vectors");
  add_admissibility(en);
  add_common(en);

  auto* po = app.add_subcommand("polar", "polar coordinates of vectors, as CSV");
  po->add_option("--in", c.in, "vector JSONL")->required();
  po->add_option("--radius", c.radius, "ball radius for counts");
  add_admissibility(po);
  add_common(po);

  auto* fa = app.add_subcommand("factory", "p-adic equivalence class with certificates");
  fa->add_option("--vector", c.vector, "comma-separated coordinates")->delimiter(',');
  fa->add_option("--in", c.in, "vector JSONL");
  fa->add_option("--height-bound", c.height_bound, "Cayley parameter height bound");
  add_admissibility(fa);
  add_common(fa);

  auto* sa = app.add_subcommand("sample", "Haar, reference or sphere samples, as CSV");
  sa->add_option("--source", c.source, "haar, reference or sphere")->required();
  sa->add_option("--dim", c.d, "dimension d")->required();
  sa->add_option("--count", c.count, "number of Haar samples");
  sa->add_option("--tmax2", c.tmax2, "reference population bound on |v|^2");
  sa->add_option_function<std::int64_t>(
      "--norm2", [&](std::int64_t n) { c.norm2_list = {n}; }, "squared norm for sphere samples");
  sa->add_option("--seed", c.seed, "random seed");
  sa->add_option("--radius", c.radius, "ball radius for counts");
  add_admissibility(sa);
  add_common(sa);

  auto* re = app.add_subcommand("report", "equidistribution report, as JSON");
  re->add_option("--target", c.targets, "target polar CSV (repeatable)")->required();
  re->add_option("--reference", c.reference, "reference polar CSV")->required();
  re->add_option("--config", c.config, "report config JSON");
  re->add_option("--seed", c.seed, "cap seed");
  re->add_option("--caps", c.caps, "number of random caps")->check(CLI::PositiveNumber);
  re->add_option("--radius", c.radius, "ball radius the CSV counts were computed at");
  re->add_option("--threshold-discrepancy", c.threshold_discrepancy);
  re->add_option("--threshold-ks", c.threshold_ks);
  re->add_option("--threshold-mean", c.threshold_mean);
  re->add_option("--threshold-corr", c.threshold_corr);
  re->add_option("--histogram", c.histogram, "lambda_1 histogram CSV of the last target");
  add_common(re);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    c.jobs = default_jobs();
    app.parse(reversed);
  } catch (CLI::CallForHelp const&) {
    out << app.help();
    return 0;
  } catch (CLI::CallForAllHelp const&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (CLI::ParseError const& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (ValidationError const& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (en->parsed()) {
      c.command = "enumerate";
      return do_enumerate(c, out, err);
    }
    if (po->parsed()) {
      c.command = "polar";
      return do_polar(c, out, err);
    }
    if (fa->parsed()) {
      c.command = "factory";
      return do_factory(c, out, err);
    }
    if (sa->parsed()) {
      c.command = "sample";
      return do_sample(c, out, err);
    }
    c.command = "report";
    return do_report(c, out, err, *re);
  } catch (ValidationError const& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (PreconditionError const& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (DegenerateInput const& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (CapacityError const& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (CertificateFailure const& e) {
    err << "certificate failure: " << e.what() << "\n";
    return 2;
  } catch (std::exception const& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace covpolar::cli
