#include "covpolar/sampling/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <iterator>
#include <mutex>
#include <cmath>
#include <numbers>
#include <thread>

#include "covpolar/error.hpp"

namespace covpolar {

Orientation sample_orientation(int d, Rng& rng) {
  if (d < 2) throw PreconditionError("orientation sampling needs d >= 2");
  Orientation o;
  o.u.assign(d, 0.0);
  double len2 = 0;
  while (!(len2 > 0)) {
    len2 = 0;
    for (auto& x : o.u) {
      x = rng.normal();
      len2 += x * x;
    }
  }
  double const len = std::sqrt(len2);
  for (auto& x : o.u) x /= len;
  for (double x : o.u) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : o.u) y = -y;
    break;
  }
  return o;
}

Rank2Sample sample_shape_rank2_xy(Rng& rng) {
  // Marginal of x is proportional to (1 - x^2)^(-1/2) on [-1/2, 1/2], so
  // x = sin(theta) with theta uniform; y | x has tail sqrt(1 - x^2) / y.
  double const theta = rng.uniform(-std::numbers::pi / 6, std::numbers::pi / 6);
  double const x = std::sin(theta);
  double const y = std::sqrt(1 - x * x) / (1 - rng.uniform01());
  RealMatrix g(2, 2);
  g << 1 / y, x / y, x / y, (x * x + y * y) / y;
  return {x, y, g};
}

RealMatrix sample_shape_rank2(Rng& rng) { return sample_shape_rank2_xy(rng).gram; }

bool is_canonical_real(RealMatrix const& g) {
  Eigen::Index const n = g.rows();
  double const scale = g.cwiseAbs().maxCoeff();
  double const tol = 1e-9 * scale;
  // Necessary conditions of the greedy canonical form, checked first.
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (g(i, i) > g(i + 1, i + 1) + tol) return false;
  }
  for (Eigen::Index j = 1; j < n; ++j) {
    if (g(0, j) > tol) return false;
    for (Eigen::Index i = 0; i < j; ++i) {
      if (2 * std::abs(g(i, j)) > g(i, i) + tol) return false;
    }
  }
  RealMatrix c = canonical_gram_real(g).reduced;
  return (c - g).cwiseAbs().maxCoeff() <= tol;
}

SiegelBox default_siegel_box(int n) {
  if (n < 2 || n > 4) throw PreconditionError("Haar shape sampling supports ranks 2 to 4");
  SiegelBox box;
  box.max_ratio = {2 / std::sqrt(3.0), std::sqrt(2.0), 2.0};
  box.max_ratio.resize(n - 1);
  box.mu_lo = RealMatrix::Zero(n, n);
  box.mu_hi = RealMatrix::Zero(n, n);
  for (int j = 1; j < n; ++j) box.mu_lo(0, j) = -0.5;
  // |mu_12|, |mu_13| <= 1/2 + (3/8) a_0^2 / a_1^2 <= 1.
  for (int j = 2; j < n; ++j) {
    box.mu_lo(1, j) = -1;
    box.mu_hi(1, j) = 1;
  }
  // |mu_23| <= 1/2 + ((3/8) a_0^2 + (3/2) a_1^2) / a_2^2 <= 9/2.
  if (n == 4) {
    box.mu_lo(2, 3) = -4.5;
    box.mu_hi(2, 3) = 4.5;
  }
  return box;
}

RealMatrix sample_shape_haar(int n, Rng& rng, std::size_t cap) {
  return sample_shape_haar(n, rng, cap, default_siegel_box(n));
}

RealMatrix sample_shape_haar(int n, Rng& rng, std::size_t cap, SiegelBox const& box) {
  if (n < 2 || n > 4) throw PreconditionError("Haar shape sampling supports ranks 2 to 4");
  if (box.max_ratio.size() != static_cast<std::size_t>(n - 1) || box.mu_lo.rows() != n ||
      box.mu_hi.rows() != n) {
    throw PreconditionError("Siegel box does not match the rank");
  }
  std::vector<double> s(n - 1), log_a(n);
  RealMatrix r = RealMatrix::Zero(n, n);
  for (std::size_t attempt = 0; attempt < cap; ++attempt) {
    // s_k has density proportional to exp(k (n - k) s_k) below its bound.
    double acc = 0;
    for (int k = 1; k < n; ++k) {
      s[k - 1] = std::log(box.max_ratio[k - 1]) - rng.exponential() / (k * (n - k));
      acc += (n - k) * s[k - 1];
    }
    log_a[0] = acc / n;
    for (int i = 1; i < n; ++i) log_a[i] = log_a[i - 1] - s[i - 1];
    for (int i = 0; i < n; ++i) {
      double const a = std::exp(log_a[i]);
      r(i, i) = a;
      for (int j = i + 1; j < n; ++j) r(i, j) = a * rng.uniform(box.mu_lo(i, j), box.mu_hi(i, j));
    }
    RealMatrix g = r.transpose() * r;
    bool accepted = false;
    try {
      accepted = is_canonical_real(g);
    } catch (DegenerateInput const&) {
      // Extreme cusp samples, probability below 1e-9; treated as rejections.
    } catch (NumericalConditioningError const&) {
    }
    if (accepted) return g;
  }
  throw SamplerStarvation("Haar sampler for rank " + std::to_string(n) + " rejected " +
                          std::to_string(cap) + " consecutive proposals");
}

void for_each_reference_vector(int d, std::int64_t tmax2,
                               std::function<void(IntVector const&)> const& f) {
  IntVector v;
  for (std::int64_t n2 = 1; n2 <= tmax2; ++n2) {
    SphereEnumerator e(d, n2, SphereEnumerator::Options{true, true});
    while (e.next(v)) f(v);
  }
}

std::vector<PolarPoint> reference_population(int d, std::int64_t tmax2) {
  std::vector<PolarPoint> out;
  for_each_reference_vector(d, tmax2,
                            [&](IntVector const& v) { out.push_back(polar_point(PrimVector(v))); });
  return out;
}

namespace {

// Runs units 0..count-1 on `jobs` threads; each unit fills its own slot, so
// the concatenated result does not depend on scheduling.
template <class Unit>
Corpus run_units(int d, std::string const& label, std::size_t count, unsigned jobs,
                 Unit const& unit) {
  std::vector<Corpus> slots(count, Corpus(d, label));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t const i = next.fetch_add(1);
      if (i >= count) return;
      try {
        unit(i, slots[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  Corpus out(d, label);
  std::size_t total = 0;
  for (auto const& s : slots) total += s.size();
  out.reserve(total);
  for (auto& s : slots) out.append(std::move(s));
  return out;
}

}  // namespace

Corpus reference_summaries(int d, std::int64_t tmax2, double radius, unsigned jobs) {
  std::string const label = "reference";
  if (tmax2 < 1) return Corpus(d, label);
  return run_units(d, label, static_cast<std::size_t>(tmax2), jobs,
                   [&](std::size_t i, Corpus& out) {
                     IntVector v;
                     SphereEnumerator e(d, static_cast<std::int64_t>(i) + 1,
                                        SphereEnumerator::Options{true, true});
                     while (e.next(v)) out.add(summarize_vector(v, radius));
                   });
}

Corpus sphere_summaries(int d, std::int64_t n2, double radius, unsigned jobs) {
  auto chunks = first_coordinate_chunks(n2, std::max(1u, jobs) * 8);
  std::string const label = "sphere-" + std::to_string(n2);
  return run_units(d, label, chunks.size(), jobs, [&](std::size_t i, Corpus& out) {
    IntVector v;
    SphereEnumerator e(d, n2,
                       SphereEnumerator::Options{true, true, chunks[i].first, chunks[i].second});
    while (e.next(v)) out.add(summarize_vector(v, radius));
  });
}

}  // namespace covpolar
