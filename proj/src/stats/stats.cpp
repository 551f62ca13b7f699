#include "covpolar/stats/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "covpolar/error.hpp"
#include "covpolar/kernels/cap_count.hpp"
#include "covpolar/sampling/sampler.hpp"

namespace covpolar {

std::vector<Cap> random_caps(int d, std::size_t n, Rng& rng) {
  std::vector<Cap> caps;
  caps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto o = sample_orientation(d, rng);
    Cap c;
    c.w.assign(o.u.begin(), o.u.end());
    c.t = static_cast<float>(rng.uniform01());
    caps.push_back(std::move(c));
  }
  return caps;
}

double cap_measure(int d, double t) {
  if (d < 2) throw PreconditionError("cap measure needs d >= 2");
  if (t <= 0) return 1.0;
  if (t >= 1) return 0.0;
  return boost::math::ibeta((d - 1) / 2.0, 0.5, 1 - t * t);
}

double cap_discrepancy(Corpus const& c, std::vector<Cap> const& caps) {
  if (c.size() < 100) throw PreconditionError("cap discrepancy needs at least 100 points");
  if (caps.empty()) throw PreconditionError("cap discrepancy needs at least one cap");
  std::vector<float> w;
  std::vector<float> t;
  for (auto const& cap : caps) {
    if (cap.w.size() != static_cast<std::size_t>(c.d)) {
      throw PreconditionError("cap dimension does not match the corpus");
    }
    w.insert(w.end(), cap.w.begin(), cap.w.end());
    t.push_back(cap.t);
  }
  std::vector<std::uint64_t> counts(caps.size(), 0);
  auto cols = c.columns();
  cap_counts(cols.data(), c.d, c.size(), w.data(), t.data(), caps.size(), counts.data());
  double worst = 0;
  double const n = static_cast<double>(c.size());
  for (std::size_t i = 0; i < caps.size(); ++i) {
    double const dev = std::abs(static_cast<double>(counts[i]) / n - cap_measure(c.d, t[i]));
    worst = std::max(worst, dev);
  }
  return worst;
}

double cap_discrepancy(Corpus const& c, std::size_t n_caps, Rng& rng) {
  return cap_discrepancy(c, random_caps(c.d, n_caps, rng));
}

double cap_discrepancy(std::vector<std::vector<double>> const& orientations, std::size_t n_caps,
                       Rng& rng) {
  if (orientations.empty()) throw PreconditionError("cap discrepancy needs at least 100 points");
  int const d = static_cast<int>(orientations.front().size());
  Corpus c(d, "orientations");
  c.reserve(orientations.size());
  for (auto const& u : orientations) c.add(0, u, ShapeStatistics{});
  return cap_discrepancy(c, n_caps, rng);
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 200; ++k) {
    double const term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<double const> xs, std::span<double const> ys) {
  if (xs.size() < 50 || ys.size() < 50) {
    throw PreconditionError("KS test needs at least 50 values per sample");
  }
  std::vector<double> a(xs.begin(), xs.end()), b(ys.begin(), ys.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double const na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double stat = 0;
  while (i < a.size() && j < b.size()) {
    double const x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    stat = std::max(stat, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  double const ne = std::sqrt(na * nb / (na + nb));
  double const p = kolmogorov_q((ne + 0.12 + 0.11 / ne) * stat);
  return KsResult{stat, p, a.size(), b.size()};
}

MeanResult mean_ball_count(std::span<std::uint32_t const> counts) {
  if (counts.size() < 100) throw PreconditionError("mean ball count needs at least 100 shapes");
  double sum = 0;
  for (auto c : counts) sum += c;
  double const n = static_cast<double>(counts.size());
  double const mean = sum / n;
  double ss = 0;
  for (auto c : counts) ss += (c - mean) * (c - mean);
  return MeanResult{mean, std::sqrt(ss / (n - 1) / n), counts.size()};
}

MeanResult mean_ball_count(std::vector<RealMatrix> const& shapes, double radius) {
  std::vector<std::uint32_t> counts;
  counts.reserve(shapes.size());
  for (auto const& g : shapes) {
    double const det = g.determinant();
    if (!(det > 0)) throw DegenerateInput("shape Gram is not positive definite");
    RealMatrix unit = g / std::pow(det, 1.0 / static_cast<double>(g.rows()));
    counts.push_back(static_cast<std::uint32_t>(count_points_in_ball(unit, radius)));
  }
  return mean_ball_count(counts);
}

double siegel_mean(int n, double radius) {
  return std::pow(std::numbers::pi, n / 2.0) * std::pow(radius, n) / std::tgamma(n / 2.0 + 1);
}

double pearson(std::span<double const> xs, std::span<double const> ys) {
  if (xs.size() != ys.size()) throw PreconditionError("correlation needs paired samples");
  if (xs.size() < 100) throw PreconditionError("correlation needs at least 100 pairs");
  double const n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double const dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0) || !(syy > 0)) throw DegenerateInput("correlation undefined for zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double independence_stat(Corpus const& c) {
  std::vector<double> u2(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    double const x = c.u[0][i];
    u2[i] = x * x;
  }
  return pearson(u2, c.lambda1);
}

std::vector<HistogramBin> histogram(std::span<double const> xs, std::size_t bins, double lo,
                                    double hi) {
  if (bins == 0 || !(hi > lo)) throw PreconditionError("histogram needs bins > 0 and hi > lo");
  std::vector<HistogramBin> out(bins);
  double const width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].left = lo + width * static_cast<double>(b);
    out[b].right = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
  }
  for (double x : xs) {
    double const pos = std::floor((x - lo) / width);
    std::size_t b = pos < 0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(pos));
    ++out[b].count;
  }
  return out;
}

}  // namespace covpolar
