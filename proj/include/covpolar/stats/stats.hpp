#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "covpolar/exact/gram.hpp"
#include "covpolar/sampling/rng.hpp"
#include "covpolar/stats/corpus.hpp"

namespace covpolar {

// Symmetric cap {u : |<u, w>| >= t}.
struct Cap {
  std::vector<float> w;
  float t;
};

// n random caps: w uniform on the sphere, t uniform on [0, 1).
std::vector<Cap> random_caps(int d, std::size_t n, Rng& rng);

// Uniform measure of a symmetric cap on S^{d-1}: I_{1-t^2}((d-1)/2, 1/2).
double cap_measure(int d, double t);

// max over caps of |empirical(C) - uniform(C)|; needs at least 100 points.
double cap_discrepancy(Corpus const& orientations, std::vector<Cap> const& caps);
double cap_discrepancy(Corpus const& orientations, std::size_t n_caps, Rng& rng);
double cap_discrepancy(std::vector<std::vector<double>> const& orientations,
                       std::size_t n_caps, Rng& rng);

struct KsResult {
  double statistic;
  double p_value;  // asymptotic
  std::size_t n;
  std::size_t m;
};

// Two-sample Kolmogorov-Smirnov; both samples need at least 50 values.
KsResult ks_two_sample(std::span<double const> xs, std::span<double const> ys);

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

struct MeanResult {
  double mean;
  double standard_error;
  std::size_t n;
};

// Needs at least 100 values.
MeanResult mean_ball_count(std::span<std::uint32_t const> counts);
MeanResult mean_ball_count(std::vector<RealMatrix> const& shapes, double radius);

// Volume of the radius-R ball in R^n, the mean number of nonzero lattice
// points of a random unimodular lattice inside it.
double siegel_mean(int n, double radius);

// Pearson correlation; needs at least 100 pairs and nonzero variances.
double pearson(std::span<double const> xs, std::span<double const> ys);
// Correlation of (u_1^2, lambda_1) over a corpus.
double independence_stat(Corpus const& c);

struct HistogramBin {
  double left;
  double right;
  std::uint64_t count;
};
// Equal-width bins over [lo, hi]; values outside are clamped to the end bins.
std::vector<HistogramBin> histogram(std::span<double const> xs, std::size_t bins, double lo,
                                    double hi);

}  // namespace covpolar
