#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "covpolar/exact/gram.hpp"
#include "covpolar/polar/polar.hpp"
#include "covpolar/sampling/rng.hpp"
#include "covpolar/stats/corpus.hpp"

namespace covpolar {

struct SamplerConfig {
  std::uint64_t seed = 1;
  int d = 4;
  std::size_t count = 1000;
  std::size_t rejection_cap = 100000;
};

// Uniform point of the sphere modulo +-, first nonzero coordinate positive.
// The integer normal of the result is empty.
Orientation sample_orientation(int d, Rng& rng);

// Modular fundamental domain sample with density (3/pi) y^-2; returns the
// unit-determinant Gram (1/y) [[1, x], [x, x^2 + y^2]].
struct Rank2Sample {
  double x;
  double y;
  RealMatrix gram;
};
Rank2Sample sample_shape_rank2_xy(Rng& rng);
RealMatrix sample_shape_rank2(Rng& rng);

// Box in Iwasawa coordinates G = R^T R, R = diag(a) (I + mu), containing
// every canonical form of rank n: s_k = log(a_k / a_{k+1}) <= log(max_ratio[k])
// and mu_lo(i, j) <= mu_ij <= mu_hi(i, j) for i < j.
struct SiegelBox {
  std::vector<double> max_ratio;
  RealMatrix mu_lo;
  RealMatrix mu_hi;
};

// Default box for n <= 4.  The canonical basis realizes the successive minima,
// so Minkowski's second theorem gives a_k / a_{k+1} <= gamma_{k+2}^{(k+2)/2}
// (2/sqrt3, sqrt2, 2).  Row 0 of mu lies in [-1/2, 0]; the remaining bounds
// follow from |G_ij| <= G_ii / 2.
SiegelBox default_siegel_box(int n);

// Haar-distributed unit-determinant Gram of rank n in {2, 3, 4}: rejection
// sampling over the box with the invariant density, accepting iff the sample
// is its own canonical representative.  Throws SamplerStarvation after `cap`
// consecutive rejections.
RealMatrix sample_shape_haar(int n, Rng& rng, std::size_t cap = 100000);
RealMatrix sample_shape_haar(int n, Rng& rng, std::size_t cap, SiegelBox const& box);

// Whether g equals canonical_gram_real(g) up to the 1e-9 relative tolerance.
bool is_canonical_real(RealMatrix const& g);

// Primitive vectors with |v|^2 <= tmax2, one per +-pair, ordered by norm and
// then lexicographically.
void for_each_reference_vector(int d, std::int64_t tmax2,
                               std::function<void(IntVector const&)> const& f);

std::vector<PolarPoint> reference_population(int d, std::int64_t tmax2);

// Statistics-only reference population, computed on `jobs` threads with
// results in the order of for_each_reference_vector.
Corpus reference_summaries(int d, std::int64_t tmax2, double radius, unsigned jobs = 1);

// Statistics-only corpus for a single sphere, one vector per +-pair.
Corpus sphere_summaries(int d, std::int64_t n2, double radius, unsigned jobs = 1);

}  // namespace covpolar
