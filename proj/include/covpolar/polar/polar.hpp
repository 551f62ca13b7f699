#pragma once

#include <cstdint>
#include <vector>

#include "covpolar/exact/gram.hpp"
#include "covpolar/sphere/sphere.hpp"

namespace covpolar {

// Hyperplane v-perp encoded by its unit normal up to sign.
struct Orientation {
  IntVector normal;       // primitive, first nonzero coordinate positive
  std::vector<double> u;  // normal / |normal|

  std::size_t dim() const { return u.size(); }
  friend bool operator==(Orientation const&, Orientation const&) = default;
};

Orientation orientation_of(IntVector const& v);

// Similarity class of a lattice: canonical integer Gram with its scale.
class ShapeClass {
 public:
  // Canonicalizes g.
  explicit ShapeClass(GramForm const& g);

  std::size_t rank() const { return gram_.rank(); }
  GramForm const& gram() const { return gram_; }
  BigInt const& scale() const { return gram_.det(); }
  std::vector<BigInt> const& minima() const { return minima_; }
  // G / N^(1/n), determinant one.
  RealMatrix unit_gram() const;

  friend bool operator==(ShapeClass const& a, ShapeClass const& b) {
    return a.gram_ == b.gram_;
  }

 private:
  explicit ShapeClass(ShapeReduction r);

  GramForm gram_;
  std::vector<BigInt> minima_;
};

struct PolarPoint {
  Orientation orientation;
  ShapeClass shape;
  std::int64_t n2;

  friend bool operator==(PolarPoint const&, PolarPoint const&) = default;
};

PolarPoint polar_point(PrimVector const& v);

// Deterministic k in SO_d(R) with k (v / |v|) = e_d.
RealMatrix rotation_to_pole(IntVector const& v);

struct IwasawaTriple {
  RealMatrix rho;  // special orthogonal
  RealMatrix a;    // positive diagonal
  RealMatrix n;    // unit upper triangular
};

// g = rho a n.  Throws NumericalConditioningError when cond(g) > 1e12 and
// PreconditionError when det g <= 0.
IwasawaTriple iwasawa(RealMatrix const& g);

struct ShapeStatistics {
  double lambda1;          // first minimum of the unit-determinant form
  double ratio;            // lambda_n / lambda_1
  std::uint64_t ball_count;
};

ShapeStatistics shape_statistics(ShapeClass const& s, double radius);

// Same statistics for a real Gram matrix, rescaled to determinant one.
ShapeStatistics shape_statistics_real(RealMatrix const& g, double radius);

// Fast path over a primitive vector, skipping the canonical Gram: the same
// statistics as shape_statistics(polar_point(v).shape, radius).
struct PolarSummary {
  std::int64_t n2 = 0;
  std::vector<double> u;
  ShapeStatistics stats{};
};

PolarSummary summarize_vector(IntVector const& v, double radius);

}  // namespace covpolar
