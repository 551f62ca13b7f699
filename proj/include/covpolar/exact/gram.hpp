#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "covpolar/exact/integer.hpp"
#include "covpolar/exact/matrix.hpp"

namespace covpolar {

using RealMatrix = Eigen::MatrixXd;

// Largest rank accepted by canonical_gram and successive_minima.
inline constexpr std::size_t kMaxShapeRank = 6;

// Exact symmetric positive-definite integer form with its determinant.
class GramForm {
 public:
  // Validates symmetry and positive definiteness (all leading principal
  // minors positive); throws DegenerateInput otherwise.
  explicit GramForm(IntMatrix g);

  std::size_t rank() const { return g_.rows(); }
  IntMatrix const& matrix() const { return g_; }
  BigInt const& operator()(std::size_t i, std::size_t j) const { return g_(i, j); }
  BigInt const& det() const { return det_; }

  friend bool operator==(GramForm const& a, GramForm const& b) {
    return a.g_ == b.g_;
  }

 private:
  IntMatrix g_;
  BigInt det_;
};

struct ReductionResult {
  GramForm reduced;
  // Columns express the reduced basis in the input basis; det = +-1 and
  // reduced = transform^T * input * transform.
  IntMatrix transform;
};

// b^T b for a d x k basis matrix of full column rank.
GramForm exact_gram(IntMatrix const& b);

// LLL reduction of a Gram matrix, delta = 99/100, exact integer arithmetic.
ReductionResult lll_reduce(GramForm const& g);

// Deterministic representative of the GL_n(Z) class of g (n <= 6): among all
// bases built greedily from shortest vectors that extend the partial basis
// to a basis of the lattice, the one whose Gram matrix has the least key,
// read column by column as (G_jj, G_0j, ..., G_{j-1,j}).
ReductionResult canonical_gram(GramForm const& g);

// Squared successive minima lambda_1^2 <= ... <= lambda_n^2 (n <= 6).
std::vector<BigInt> successive_minima(GramForm const& g);

// Canonical form together with the minima; one enumeration serves both.
struct ShapeReduction {
  ReductionResult canonical;
  std::vector<BigInt> minima;
};
ShapeReduction reduce_shape(GramForm const& g);

// Number of nonzero integer vectors x with x^T g x <= radius^2.  g must be
// symmetric positive definite (smallest eigenvalue above 1e-9, relative).
std::size_t count_points_in_ball(RealMatrix const& g, double radius);

// Floating-point counterpart of canonical_gram for real Gram matrices; ties
// between vector norms are resolved with a relative tolerance of 1e-9.
struct RealReduction {
  RealMatrix reduced;
  Eigen::MatrixXi transform;
};
RealReduction canonical_gram_real(RealMatrix const& g);

// Squared successive minima of a real Gram matrix (n <= 6).
std::vector<double> successive_minima_real(RealMatrix const& g);

RealMatrix to_real(IntMatrix const& m);

}  // namespace covpolar
