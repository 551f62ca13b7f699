#pragma once

#include <cstdint>
#include <vector>

#include "covpolar/exact/matrix.hpp"
#include "covpolar/lattice/ortho.hpp"
#include "covpolar/sphere/sphere.hpp"

namespace covpolar {

bool is_p_power(BigInt const& n, std::int64_t p);

// Matrix over Z[1/p]; entry (i, j) is numerator(i, j) / p^exponent(i, j) with
// p not dividing a nonzero numerator and exponent 0 for a zero entry.
class PInvMatrix {
 public:
  // Throws PreconditionError when some denominator is not a power of p.
  PInvMatrix(std::int64_t p, RatMatrix const& m);
  // num / p^exponent, reduced entrywise.
  PInvMatrix(std::int64_t p, IntMatrix const& num, unsigned exponent);
  static PInvMatrix identity(std::int64_t p, std::size_t n);

  std::int64_t prime() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt const& numerator(std::size_t i, std::size_t j) const { return num_[i * cols_ + j]; }
  unsigned exponent(std::size_t i, std::size_t j) const { return exp_[i * cols_ + j]; }
  unsigned max_exponent() const;
  bool is_integral() const { return max_exponent() == 0; }

  // Integer numerators over the common denominator p^max_exponent().
  IntMatrix common_numerators() const;

  Rational entry(std::size_t i, std::size_t j) const;
  RatMatrix to_rational() const;
  PInvMatrix transpose() const;

  friend PInvMatrix operator*(PInvMatrix const& a, PInvMatrix const& b);
  friend bool operator==(PInvMatrix const&, PInvMatrix const&) = default;

 private:
  PInvMatrix() = default;

  std::int64_t p_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> num_;
  std::vector<unsigned> exp_;
};

// Exact rational rotation: R^T R = I and det R = 1.
class RationalRotation {
 public:
  // Throws PreconditionError unless r is special orthogonal.
  explicit RationalRotation(RatMatrix r);
  RatMatrix const& matrix() const { return r_; }
  std::size_t dim() const { return r_.rows(); }

 private:
  RatMatrix r_;
};

// Integer antisymmetric matrices b_i b_j^T - b_j b_i^T over pairs of basis
// vectors of v-perp; (d-1)(d-2)/2 of them, each with A v = 0.
std::vector<IntMatrix> antisym_kernel_basis(PrimVector const& v);

// (I - A)(I + A)^-1 for antisymmetric A; DegenerateInput if I + A is singular.
RationalRotation cayley(RatMatrix const& a);

// All distinct rotations Cayley(K / p^k) with K antisymmetric, entries in
// [-height, height], 0 <= k <= height, whose denominators are powers of p.
// Computed once per (d, p, height) and cached.
std::vector<PInvMatrix> const& rotation_pool(std::size_t d, std::int64_t p, int height);

// Rotations from the pool carrying v to an integral primitive vector.  The
// identity is always first.
std::vector<PInvMatrix> find_p_rotations(PrimVector const& v, std::int64_t p, int height);

struct FactoryOutput {
  PrimVector w;
  SublatticeBasis lattice;
};

// w = gamma v with exact checks: integral, primitive, same norm, and
// covolume_sq(Lambda_w) = |v|^2.  Throws CertificateFailure on any failure.
FactoryOutput factory_step(PrimVector const& v, PInvMatrix const& gamma);

struct Gamma2Certificate {
  PInvMatrix gamma2;
  IntMatrix g_v;
  IntMatrix g_w;  // gamma1 g_v gamma2, in SL_d(Z)
};

// Per-vector data (g_v and its inverse) shared by many factory steps.
class FactoryContext {
 public:
  FactoryContext(PrimVector v, std::int64_t p);

  PrimVector const& v() const { return v_; }
  IntMatrix const& g_v() const { return gv_; }

  FactoryOutput step(PInvMatrix const& gamma) const;
  Gamma2Certificate certify(PInvMatrix const& gamma1) const;

 private:
  PrimVector v_;
  std::int64_t p_;
  IntMatrix gv_;
  IntMatrix gv_inv_;
};

// gamma2 = (gamma1 g_v)^-1 g_w, certified to have block form [[A, b], [0, 1]]
// with det A = 1 over Z[1/p] and gamma1 g_v gamma2 = g_w in SL_d(Z).  Throws
// CertificateFailure when any check fails.
Gamma2Certificate gamma2_of(PrimVector const& v, PInvMatrix const& gamma1);

// Signed permutation matrices with determinant 1.
std::vector<IntMatrix> signed_permutations_det1(std::size_t d);

struct ClassBounds {
  int height = 1;
  std::size_t max_size = 100000;
};

struct EquivalenceClass {
  PrimVector v;
  std::int64_t p;
  std::vector<PrimVector> members;  // sorted
  bool truncated = false;
  std::uint64_t certificates = 0;   // certified p-rotation steps
};

// Closure of {v} under SO_d(Z) and the factory steps of the rotation pool.
EquivalenceClass equivalence_class(PrimVector const& v, std::int64_t p, ClassBounds bounds);

}  // namespace covpolar
