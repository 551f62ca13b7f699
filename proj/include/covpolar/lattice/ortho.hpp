#pragma once

#include <cstdint>

#include "covpolar/exact/gram.hpp"
#include "covpolar/exact/matrix.hpp"
#include "covpolar/sphere/sphere.hpp"

namespace covpolar {

// Basis of a corank-1 sublattice of Z^d, columns are basis vectors.
struct SublatticeBasis {
  IntMatrix basis;
  bool canonical = false;  // column-style Hermite normal form

  std::size_t dim() const { return basis.rows(); }
};

// Unimodular d x d matrix whose first d-1 columns span v-perp in Z^d.
struct UnimodularCompletion {
  IntMatrix g;
};

// Column-style Hermite normal form: pivot rows increase, pivots are positive,
// entries left of a pivot are reduced into [0, pivot).  Throws DegenerateInput
// when the columns are dependent.
IntMatrix hermite_normal_form(IntMatrix const& b);

SublatticeBasis orthogonal_basis(PrimVector const& v);

// det = 1; the last column w has v . w = 1.
UnimodularCompletion complete_oriented(PrimVector const& v);

BigInt covolume_sq(SublatticeBasis const& b);

// Primitive normal of the hyperplane spanned by b, first nonzero coordinate
// positive.
PrimVector normal_vector(SublatticeBasis const& b);

struct BijectionRecord {
  int d = 0;
  std::int64_t n2 = 0;
  std::uint64_t vectors = 0;
  std::uint64_t sublattices = 0;           // distinct Lambda_v
  std::uint64_t oriented_sublattices = 0;  // (Lambda_v, orientation) pairs
};

// Checks covolume, the exact 2-to-1 collision pattern and the normal round
// trip over the whole sphere; throws CertificateFailure naming the first
// counterexample.
BijectionRecord verify_bijection(int d, std::int64_t n2);

}  // namespace covpolar
