#pragma once

// Templated kernels for the hyperplane sublattice; instantiated on SafeInt
// first and on BigInt when an intermediate overflows.

#include <vector>

#include "covpolar/error.hpp"
#include "covpolar/exact/integer.hpp"
#include "covpolar/exact/matrix.hpp"
#include "covpolar/sphere/sphere.hpp"

namespace covpolar::detail {

template <class Z>
void column_combine(BasicMatrix<Z>& m, std::size_t i, std::size_t j, Z const& a,
                    Z const& b, Z const& c, Z const& d) {
  // (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Z const xi = m(r, i);
    Z const xj = m(r, j);
    m(r, i) = a * xi + b * xj;
    m(r, j) = c * xi + d * xj;
  }
}

template <class Z>
void column_axpy(BasicMatrix<Z>& m, std::size_t dst, std::size_t src, Z const& q) {
  if (q == 0) return;
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, dst) = m(r, dst) - q * m(r, src);
}

// Column-style Hermite normal form of a full-column-rank matrix: pivot rows
// strictly increase with the column index, pivots are positive, and the
// entries left of a pivot lie in [0, pivot).
template <class Z>
BasicMatrix<Z> column_hnf(BasicMatrix<Z> b) {
  std::size_t const rows = b.rows();
  std::size_t const cols = b.cols();
  std::size_t k = 0;
  for (std::size_t r = 0; r < rows && k < cols; ++r) {
    for (std::size_t j = k + 1; j < cols; ++j) {
      if (b(r, j) == 0) continue;
      Z x, y;
      Z const a = b(r, k);
      Z const c = b(r, j);
      Z const g = extended_gcd(a, c, x, y);
      column_combine(b, k, j, x, y, Z(-(c / g)), Z(a / g));
    }
    if (b(r, k) == 0) continue;
    if (b(r, k) < 0) {
      for (std::size_t i = 0; i < rows; ++i) b(i, k) = -b(i, k);
    }
    for (std::size_t j = 0; j < k; ++j) column_axpy(b, j, k, floor_div(b(r, j), b(r, k)));
    ++k;
  }
  if (k != cols) throw DegenerateInput("basis is not of full column rank");
  return b;
}

template <class Z>
struct KernelData {
  BasicMatrix<Z> basis;  // d x (d-1), Hermite normal form
  std::vector<Z> w;      // v . w = 1
};

template <class Z>
KernelData<Z> kernel_of(IntVector const& v) {
  std::size_t const d = v.size();
  auto u = BasicMatrix<Z>::identity(d);
  std::vector<Z> r(v.begin(), v.end());
  std::size_t const last = d - 1;
  for (std::size_t i = 0; i < last; ++i) {
    if (r[i] == 0) continue;
    Z x, y;
    Z const a = r[i];
    Z const b = r[last];
    Z const g = extended_gcd(a, b, x, y);
    column_combine(u, i, last, Z(b / g), Z(-(a / g)), x, y);
    r[i] = Z(0);
    r[last] = g;
  }
  if (!(r[last] == 1 || r[last] == -1)) {
    throw PreconditionError("vector " + to_string(v) + " is not primitive");
  }
  KernelData<Z> out;
  BasicMatrix<Z> k(d, last);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < last; ++j) k(i, j) = u(i, j);
  out.basis = column_hnf(std::move(k));
  out.w.resize(d);
  for (std::size_t i = 0; i < d; ++i) out.w[i] = r[last] * u(i, last);
  return out;
}

template <class Z>
BasicMatrix<Z> gram_of(BasicMatrix<Z> const& b) {
  std::size_t const m = b.cols();
  BasicMatrix<Z> g(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      Z s(0);
      for (std::size_t r = 0; r < b.rows(); ++r) s += b(r, i) * b(r, j);
      g(i, j) = s;
      g(j, i) = s;
    }
  return g;
}

// ((-1)^i det(b without row i)) for a d x (d-1) matrix.
template <class Z>
std::vector<Z> signed_minors(BasicMatrix<Z> const& b) {
  std::size_t const d = b.rows();
  std::vector<Z> n(d);
  for (std::size_t i = 0; i < d; ++i) {
    BasicMatrix<Z> m(d - 1, d - 1);
    for (std::size_t r = 0, rr = 0; r < d; ++r) {
      if (r == i) continue;
      for (std::size_t c = 0; c + 1 < d; ++c) m(rr, c) = b(r, c);
      ++rr;
    }
    Z det = determinant(std::move(m));
    n[i] = (i % 2 == 0) ? det : Z(-det);
  }
  return n;
}

}  // namespace covpolar::detail
