#include "covpolar/exact/matrix.hpp"

#include <sstream>

namespace covpolar {

Rational determinant(RatMatrix a) {
  std::size_t const n = a.rows();
  if (n != a.cols()) throw PreconditionError("determinant of non-square matrix");
  Rational det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return Rational(0);
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(p, c));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

RatMatrix inverse(RatMatrix const& m) {
  std::size_t const n = m.rows();
  if (n != m.cols()) throw PreconditionError("inverse of non-square matrix");
  RatMatrix a = m;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw DegenerateInput("matrix is singular over the rationals");
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(k, c), a(p, c));
        std::swap(inv(k, c), inv(p, c));
      }
    }
    Rational pivot = a(k, k);
    for (std::size_t c = 0; c < n; ++c) {
      a(k, c) /= pivot;
      inv(k, c) /= pivot;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rational f = a(i, k);
      for (std::size_t c = 0; c < n; ++c) {
        a(i, c) -= f * a(k, c);
        inv(i, c) -= f * inv(k, c);
      }
    }
  }
  return inv;
}

RatMatrix to_rational(IntMatrix const& m) {
  std::vector<Rational> out(m.entries().begin(), m.entries().end());
  return RatMatrix(m.rows(), m.cols(), std::move(out));
}

std::string to_string(IntMatrix const& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace covpolar
