#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "covpolar/error.hpp"
#include "covpolar/exact/integer.hpp"

namespace covpolar {

// Dense row-major matrix over an exact ring.  Columns are the basis vectors
// wherever a matrix represents a lattice basis.
template <class T>
class BasicMatrix {
 public:
  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  BasicMatrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw PreconditionError("matrix entry count does not match shape");
    }
  }
  // Row-major nested initializer, e.g. {{1, 0}, {0, 1}}.
  BasicMatrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (auto const& r : rows) {
      if (r.size() != cols_) throw PreconditionError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<T> const& entries() const { return data_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  T const& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_column(std::size_t j, std::vector<T> const& c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  BasicMatrix transpose() const {
    BasicMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend BasicMatrix operator*(BasicMatrix const& a, BasicMatrix const& b) {
    if (a.cols_ != b.rows_) throw PreconditionError("matrix shape mismatch");
    BasicMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        T const& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(BasicMatrix const& a, BasicMatrix const& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = BasicMatrix<BigInt>;
using RatMatrix = BasicMatrix<Rational>;

template <class To, class From>
BasicMatrix<To> convert_matrix(BasicMatrix<From> const& m) {
  std::vector<To> out;
  out.reserve(m.entries().size());
  for (auto const& e : m.entries()) {
    if constexpr (std::is_same_v<From, BigInt>) {
      out.push_back(from_big<To>(e));
    } else if constexpr (std::is_same_v<To, BigInt>) {
      out.push_back(to_big(e));
    } else {
      out.push_back(To(e));
    }
  }
  return BasicMatrix<To>(m.rows(), m.cols(), std::move(out));
}

// Fraction-free (Bareiss) determinant for integer rings.
template <class Z>
Z determinant(BasicMatrix<Z> a) {
  std::size_t const n = a.rows();
  if (n != a.cols()) throw PreconditionError("determinant of non-square matrix");
  if (n == 0) return Z(1);
  Z prev(1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return Z(0);
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(r, c));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    }
    prev = a(k, k);
  }
  Z d = a(n - 1, n - 1);
  return negate ? Z(-d) : d;
}

// Transposed cofactor matrix: a * adjugate(a) = det(a) I.
template <class Z>
BasicMatrix<Z> adjugate(BasicMatrix<Z> const& a) {
  std::size_t const n = a.rows();
  if (n != a.cols()) throw PreconditionError("adjugate of non-square matrix");
  BasicMatrix<Z> adj(n, n);
  if (n == 1) {
    adj(0, 0) = Z(1);
    return adj;
  }
  BasicMatrix<Z> sub(n - 1, n - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          sub(rr, cc++) = a(r, c);
        }
        ++rr;
      }
      Z minor = determinant(sub);
      adj(i, j) = (i + j) % 2 == 0 ? minor : Z(-minor);
    }
  return adj;
}

Rational determinant(RatMatrix a);

// Exact inverse over the rationals; throws DegenerateInput when singular.
RatMatrix inverse(RatMatrix const& a);

RatMatrix to_rational(IntMatrix const& m);

std::string to_string(IntMatrix const& m);

}  // namespace covpolar
