#include "covpolar/exact/gram.hpp"

#include <algorithm>
#include <cmath>

#include "covpolar/error.hpp"
#include "fast_path.hpp"
#include "reduction_impl.hpp"

namespace covpolar {

namespace {

using detail::Coeffs;

using detail::with_fast_path;

template <class Z>
ShapeReduction reduce_shape_in(IntMatrix const& input) {
  std::size_t const n = input.rows();
  auto lll = detail::lll_integral(convert_matrix<Z>(input));
  Z bound = lll.gram(0, 0);
  for (std::size_t i = 1; i < n; ++i) bound = std::max(bound, lll.gram(i, i));

  detail::ExactOrder<Z> order;
  auto const chol = detail::cholesky_of(lll.gram);
  auto sv = detail::short_vectors(lll.gram, chol, bound, order);
  std::vector<Z> minima = detail::minima_from(sv, n);

  for (;;) {
    detail::GreedyBasisSearch<Z, detail::ExactOrder<Z>> search(lll.gram, sv, order);
    if (search.run()) {
      BasicMatrix<Z> x(n, n);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) x(i, j) = Z(search.basis()[j][i]);
      IntMatrix transform = convert_matrix<BigInt>(lll.transform * x);
      IntMatrix reduced = convert_matrix<BigInt>(search.reduced_gram());
      std::vector<BigInt> mins;
      for (auto const& m : minima) mins.push_back(to_big(m));
      return ShapeReduction{ReductionResult{GramForm(std::move(reduced)), std::move(transform)},
                            std::move(mins)};
    }
    bound = bound * Z(2);
    sv = detail::short_vectors(lll.gram, chol, bound, order);
  }
}

// Floating LLL (delta = 0.99) on a Gram matrix; Gram-Schmidt data is
// recomputed after every change, which is cheap for n <= 6.
struct FloatLll {
  BasicMatrix<double> gram;
  BasicMatrix<std::int64_t> transform;
};

void gram_schmidt(BasicMatrix<double> const& g, std::vector<double>& b,
                  BasicMatrix<double>& mu) {
  std::size_t const n = g.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= mu(i, k) * mu(j, k) * b[k];
      mu(i, j) = s / b[j];
    }
    double s = g(i, i);
    for (std::size_t k = 0; k < i; ++k) s -= mu(i, k) * mu(i, k) * b[k];
    if (!(s > 0)) throw DegenerateInput("Gram matrix is not positive definite");
    b[i] = s;
  }
}

FloatLll float_lll(BasicMatrix<double> g) {
  std::size_t const n = g.rows();
  auto h = BasicMatrix<std::int64_t>::identity(n);
  std::vector<double> b(n);
  BasicMatrix<double> mu(n, n);
  auto column_op = [&](std::size_t k, std::size_t l, double r) {
    // b_k <- b_k - r b_l
    for (std::size_t i = 0; i < n; ++i)
      h(i, k) -= static_cast<std::int64_t>(r) * h(i, l);
    double gkk = g(k, k) - 2 * r * g(k, l) + r * r * g(l, l);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      double v = g(k, j) - r * g(l, j);
      g(k, j) = v;
      g(j, k) = v;
    }
    g(k, k) = gkk;
  };
  std::size_t k = 1;
  std::size_t guard = 0;
  while (k < n) {
    if (++guard > 100000) throw NumericalConditioningError("floating LLL did not terminate");
    gram_schmidt(g, b, mu);
    for (std::size_t l = k; l-- > 0;) {
      double r = std::nearbyint(mu(k, l));
      if (r != 0 && std::abs(mu(k, l)) > 0.5 + 1e-12) {
        column_op(k, l, r);
        gram_schmidt(g, b, mu);
      }
    }
    if (b[k] < (0.99 - mu(k, k - 1) * mu(k, k - 1)) * b[k - 1]) {
      for (std::size_t i = 0; i < n; ++i) std::swap(h(i, k), h(i, k - 1));
      for (std::size_t j = 0; j < n; ++j) std::swap(g(k, j), g(k - 1, j));
      for (std::size_t j = 0; j < n; ++j) std::swap(g(j, k), g(j, k - 1));
      k = std::max<std::size_t>(1, k - 1);
    } else {
      ++k;
    }
  }
  return {std::move(g), std::move(h)};
}

BasicMatrix<double> from_eigen(RealMatrix const& g) {
  BasicMatrix<double> m(g.rows(), g.cols());
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) m(i, j) = g(i, j);
  return m;
}

void require_real_gram(RealMatrix const& g) {
  if (g.rows() != g.cols() || g.rows() == 0) {
    throw PreconditionError("Gram matrix must be square and nonempty");
  }
  if (!g.allFinite()) throw DegenerateInput("Gram matrix has non-finite entries");
  double const scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DegenerateInput("Gram matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(g, Eigen::EigenvaluesOnly);
  double const lo = es.eigenvalues().minCoeff();
  double const hi = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(lo > 1e-9 * hi)) throw DegenerateInput("Gram matrix is not positive definite");
}

}  // namespace

GramForm::GramForm(IntMatrix g) : g_(std::move(g)) {
  if (g_.rows() != g_.cols() || g_.rows() == 0) {
    throw DegenerateInput("Gram matrix must be square and nonempty");
  }
  if (!g_.is_symmetric()) throw DegenerateInput("Gram matrix is not symmetric");
  std::size_t const n = g_.rows();
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix lead(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lead(i, j) = g_(i, j);
    BigInt m = determinant(lead);
    if (m <= 0) throw DegenerateInput("Gram matrix is not positive definite");
    if (k == n) det_ = m;
  }
}

GramForm exact_gram(IntMatrix const& b) {
  if (b.cols() == 0 || b.cols() > b.rows()) {
    throw DegenerateInput("basis must have between 1 and d columns");
  }
  return GramForm(b.transpose() * b);
}

ReductionResult lll_reduce(GramForm const& g) {
  return with_fast_path([&](auto tag) {
    using Z = decltype(tag);
    auto out = detail::lll_integral(convert_matrix<Z>(g.matrix()));
    return ReductionResult{GramForm(convert_matrix<BigInt>(out.gram)),
                           convert_matrix<BigInt>(out.transform)};
  });
}

ShapeReduction reduce_shape(GramForm const& g) {
  if (g.rank() > kMaxShapeRank) {
    throw PreconditionError("rank exceeds the supported maximum of 6");
  }
  return with_fast_path([&](auto tag) {
    return reduce_shape_in<decltype(tag)>(g.matrix());
  });
}

ReductionResult canonical_gram(GramForm const& g) { return reduce_shape(g).canonical; }

std::vector<BigInt> successive_minima(GramForm const& g) { return reduce_shape(g).minima; }

std::size_t count_points_in_ball(RealMatrix const& g, double radius) {
  require_real_gram(g);
  if (g.rows() > static_cast<Eigen::Index>(kMaxShapeRank)) {
    throw PreconditionError("rank exceeds the supported maximum of 6");
  }
  if (!(radius > 0)) return 0;
  double const r2 = radius * radius;
  auto lll = float_lll(from_eigen(g));
  auto const chol = detail::cholesky_of(lll.gram);
  std::size_t const n = g.rows();
  std::size_t half = 0;
  detail::enumerate_half(chol, r2 * (1 + 1e-9), [&](Coeffs const& x) {
    if (detail::quadratic_form(lll.gram, x, n) <= r2 * (1 + 1e-12)) ++half;
  });
  return 2 * half;
}

RealReduction canonical_gram_real(RealMatrix const& g) {
  require_real_gram(g);
  std::size_t const n = g.rows();
  if (n > kMaxShapeRank) throw PreconditionError("rank exceeds the supported maximum of 6");
  auto lll = float_lll(from_eigen(g));
  double bound = lll.gram(0, 0);
  for (std::size_t i = 1; i < n; ++i) bound = std::max(bound, lll.gram(i, i));
  detail::ToleranceOrder order;
  auto const chol = detail::cholesky_of(lll.gram);
  for (int attempt = 0; attempt < 16; ++attempt) {
    auto sv = detail::short_vectors(lll.gram, chol, bound, order);
    detail::GreedyBasisSearch<double, detail::ToleranceOrder> search(lll.gram, sv, order);
    if (search.run()) {
      RealReduction out;
      auto red = search.reduced_gram();
      out.reduced.resize(n, n);
      out.transform.resize(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          out.reduced(i, j) = red(i, j);
          std::int64_t s = 0;
          for (std::size_t k = 0; k < n; ++k) s += lll.transform(i, k) * search.basis()[j][k];
          out.transform(i, j) = static_cast<int>(s);
        }
      return out;
    }
    bound *= 2;
  }
  throw NumericalConditioningError("canonical search did not converge");
}

std::vector<double> successive_minima_real(RealMatrix const& g) {
  require_real_gram(g);
  std::size_t const n = g.rows();
  if (n > kMaxShapeRank) throw PreconditionError("rank exceeds the supported maximum of 6");
  auto lll = float_lll(from_eigen(g));
  double bound = lll.gram(0, 0);
  for (std::size_t i = 1; i < n; ++i) bound = std::max(bound, lll.gram(i, i));
  auto const chol = detail::cholesky_of(lll.gram);
  auto sv = detail::short_vectors(lll.gram, chol, bound, detail::ToleranceOrder{});
  return detail::minima_from(sv, n);
}

RealMatrix to_real(IntMatrix const& m) {
  RealMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
  return r;
}

}  // namespace covpolar
