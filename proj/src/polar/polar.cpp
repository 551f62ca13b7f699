#include "covpolar/polar/polar.hpp"

#include <cmath>

#include "covpolar/error.hpp"
#include "covpolar/lattice/ortho.hpp"
#include "exact/fast_path.hpp"
#include "exact/reduction_impl.hpp"
#include "lattice/ortho_impl.hpp"

namespace covpolar {

Orientation orientation_of(IntVector const& v) {
  Orientation o;
  o.normal = sign_canonical(v);
  double const len = std::sqrt(static_cast<double>(norm2_of(o.normal)));
  if (len == 0) throw DegenerateInput("zero vector has no orientation");
  o.u.reserve(v.size());
  for (auto x : o.normal) o.u.push_back(static_cast<double>(x) / len);
  return o;
}

namespace {
ShapeReduction reduced(GramForm const& g) { return reduce_shape(g); }
}  // namespace

ShapeClass::ShapeClass(GramForm const& g) : ShapeClass(reduced(g)) {}

ShapeClass::ShapeClass(ShapeReduction r)
    : gram_(std::move(r.canonical.reduced)), minima_(std::move(r.minima)) {}

RealMatrix ShapeClass::unit_gram() const {
  double const n = static_cast<double>(rank());
  double const s = std::pow(to_double(scale()), 1.0 / n);
  return to_real(gram_.matrix()) / s;
}

PolarPoint polar_point(PrimVector const& v) {
  auto b = orthogonal_basis(v);
  return PolarPoint{orientation_of(v.coords()), ShapeClass(exact_gram(b.basis)), v.norm2()};
}

RealMatrix rotation_to_pole(IntVector const& v) {
  std::size_t const d = v.size();
  double const len = std::sqrt(static_cast<double>(norm2_of(v)));
  if (len == 0) throw DegenerateInput("zero vector has no pole rotation");
  Eigen::VectorXd u(d);
  for (std::size_t i = 0; i < d; ++i) u(i) = static_cast<double>(v[i]) / len;
  double tail = 0;
  for (std::size_t i = 0; i + 1 < d; ++i) tail += u(i) * u(i);
  if (tail == 0 && u(d - 1) > 0) return RealMatrix::Identity(d, d);
  // Householder reflection swapping u and e_d, then a reflection in e_1.
  Eigen::VectorXd w = u;
  w(d - 1) = u(d - 1) > 0 ? -tail / (1 + u(d - 1)) : u(d - 1) - 1;
  RealMatrix h = RealMatrix::Identity(d, d) - (2 / w.squaredNorm()) * w * w.transpose();
  h.row(0) *= -1;
  return h;
}

IwasawaTriple iwasawa(RealMatrix const& g) {
  if (g.rows() != g.cols() || g.rows() == 0) {
    throw PreconditionError("Iwasawa decomposition needs a square matrix");
  }
  if (!g.allFinite()) throw PreconditionError("matrix has non-finite entries");
  Eigen::JacobiSVD<RealMatrix> svd(g);
  auto const& sv = svd.singularValues();
  double const smax = sv(0);
  double const smin = sv(sv.size() - 1);
  if (!(smin > 0) || smax / smin > 1e12) {
    throw NumericalConditioningError("matrix condition number exceeds 1e12");
  }
  if (!(g.determinant() > 0)) throw PreconditionError("Iwasawa decomposition needs det > 0");
  Eigen::HouseholderQR<RealMatrix> qr(g);
  Eigen::Index const d = g.rows();
  RealMatrix q = qr.householderQ();
  RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (r(i, i) < 0) {
      r.row(i) *= -1;
      q.col(i) *= -1;
    }
  }
  IwasawaTriple t;
  t.rho = q;
  t.a = RealMatrix::Zero(d, d);
  t.n = r;
  for (Eigen::Index i = 0; i < d; ++i) {
    t.a(i, i) = r(i, i);
    t.n.row(i) /= r(i, i);
    t.n(i, i) = 1;
  }
  return t;
}

ShapeStatistics shape_statistics(ShapeClass const& s, double radius) {
  double const n = static_cast<double>(s.rank());
  double const scale = std::pow(to_double(s.scale()), 1.0 / n);
  ShapeStatistics st;
  st.lambda1 = std::sqrt(to_double(s.minima().front()) / scale);
  st.ratio = std::sqrt(to_double(s.minima().back()) / to_double(s.minima().front()));
  st.ball_count = count_points_in_ball(s.unit_gram(), radius);
  return st;
}

ShapeStatistics shape_statistics_real(RealMatrix const& g, double radius) {
  double const det = g.determinant();
  if (!(det > 0)) throw DegenerateInput("Gram matrix is not positive definite");
  RealMatrix unit = g / std::pow(det, 1.0 / static_cast<double>(g.rows()));
  auto minima = successive_minima_real(unit);
  ShapeStatistics st;
  st.lambda1 = std::sqrt(minima.front());
  st.ratio = std::sqrt(minima.back() / minima.front());
  st.ball_count = count_points_in_ball(unit, radius);
  return st;
}

namespace {

template <class Z>
ShapeStatistics summary_stats(IntVector const& v, std::int64_t n2, double radius) {
  auto k = detail::kernel_of<Z>(v);
  auto lll = detail::lll_integral(detail::gram_of(k.basis));
  std::size_t const n = lll.gram.rows();
  Z bound = lll.gram(0, 0);
  for (std::size_t i = 1; i < n; ++i) bound = std::max(bound, lll.gram(i, i));
  auto const chol = detail::cholesky_of(lll.gram);
  detail::ExactOrder<Z> order;
  auto sv = detail::short_vectors(lll.gram, chol, bound, order);
  auto minima = detail::minima_from(sv, n);

  double const scale = std::pow(static_cast<double>(n2), 1.0 / static_cast<double>(n));
  ShapeStatistics st;
  st.lambda1 = std::sqrt(detail::as_double(minima.front()) / scale);
  st.ratio = std::sqrt(detail::as_double(minima.back()) / detail::as_double(minima.front()));
  // Same criterion as count_points_in_ball on G / scale.
  double const r2 = radius * radius;
  std::uint64_t half = 0;
  if (radius > 0) {
    detail::enumerate_half(chol, r2 * scale * (1 + 1e-9), [&](detail::Coeffs const& x) {
      double q = detail::as_double(detail::quadratic_form(lll.gram, x, n)) / scale;
      if (q <= r2 * (1 + 1e-12)) ++half;
    });
  }
  st.ball_count = 2 * half;
  return st;
}

}  // namespace

PolarSummary summarize_vector(IntVector const& v, double radius) {
  PolarSummary s;
  s.n2 = norm2_of(v);
  if (gcd_of(v) != 1) throw PreconditionError("vector " + to_string(v) + " is not primitive");
  s.u = orientation_of(v).u;
  s.stats = detail::with_fast_path(
      [&](auto tag) { return summary_stats<decltype(tag)>(v, s.n2, radius); });
  return s;
}

}  // namespace covpolar
