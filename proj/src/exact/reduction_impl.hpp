#pragma once

// Templated kernels shared by the exact (SafeInt / BigInt) and floating
// (double) reduction paths.  Private to the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "covpolar/error.hpp"
#include "covpolar/exact/gram.hpp"
#include "covpolar/exact/integer.hpp"
#include "covpolar/exact/matrix.hpp"

namespace covpolar::detail {

inline constexpr std::size_t kRank = kMaxShapeRank;
using Coeffs = std::array<std::int64_t, kRank>;

inline double as_double(double x) { return x; }
inline double as_double(SafeInt x) { return to_double(x); }
inline double as_double(BigInt const& x) { return to_double(x); }

// ---------------------------------------------------------------------------
// Integral LLL on a Gram matrix (all quantities stay integers: d_i are the
// leading Gram determinants, lam(k, j) = d_{j+1} * mu_kj).

template <class Z>
struct LllOutput {
  BasicMatrix<Z> gram;
  BasicMatrix<Z> transform;
};

template <class Z>
LllOutput<Z> lll_integral(BasicMatrix<Z> g, long delta_num = 99,
                          long delta_den = 100) {
  std::size_t const n = g.rows();
  BasicMatrix<Z> h = BasicMatrix<Z>::identity(n);
  if (n <= 1) return {std::move(g), std::move(h)};

  std::vector<Z> d(n + 1, Z(0));
  BasicMatrix<Z> lam(n, n);
  d[0] = Z(1);
  d[1] = g(0, 0);
  if (!(d[1] > 0)) throw DegenerateInput("Gram matrix is not positive definite");

  Z const p(delta_num);
  Z const q(delta_den);

  auto reduce = [&](std::size_t k, std::size_t l) {
    Z two_lam = Z(2) * lam(k, l);
    if (abs_value(two_lam) <= d[l + 1]) return;
    Z r = round_div(lam(k, l), d[l + 1]);
    for (std::size_t i = 0; i < n; ++i) h(i, k) = h(i, k) - r * h(i, l);
    Z gkk = g(k, k) - Z(2) * r * g(k, l) + r * r * g(l, l);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      Z v = g(k, j) - r * g(l, j);
      g(k, j) = v;
      g(j, k) = v;
    }
    g(k, k) = gkk;
    lam(k, l) = lam(k, l) - r * d[l + 1];
    for (std::size_t i = 0; i < l; ++i) lam(k, i) = lam(k, i) - r * lam(l, i);
  };

  auto swap_rows = [&](std::size_t k, std::size_t kmax) {
    for (std::size_t i = 0; i < n; ++i) std::swap(h(i, k), h(i, k - 1));
    for (std::size_t j = 0; j < n; ++j) std::swap(g(k, j), g(k - 1, j));
    for (std::size_t j = 0; j < n; ++j) std::swap(g(j, k), g(j, k - 1));
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lam(k, j), lam(k - 1, j));
    Z lm = lam(k, k - 1);
    Z b = (d[k - 1] * d[k + 1] + lm * lm) / d[k];
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      Z t = lam(i, k);
      lam(i, k) = (d[k + 1] * lam(i, k - 1) - lm * t) / d[k];
      lam(i, k - 1) = (b * t + lm * lam(i, k)) / d[k + 1];
    }
    d[k] = b;
  };

  std::size_t k = 1;
  std::size_t kmax = 0;
  while (k < n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 0; j <= k; ++j) {
        Z u = g(k, j);
        for (std::size_t i = 0; i < j; ++i) {
          u = (d[i + 1] * u - lam(k, i) * lam(j, i)) / d[i];
        }
        if (j < k) {
          lam(k, j) = u;
        } else {
          if (!(u > 0)) {
            throw DegenerateInput("Gram matrix is not positive definite");
          }
          d[k + 1] = u;
        }
      }
    }
    reduce(k, k - 1);
    Z lhs = q * d[k + 1] * d[k - 1];
    Z rhs = p * d[k] * d[k] - q * lam(k, k - 1) * lam(k, k - 1);
    if (lhs < rhs) {
      swap_rows(k, kmax);
      k = std::max<std::size_t>(1, k - 1);
    } else {
      for (std::size_t l = k - 1; l-- > 0;) reduce(k, l);
      ++k;
    }
  }
  return {std::move(g), std::move(h)};
}

// ---------------------------------------------------------------------------
// Fincke-Pohst enumeration.  Emits one vector of each +-pair (the last
// nonzero coordinate is positive) whose approximate norm is <= bound.

struct Cholesky {
  std::size_t n = 0;
  std::array<double, kRank> diag{};                   // r_ii^2
  std::array<std::array<double, kRank>, kRank> mu{};  // r_ij / r_ii, j > i
};

template <class S>
Cholesky cholesky_of(BasicMatrix<S> const& g) {
  Cholesky c;
  std::size_t const n = g.rows();
  if (n > kRank) throw PreconditionError("rank exceeds the supported maximum");
  c.n = n;
  std::array<std::array<double, kRank>, kRank> r{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = as_double(g(i, j));
      for (std::size_t k = 0; k < i; ++k) s -= r[k][i] * r[k][j];
      if (i == j) {
        if (!(s > 0)) throw DegenerateInput("Gram matrix is not positive definite");
        r[i][i] = std::sqrt(s);
      } else {
        r[i][j] = s / r[i][i];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    c.diag[i] = r[i][i] * r[i][i];
    for (std::size_t j = i + 1; j < n; ++j) c.mu[i][j] = r[i][j] / r[i][i];
  }
  return c;
}

template <class Visit>
void enumerate_half(Cholesky const& c, double bound, Visit&& visit) {
  std::size_t const n = c.n;
  if (n == 0 || !(bound > 0)) return;
  Coeffs x{};
  // Recursive lambda over the coordinate index, from n-1 down to 0.
  auto rec = [&](auto&& self, std::size_t i, double remaining,
                 bool tail_zero) -> void {
    double center = 0;
    for (std::size_t j = i + 1; j < n; ++j) center -= c.mu[i][j] * x[j];
    double const width = std::sqrt(std::max(0.0, remaining) / c.diag[i]);
    auto lo = static_cast<std::int64_t>(std::ceil(center - width));
    auto const hi = static_cast<std::int64_t>(std::floor(center + width));
    if (tail_zero) lo = std::max<std::int64_t>(lo, i == 0 ? 1 : 0);
    for (std::int64_t v = lo; v <= hi; ++v) {
      double const t = static_cast<double>(v) - center;
      double const rest = remaining - c.diag[i] * t * t;
      if (rest < 0) continue;
      x[i] = v;
      if (i == 0) {
        visit(x);
      } else {
        self(self, i - 1, rest, tail_zero && v == 0);
      }
    }
    x[i] = 0;
  };
  rec(rec, n - 1, bound, true);
}

template <class S>
S quadratic_form(BasicMatrix<S> const& g, Coeffs const& x, std::size_t n) {
  S s(0);
  for (std::size_t a = 0; a < n; ++a) {
    if (x[a] == 0) continue;
    S row(0);
    for (std::size_t b = 0; b < n; ++b) {
      if (x[b] != 0) row += g(a, b) * S(x[b]);
    }
    s += S(x[a]) * row;
  }
  return s;
}

template <class S>
S bilinear_form(BasicMatrix<S> const& g, Coeffs const& x, Coeffs const& y,
                std::size_t n) {
  S s(0);
  for (std::size_t a = 0; a < n; ++a) {
    if (x[a] == 0) continue;
    S row(0);
    for (std::size_t b = 0; b < n; ++b) {
      if (y[b] != 0) row += g(a, b) * S(y[b]);
    }
    s += S(x[a]) * row;
  }
  return s;
}

// Comparison policies: exact for integer rings, relative tolerance for double.
template <class S>
struct ExactOrder {
  bool less(S const& a, S const& b) const { return a < b; }
  bool equal(S const& a, S const& b) const { return a == b; }
  bool within(S const& a, S const& bound) const { return a <= bound; }
  double slack(S const& bound) const { return 0.5 + 1e-9 * as_double(bound); }
};

struct ToleranceOrder {
  double tol = 1e-9;
  double scale(double a, double b) const {
    return tol * std::max({1.0, std::abs(a), std::abs(b)});
  }
  bool equal(double a, double b) const { return std::abs(a - b) <= scale(a, b); }
  bool less(double a, double b) const { return a < b - scale(a, b); }
  bool within(double a, double bound) const { return a <= bound + scale(a, bound); }
  double slack(double bound) const { return 1e-7 * std::max(1.0, bound); }
};

template <class S>
struct ShortVectors {
  std::vector<Coeffs> coeffs;
  std::vector<S> norms;
};

template <class S, class Order>
ShortVectors<S> short_vectors(BasicMatrix<S> const& g, Cholesky const& chol,
                              S const& bound, Order const& order) {
  std::size_t const n = g.rows();
  std::vector<std::pair<S, Coeffs>> found;
  enumerate_half(chol, as_double(bound) + order.slack(bound),
                 [&](Coeffs const& x) {
                   S q = quadratic_form(g, x, n);
                   if (order.within(q, bound)) found.emplace_back(q, x);
                 });
  std::sort(found.begin(), found.end(), [](auto const& a, auto const& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  ShortVectors<S> out;
  out.coeffs.reserve(found.size());
  out.norms.reserve(found.size());
  for (auto& f : found) {
    out.norms.push_back(f.first);
    out.coeffs.push_back(f.second);
  }
  return out;
}

// Incremental rank test over Z^n with fraction-free elimination.
class RankTracker {
 public:
  explicit RankTracker(std::size_t n) : n_(n) {}

  // Adds x when it is independent of the vectors added so far.
  bool try_add(Coeffs const& x) {
    std::array<SafeInt, kRank> v{};
    for (std::size_t i = 0; i < n_; ++i) v[i] = x[i];
    for (auto const& row : rows_) {
      std::size_t const c = row.pivot;
      if (v[c] == 0) continue;
      SafeInt const a = row.v[c];
      SafeInt const b = v[c];
      for (std::size_t i = 0; i < n_; ++i) v[i] = a * v[i] - b * row.v[i];
      SafeInt g(0);
      for (std::size_t i = 0; i < n_; ++i) g = gcd(g, v[i]);
      if (g > 1) {
        for (std::size_t i = 0; i < n_; ++i) v[i] = v[i] / g;
      }
    }
    std::size_t pivot = n_;
    for (std::size_t i = 0; i < n_; ++i) {
      if (v[i] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == n_) return false;
    Row r{v, pivot};
    auto pos = std::find_if(rows_.begin(), rows_.end(),
                            [&](Row const& o) { return o.pivot > pivot; });
    rows_.insert(pos, r);
    return true;
  }
  std::size_t rank() const { return rows_.size(); }

 private:
  struct Row {
    std::array<SafeInt, kRank> v;
    std::size_t pivot;
  };
  std::size_t n_;
  std::vector<Row> rows_;
};

template <class S>
std::vector<S> minima_from(ShortVectors<S> const& sv, std::size_t n) {
  std::vector<S> minima;
  RankTracker tracker(n);
  for (std::size_t i = 0; i < sv.coeffs.size() && minima.size() < n; ++i) {
    if (tracker.try_add(sv.coeffs[i])) minima.push_back(sv.norms[i]);
  }
  if (minima.size() != n) {
    throw DegenerateInput("short vectors do not span the lattice");
  }
  return minima;
}

// ---------------------------------------------------------------------------
// Greedy basis search with lexicographic tie-break.

template <class S, class Order>
class GreedyBasisSearch {
 public:
  GreedyBasisSearch(BasicMatrix<S> const& g, ShortVectors<S> const& sv,
                    Order order)
      : g_(g), sv_(sv), order_(order), n_(g.rows()) {}

  // Returns false when some unpruned branch ran out of candidate vectors;
  // the caller must enlarge the enumeration radius and retry.
  bool run() {
    Square winv{};
    for (std::size_t i = 0; i < n_; ++i) winv[i * n_ + i] = 1;
    key_.assign(n_ * (n_ + 1) / 2, S(0));
    best_key_.clear();
    have_best_ = false;
    incomplete_ = false;
    descend(0, winv);
    return have_best_ && !incomplete_;
  }

  std::vector<S> const& key() const { return best_key_; }
  std::array<Coeffs, kRank> const& basis() const { return best_basis_; }

  BasicMatrix<S> reduced_gram() const {
    BasicMatrix<S> r(n_, n_);
    std::size_t pos = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      r(j, j) = best_key_[pos++];
      for (std::size_t i = 0; i < j; ++i) {
        r(i, j) = best_key_[pos];
        r(j, i) = best_key_[pos];
        ++pos;
      }
    }
    return r;
  }

 private:
  using Square = std::array<SafeInt, kRank * kRank>;

  static std::size_t offset(std::size_t col) { return col * (col + 1) / 2; }

  // -1 when the first `len` key entries beat the incumbent, 0 when equal,
  // +1 when worse.
  int compare_prefix(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (order_.equal(key_[i], best_key_[i])) continue;
      return order_.less(key_[i], best_key_[i]) ? -1 : 1;
    }
    return 0;
  }

  void descend(std::size_t level, Square const& winv) {
    if (level == n_) {
      if (!have_best_ || compare_prefix(key_.size()) < 0) {
        best_key_ = key_;
        best_basis_ = chosen_;
        have_best_ = true;
      }
      return;
    }
    // Candidates: shortest vectors extending the partial basis.
    std::vector<std::pair<std::size_t, std::array<SafeInt, kRank>>> cands;
    S min_norm{};
    bool have_min = false;
    for (std::size_t idx = 0; idx < sv_.coeffs.size(); ++idx) {
      if (have_min && !order_.equal(sv_.norms[idx], min_norm)) break;
      auto const& x = sv_.coeffs[idx];
      std::array<SafeInt, kRank> y{};
      for (std::size_t r = 0; r < n_; ++r) {
        SafeInt s(0);
        for (std::size_t c = 0; c < n_; ++c) {
          if (x[c] != 0) s += winv[r * n_ + c] * SafeInt(x[c]);
        }
        y[r] = s;
      }
      SafeInt g(0);
      for (std::size_t r = level; r < n_; ++r) g = gcd(g, y[r]);
      if (g != 1) continue;
      if (!have_min) {
        have_min = true;
        min_norm = sv_.norms[idx];
      }
      cands.emplace_back(idx, y);
    }
    if (cands.empty()) {
      incomplete_ = true;
      return;
    }
    std::size_t const col = offset(level);
    for (auto const& [idx, y0] : cands) {
      for (int s : {1, -1}) {
        if (level == 0 && s < 0) continue;
        Coeffs x = sv_.coeffs[idx];
        std::array<SafeInt, kRank> y = y0;
        if (s < 0) {
          for (std::size_t i = 0; i < n_; ++i) {
            x[i] = -x[i];
            y[i] = -y[i];
          }
        }
        key_[col] = sv_.norms[idx];
        for (std::size_t j = 0; j < level; ++j) {
          key_[col + 1 + j] = bilinear_form(g_, chosen_[j], x, n_);
        }
        if (have_best_ && compare_prefix(offset(level + 1)) > 0) continue;
        chosen_[level] = x;
        descend(level + 1, advance(winv, y, level));
      }
    }
  }

  // New inverse completion: rows of winv are transformed so that the chosen
  // vector (with coordinates y under winv) maps to e_level.
  Square advance(Square const& winv, std::array<SafeInt, kRank> const& y,
                 std::size_t level) const {
    std::size_t const m = n_ - level;
    std::array<SafeInt, kRank> t{};
    Square tm{};  // m x m, row stride n_
    for (std::size_t i = 0; i < m; ++i) {
      t[i] = y[level + i];
      tm[i * n_ + i] = 1;
    }
    auto swap_row = [&](std::size_t a, std::size_t b) {
      std::swap(t[a], t[b]);
      for (std::size_t c = 0; c < m; ++c) std::swap(tm[a * n_ + c], tm[b * n_ + c]);
    };
    for (;;) {
      std::size_t best = m;
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i] != 0 && (best == m || abs(t[i]) < abs(t[best]))) best = i;
      }
      if (best != 0) swap_row(0, best);
      bool done = true;
      for (std::size_t i = 1; i < m; ++i) {
        if (t[i] == 0) continue;
        SafeInt qt = t[i] / t[0];
        t[i] = t[i] - qt * t[0];
        for (std::size_t c = 0; c < m; ++c) {
          tm[i * n_ + c] = tm[i * n_ + c] - qt * tm[c];
        }
        if (t[i] != 0) done = false;
      }
      if (done) break;
    }
    if (t[0] < 0) {
      for (std::size_t c = 0; c < m; ++c) tm[c] = -tm[c];
    }
    Square out{};
    // Tail rows: T * winv_tail.
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t c = 0; c < n_; ++c) {
        SafeInt s(0);
        for (std::size_t k = 0; k < m; ++k) {
          if (tm[i * n_ + k] != 0) s += tm[i * n_ + k] * winv[(level + k) * n_ + c];
        }
        out[(level + i) * n_ + c] = s;
      }
    }
    // Head rows: winv_r - y_r * (new row `level`).
    for (std::size_t r = 0; r < level; ++r) {
      for (std::size_t c = 0; c < n_; ++c) {
        out[r * n_ + c] = winv[r * n_ + c] - y[r] * out[level * n_ + c];
      }
    }
    return out;
  }

  BasicMatrix<S> const& g_;
  ShortVectors<S> const& sv_;
  Order order_;
  std::size_t n_;
  std::vector<S> key_;
  std::vector<S> best_key_;
  std::array<Coeffs, kRank> chosen_{};
  std::array<Coeffs, kRank> best_basis_{};
  bool have_best_ = false;
  bool incomplete_ = false;
};

}  // namespace covpolar::detail
