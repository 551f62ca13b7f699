#include "covpolar/padic/padic.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>

#include "covpolar/error.hpp"
#include "exact/fast_path.hpp"

namespace covpolar {

bool is_p_power(BigInt const& n, std::int64_t p) {
  if (n <= 0) return false;
  BigInt m = n;
  while (m % p == 0) m /= p;
  return m == 1;
}

namespace {

// n = num / den with den > 0, written as num' / p^k with p not dividing num'.
std::pair<BigInt, unsigned> to_p_form(Rational const& q, std::int64_t p) {
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  if (num == 0) return {BigInt(0), 0};
  unsigned k = 0;
  while (den % p == 0) {
    den /= p;
    ++k;
  }
  if (den != 1) throw PreconditionError("entry " + q.str() + " is not in Z[1/p]");
  return {num, k};
}

BigInt pow_big(std::int64_t p, unsigned k) {
  BigInt r = 1;
  for (unsigned i = 0; i < k; ++i) r *= p;
  return r;
}

}  // namespace

PInvMatrix::PInvMatrix(std::int64_t p, RatMatrix const& m)
    : p_(p), rows_(m.rows()), cols_(m.cols()) {
  if (p < 2 || !is_prime(p)) throw PreconditionError("PInvMatrix needs a prime");
  num_.reserve(rows_ * cols_);
  exp_.reserve(rows_ * cols_);
  for (auto const& e : m.entries()) {
    auto [n, k] = to_p_form(e, p);
    num_.push_back(std::move(n));
    exp_.push_back(k);
  }
}

PInvMatrix::PInvMatrix(std::int64_t p, IntMatrix const& num, unsigned exponent)
    : p_(p), rows_(num.rows()), cols_(num.cols()) {
  if (p < 2 || !is_prime(p)) throw PreconditionError("PInvMatrix needs a prime");
  num_.reserve(rows_ * cols_);
  exp_.reserve(rows_ * cols_);
  for (auto const& e : num.entries()) {
    BigInt n = e;
    unsigned k = exponent;
    if (n == 0) k = 0;
    while (k > 0 && n % p == 0) {
      n /= p;
      --k;
    }
    num_.push_back(std::move(n));
    exp_.push_back(k);
  }
}

IntMatrix PInvMatrix::common_numerators() const {
  unsigned const e = max_exponent();
  IntMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < num_.size(); ++i) {
    m(i / cols_, i % cols_) = num_[i] * pow_big(p_, e - exp_[i]);
  }
  return m;
}

PInvMatrix PInvMatrix::identity(std::int64_t p, std::size_t n) {
  return PInvMatrix(p, RatMatrix::identity(n));
}

unsigned PInvMatrix::max_exponent() const {
  return exp_.empty() ? 0 : *std::max_element(exp_.begin(), exp_.end());
}

Rational PInvMatrix::entry(std::size_t i, std::size_t j) const {
  return Rational(numerator(i, j), pow_big(p_, exponent(i, j)));
}

RatMatrix PInvMatrix::to_rational() const {
  RatMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = entry(i, j);
  return m;
}

PInvMatrix PInvMatrix::transpose() const {
  PInvMatrix t;
  t.p_ = p_;
  t.rows_ = cols_;
  t.cols_ = rows_;
  t.num_.resize(num_.size());
  t.exp_.resize(exp_.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      t.num_[j * rows_ + i] = num_[i * cols_ + j];
      t.exp_[j * rows_ + i] = exp_[i * cols_ + j];
    }
  return t;
}

PInvMatrix operator*(PInvMatrix const& a, PInvMatrix const& b) {
  if (a.p_ != b.p_) throw PreconditionError("PInvMatrix primes differ");
  return PInvMatrix(a.p_, a.to_rational() * b.to_rational());
}

RationalRotation::RationalRotation(RatMatrix r) : r_(std::move(r)) {
  std::size_t const n = r_.rows();
  if (r_.cols() != n) throw PreconditionError("rotation must be square");
  if (!(r_.transpose() * r_ == RatMatrix::identity(n))) {
    throw PreconditionError("matrix is not orthogonal");
  }
  if (determinant(r_) != 1) throw PreconditionError("rotation must have det 1");
}

std::vector<IntMatrix> antisym_kernel_basis(PrimVector const& v) {
  IntMatrix const b = orthogonal_basis(v).basis;
  std::size_t const d = v.dim();
  std::vector<IntMatrix> out;
  for (std::size_t i = 0; i + 1 < d; ++i)
    for (std::size_t j = i + 1; j + 1 < d; ++j) {
      IntMatrix a(d, d);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) a(r, c) = b(r, i) * b(c, j) - b(r, j) * b(c, i);
      out.push_back(std::move(a));
    }
  return out;
}

RationalRotation cayley(RatMatrix const& a) {
  std::size_t const n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) != -a(j, i)) throw PreconditionError("Cayley transform needs antisymmetric A");
  RatMatrix plus = RatMatrix::identity(n);
  RatMatrix minus = RatMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      plus(i, j) += a(i, j);
      minus(i, j) -= a(i, j);
    }
  return RationalRotation(minus * inverse(plus));
}

namespace {

struct PoolEntry {
  std::vector<std::int64_t> num;  // row-major
  std::int64_t den;
};

struct Pool {
  std::vector<PoolEntry> entries;
  std::vector<PInvMatrix> mats;
};

template <class Z>
Z det_small(std::vector<Z> m, std::size_t n) {
  BasicMatrix<Z> b(n, n, std::move(m));
  return determinant(std::move(b));
}

// Cayley(K / t) = (tI - K) adj(tI + K) / det(tI + K), reduced to lowest terms.
std::optional<PoolEntry> cayley_entry(std::vector<SafeInt> const& k, std::size_t d,
                                      SafeInt t, std::int64_t p) {
  std::vector<SafeInt> m(d * d), minus(d * d);
  for (std::size_t i = 0; i < d * d; ++i) {
    m[i] = k[i];
    minus[i] = -k[i];
  }
  for (std::size_t i = 0; i < d; ++i) {
    m[i * d + i] = t;
    minus[i * d + i] = t;
  }
  SafeInt const det = det_small(m, d);
  if (det == 0) return std::nullopt;
  // adjugate: adj(i, j) = (-1)^(i+j) minor(j, i)
  std::vector<SafeInt> adj(d * d);
  std::vector<SafeInt> sub((d - 1) * (d - 1));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      std::size_t pos = 0;
      for (std::size_t r = 0; r < d; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0; c < d; ++c) {
          if (c == i) continue;
          sub[pos++] = m[r * d + c];
        }
      }
      SafeInt minor = det_small(sub, d - 1);
      adj[i * d + j] = ((i + j) % 2 == 0) ? minor : -minor;
    }
  PoolEntry e;
  e.num.resize(d * d);
  SafeInt g = det;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      SafeInt s(0);
      for (std::size_t l = 0; l < d; ++l) s += minus[i * d + l] * adj[l * d + j];
      e.num[i * d + j] = s.value();
      g = gcd(g, s);
    }
  SafeInt den = det / g;
  if (den < 0) {
    den = -den;
    g = -g;
  }
  for (auto& x : e.num) x = (SafeInt(x) / g).value();
  e.den = den.value();
  if (!is_p_power(BigInt(e.den), p)) return std::nullopt;
  return e;
}

Pool build_pool(std::size_t d, std::int64_t p, int height) {
  if (d < 2) throw PreconditionError("rotation pool needs d >= 2");
  if (height < 0) throw PreconditionError("height bound must be nonnegative");
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) slots.emplace_back(i, j);
  Pool pool;
  std::set<std::pair<std::int64_t, std::vector<std::int64_t>>> seen;
  auto add = [&](PoolEntry e) {
    if (!seen.emplace(e.den, e.num).second) return;
    RatMatrix r(d, d);
    for (std::size_t i = 0; i < d * d; ++i) r(i / d, i % d) = Rational(e.num[i], e.den);
    pool.mats.emplace_back(p, r);
    pool.entries.push_back(std::move(e));
  };
  PoolEntry id{std::vector<std::int64_t>(d * d, 0), 1};
  for (std::size_t i = 0; i < d; ++i) id.num[i * d + i] = 1;
  add(id);

  std::vector<int> coef(slots.size(), -height);
  std::vector<SafeInt> k(d * d);
  try {
    for (;;) {
      for (std::size_t s = 0; s < slots.size(); ++s) {
        auto [i, j] = slots[s];
        k[i * d + j] = coef[s];
        k[j * d + i] = -coef[s];
      }
      SafeInt t(1);
      for (int e = 0; e <= height; ++e) {
        if (auto entry = cayley_entry(k, d, t, p)) add(std::move(*entry));
        t = t * SafeInt(p);
      }
      std::size_t s = 0;
      while (s < coef.size() && coef[s] == height) coef[s++] = -height;
      if (s == coef.size()) break;
      ++coef[s];
    }
  } catch (ExactOverflow const&) {
    throw CapacityError("height bound too large for the rotation search");
  }
  return pool;
}

Pool const& cached_pool(std::size_t d, std::int64_t p, int height) {
  static std::mutex mu;
  static std::map<std::tuple<std::size_t, std::int64_t, int>, Pool> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(d, p, height);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_pool(d, p, height)).first;
  return it->second;
}


}  // namespace

std::vector<PInvMatrix> const& rotation_pool(std::size_t d, std::int64_t p, int height) {
  if (p < 3 || !is_prime(p)) throw PreconditionError("rotation pool needs an odd prime");
  return cached_pool(d, p, height).mats;
}

std::vector<PInvMatrix> find_p_rotations(PrimVector const& v, std::int64_t p, int height) {
  if (p < 3 || !is_prime(p)) throw PreconditionError("p must be an odd prime");
  std::size_t const d = v.dim();
  Pool const& pool = cached_pool(d, p, height);
  std::vector<PInvMatrix> out;
  IntVector w(d);
  for (std::size_t e = 0; e < pool.entries.size(); ++e) {
    auto const& pe = pool.entries[e];
    bool integral = true;
    for (std::size_t i = 0; i < d && integral; ++i) {
      BigInt s = 0;
      for (std::size_t j = 0; j < d; ++j) s += BigInt(pe.num[i * d + j]) * v[j];
      if (s % pe.den != 0) {
        integral = false;
      } else {
        w[i] = BigInt(s / pe.den).convert_to<std::int64_t>();
      }
    }
    if (!integral || gcd_of(w) != 1 || norm2_of(w) != v.norm2()) continue;
    out.push_back(pool.mats[e]);
  }
  return out;
}

FactoryContext::FactoryContext(PrimVector v, std::int64_t p)
    : v_(std::move(v)), p_(p), gv_(complete_oriented(v_).g), gv_inv_(adjugate(gv_)) {}

FactoryOutput FactoryContext::step(PInvMatrix const& gamma) const {
  std::size_t const d = v_.dim();
  if (gamma.rows() != d || gamma.cols() != d || gamma.prime() != p_) {
    throw CertificateFailure("rotation has the wrong shape or prime");
  }
  IntMatrix const m = gamma.common_numerators();
  BigInt const q = pow_big(p_, gamma.max_exponent());
  IntMatrix qq = IntMatrix::identity(d);
  for (std::size_t i = 0; i < d; ++i) qq(i, i) = q * q;
  if (!(m.transpose() * m == qq) || determinant(m) != pow_big(p_, gamma.max_exponent() * d)) {
    throw CertificateFailure("gamma is not special orthogonal");
  }
  IntVector w(d);
  for (std::size_t i = 0; i < d; ++i) {
    BigInt s = 0;
    for (std::size_t j = 0; j < d; ++j) s += m(i, j) * v_[j];
    if (s % q != 0) {
      throw CertificateFailure("gamma v is not integral for v = " + to_string(v_.coords()));
    }
    w[i] = BigInt(s / q).convert_to<std::int64_t>();
  }
  if (gcd_of(w) != 1) {
    throw CertificateFailure("gamma v = " + to_string(w) + " is not primitive");
  }
  PrimVector pw(w);
  if (pw.norm2() != v_.norm2()) throw CertificateFailure("gamma changed the norm");
  auto lattice = orthogonal_basis(pw);
  if (covolume_sq(lattice) != v_.norm2()) {
    throw CertificateFailure("covolume not preserved for w = " + to_string(w));
  }
  return FactoryOutput{std::move(pw), std::move(lattice)};
}

Gamma2Certificate FactoryContext::certify(PInvMatrix const& gamma1) const {
  std::size_t const d = v_.dim();
  PrimVector const w = step(gamma1).w;
  IntMatrix const gw = complete_oriented(w).g;
  // gamma1^-1 = gamma1^T, so gamma2 = g_v^-1 gamma1^T g_w = num / q.
  IntMatrix const m = gamma1.common_numerators();
  unsigned const e = gamma1.max_exponent();
  BigInt const q = pow_big(p_, e);
  IntMatrix const num = gv_inv_ * m.transpose() * gw;
  for (std::size_t j = 0; j < d; ++j) {
    if (num(d - 1, j) != (j + 1 == d ? q : BigInt(0))) {
      throw CertificateFailure("gamma2 is not of affine block form for v = " +
                               to_string(v_.coords()));
    }
  }
  IntMatrix block(d - 1, d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i)
    for (std::size_t j = 0; j + 1 < d; ++j) block(i, j) = num(i, j);
  if (determinant(block) != pow_big(p_, e * static_cast<unsigned>(d - 1))) {
    throw CertificateFailure("gamma2 block does not have det 1 for v = " +
                             to_string(v_.coords()));
  }
  // gamma1 g_v gamma2 = (m g_v num) / q^2 must equal g_w, an SL_d(Z) matrix.
  IntMatrix prod = m * gv_ * num;
  IntMatrix scaled_gw = gw;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) scaled_gw(i, j) *= q * q;
  if (!(prod == scaled_gw) || determinant(gw) != 1) {
    throw CertificateFailure("gamma1 g_v gamma2 is not g_w in SL_d(Z)");
  }
  return Gamma2Certificate{PInvMatrix(p_, num, e), gv_, gw};
}

FactoryOutput factory_step(PrimVector const& v, PInvMatrix const& gamma) {
  return FactoryContext(v, gamma.prime()).step(gamma);
}

Gamma2Certificate gamma2_of(PrimVector const& v, PInvMatrix const& gamma1) {
  return FactoryContext(v, gamma1.prime()).certify(gamma1);
}

namespace {

struct SignedPerm {
  std::vector<std::size_t> perm;  // (sigma x)_i = sign_i * x_perm[i]
  std::vector<int> sign;
};

std::vector<SignedPerm> signed_perms_det1(std::size_t d) {
  std::vector<SignedPerm> out;
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int parity = 1;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (perm[i] > perm[j]) parity = -parity;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      SignedPerm s{perm, std::vector<int>(d, 1)};
      int det = parity;
      for (std::size_t i = 0; i < d; ++i) {
        if (mask >> i & 1) {
          s.sign[i] = -1;
          det = -det;
        }
      }
      if (det == 1) out.push_back(std::move(s));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

std::vector<IntMatrix> signed_permutations_det1(std::size_t d) {
  std::vector<IntMatrix> out;
  for (auto const& s : signed_perms_det1(d)) {
    IntMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, s.perm[i]) = s.sign[i];
    out.push_back(std::move(m));
  }
  return out;
}

EquivalenceClass equivalence_class(PrimVector const& v, std::int64_t p, ClassBounds bounds) {
  if (p < 3 || !is_prime(p)) throw PreconditionError("p must be an odd prime");
  std::size_t const d = v.dim();
  auto const perms = signed_perms_det1(d);
  EquivalenceClass out{v, p, {}, false, 0};
  std::set<IntVector> seen{v.coords()};
  std::deque<IntVector> queue{v.coords()};
  auto visit = [&](IntVector const& w) {
    if (seen.count(w)) return;
    if (seen.size() >= bounds.max_size) {
      out.truncated = true;
      return;
    }
    seen.insert(w);
    queue.push_back(w);
  };
  IntVector w(d);
  while (!queue.empty()) {
    IntVector u = std::move(queue.front());
    queue.pop_front();
    for (auto const& s : perms) {
      for (std::size_t i = 0; i < d; ++i) w[i] = s.sign[i] * u[s.perm[i]];
      visit(w);
    }
    PrimVector pu(u);
    FactoryContext ctx(pu, p);
    auto rotations = find_p_rotations(pu, p, bounds.height);
    for (std::size_t r = 1; r < rotations.size(); ++r) {
      auto cert = ctx.certify(rotations[r]);
      ++out.certificates;
      visit(ctx.step(rotations[r]).w.coords());
    }
  }
  for (auto const& x : seen) out.members.emplace_back(x);
  return out;
}

}  // namespace covpolar
