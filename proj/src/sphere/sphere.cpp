#include "covpolar/sphere/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "covpolar/error.hpp"

namespace covpolar {

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw PreconditionError("square root of a negative number");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && (r > n / r || r * r > n)) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

std::int64_t norm2_of(IntVector const& v) {
  std::int64_t s = 0;
  for (auto x : v) {
    std::int64_t sq;
    if (__builtin_mul_overflow(x, x, &sq) || __builtin_add_overflow(s, sq, &s) ||
        s >= kMaxNorm2) {
      throw CapacityError("squared norm exceeds 2^62");
    }
  }
  return s;
}

std::int64_t gcd_of(IntVector const& v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x);
  return g;
}

bool is_primitive(IntVector const& v) { return gcd_of(v) == 1; }

IntVector sign_canonical(IntVector v) {
  for (auto x : v) {
    if (x == 0) continue;
    if (x < 0) {
      for (auto& y : v) y = -y;
    }
    break;
  }
  return v;
}

bool is_sign_canonical(IntVector const& v) {
  for (auto x : v) {
    if (x != 0) return x > 0;
  }
  return true;
}

std::string to_string(IntVector const& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

PrimVector::PrimVector(IntVector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 3) throw PreconditionError("primitive vectors need d >= 3");
  norm2_ = norm2_of(coords_);
  if (gcd_of(coords_) != 1) {
    throw PreconditionError("vector " + to_string(coords_) + " is not primitive");
  }
}

PrimVector PrimVector::negated() const {
  IntVector c = coords_;
  for (auto& x : c) x = -x;
  return PrimVector(std::move(c));
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t q = 2; q <= n / q; ++q) {
    if (n % q == 0) return false;
  }
  return true;
}

AdmissibleSpec::AdmissibleSpec(int dim, std::int64_t prime) : d(dim), p(prime) {
  if (d < 4) throw PreconditionError("admissibility needs d >= 4");
  if (p < 3 || !is_prime(p)) throw PreconditionError("admissibility needs an odd prime p");
}

bool is_admissible(AdmissibleSpec const& spec, std::int64_t n2) {
  if (spec.d == 4) return n2 % spec.p != 0 && n2 % 8 != 0;
  if (spec.d == 5) return n2 % spec.p != 0;
  return true;
}

SphereEnumerator::SphereEnumerator(int d, std::int64_t n2, Options opts)
    : d_(d), n2_(n2), opts_(opts), x_(d), rem_(d), hi_(d) {
  if (d < 2) throw PreconditionError("sphere enumeration needs d >= 2");
  if (n2 < 1) throw PreconditionError("sphere enumeration needs N >= 1");
  if (n2 >= kMaxNorm2) throw CapacityError("N must be below 2^62");
  step_.assign(d, 1);
}

void SphereEnumerator::set_level(int i) {
  std::int64_t const rem = rem_[i];
  bool zero_prefix = true;
  for (int j = 0; j < i; ++j) zero_prefix = zero_prefix && x_[j] == 0;
  bool const positive_only = opts_.half && zero_prefix;
  std::int64_t lo;
  std::int64_t hi;
  if (i == d_ - 1) {
    std::int64_t const s = isqrt(rem);
    if (s * s != rem) {
      lo = 1;
      hi = 0;
    } else if (s == 0) {
      lo = positive_only ? 1 : 0;
      hi = 0;
    } else {
      lo = positive_only ? s : -s;
      hi = s;
    }
    step_[i] = s == 0 ? 1 : 2 * s;
  } else {
    std::int64_t const r = isqrt(rem);
    lo = positive_only ? 0 : -r;
    hi = r;
    if (i == 0) {
      lo = std::max(lo, opts_.first_lo);
      hi = std::min(hi, opts_.first_hi);
    }
  }
  x_[i] = lo;
  hi_[i] = hi;
}

bool SphereEnumerator::advance() {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    depth_ = 0;
    rem_[0] = n2_;
    set_level(0);
  } else {
    depth_ = d_ - 1;
    x_[depth_] += step_[depth_];
  }
  for (;;) {
    int const i = depth_;
    if (x_[i] > hi_[i]) {
      if (i == 0) {
        done_ = true;
        return false;
      }
      --depth_;
      x_[depth_] += step_[depth_];
      continue;
    }
    if (i == d_ - 1) return true;
    rem_[i + 1] = rem_[i] - x_[i] * x_[i];
    ++depth_;
    set_level(depth_);
  }
}

bool SphereEnumerator::next(IntVector& out) {
  while (advance()) {
    if (opts_.primitive_only && gcd_of(x_) != 1) continue;
    out = x_;
    return true;
  }
  return false;
}

std::vector<IntVector> enumerate_sphere(int d, std::int64_t n2, bool primitive_only) {
  SphereEnumerator e(d, n2, primitive_only);
  std::vector<IntVector> out;
  IntVector v;
  while (e.next(v)) out.push_back(v);
  return out;
}

std::uint64_t count_sphere(int d, std::int64_t n2, bool primitive_only) {
  SphereEnumerator e(d, n2, primitive_only);
  std::uint64_t n = 0;
  IntVector v;
  while (e.next(v)) ++n;
  return n;
}

std::vector<std::pair<std::int64_t, std::int64_t>> first_coordinate_chunks(
    std::int64_t n2, std::size_t chunks) {
  std::int64_t const r = isqrt(n2);
  std::int64_t const values = 2 * r + 1;
  chunks = std::max<std::size_t>(1, std::min<std::size_t>(chunks, values));
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  std::int64_t lo = -r;
  for (std::size_t c = 0; c < chunks; ++c) {
    std::int64_t len = values / static_cast<std::int64_t>(chunks) +
                       (static_cast<std::int64_t>(c) < values % static_cast<std::int64_t>(chunks));
    out.emplace_back(lo, lo + len - 1);
    lo += len;
  }
  return out;
}

}  // namespace covpolar
