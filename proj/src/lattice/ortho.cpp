#include "covpolar/lattice/ortho.hpp"

#include <unordered_map>

#include <boost/container_hash/hash.hpp>

#include "covpolar/error.hpp"
#include "exact/fast_path.hpp"
#include "ortho_impl.hpp"

namespace covpolar {

using detail::with_fast_path;

IntMatrix hermite_normal_form(IntMatrix const& b) {
  return with_fast_path([&](auto tag) {
    using Z = decltype(tag);
    return convert_matrix<BigInt>(detail::column_hnf(convert_matrix<Z>(b)));
  });
}

SublatticeBasis orthogonal_basis(PrimVector const& v) {
  return with_fast_path([&](auto tag) {
    using Z = decltype(tag);
    auto k = detail::kernel_of<Z>(v.coords());
    return SublatticeBasis{convert_matrix<BigInt>(k.basis), true};
  });
}

UnimodularCompletion complete_oriented(PrimVector const& v) {
  return with_fast_path([&](auto tag) {
    using Z = decltype(tag);
    auto k = detail::kernel_of<Z>(v.coords());
    std::size_t const d = v.dim();
    BasicMatrix<Z> g(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j + 1 < d; ++j) g(i, j) = k.basis(i, j);
      g(i, d - 1) = k.w[i];
    }
    Z det = determinant(g);
    if (det == -1) {
      for (std::size_t i = 0; i < d; ++i) g(i, d - 2) = -g(i, d - 2);
    } else if (!(det == 1)) {
      throw CertificateFailure("completion of " + to_string(v.coords()) +
                               " is not unimodular");
    }
    return UnimodularCompletion{convert_matrix<BigInt>(g)};
  });
}

BigInt covolume_sq(SublatticeBasis const& b) { return exact_gram(b.basis).det(); }

PrimVector normal_vector(SublatticeBasis const& b) {
  if (b.basis.cols() + 1 != b.basis.rows()) {
    throw PreconditionError("normal vector needs a d x (d-1) basis");
  }
  auto n = detail::signed_minors(b.basis);
  BigInt g = 0;
  for (auto const& x : n) g = gcd(g, x);
  if (g == 0) throw DegenerateInput("basis is not of full column rank");
  IntVector out;
  for (auto const& x : n) {
    BigInt q = x / g;
    if (abs_value(q) >= BigInt(kMaxNorm2)) throw CapacityError("normal vector too large");
    out.push_back(q.convert_to<std::int64_t>());
  }
  return PrimVector(sign_canonical(std::move(out)));
}

namespace {

struct KeyHash {
  std::size_t operator()(std::vector<std::int64_t> const& k) const {
    return boost::hash_range(k.begin(), k.end());
  }
};

template <class Z>
std::vector<std::int64_t> checked_key(IntVector const& v, std::int64_t n2) {
  auto k = detail::kernel_of<Z>(v);
  Z cov2 = determinant(detail::gram_of(k.basis));
  if (!(cov2 == Z(n2))) {
    throw CertificateFailure("covolume mismatch at v = " + to_string(v) + ": cov^2 = " +
                             to_string(to_big(cov2)) + ", N = " + std::to_string(n2));
  }
  auto normal = detail::signed_minors(k.basis);
  Z g(0);
  for (auto const& x : normal) g = gcd(g, x);
  bool same = true, opposite = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Z x = normal[i] / g;
    same = same && x == Z(v[i]);
    opposite = opposite && x == Z(-v[i]);
  }
  if (!same && !opposite) {
    throw CertificateFailure("normal round trip failed at v = " + to_string(v));
  }
  std::vector<std::int64_t> key;
  key.reserve(k.basis.entries().size());
  for (auto const& e : k.basis.entries()) {
    key.push_back(from_big<SafeInt>(to_big(e)).value());
  }
  return key;
}

}  // namespace

BijectionRecord verify_bijection(int d, std::int64_t n2) {
  BijectionRecord rec;
  rec.d = d;
  rec.n2 = n2;
  std::unordered_map<std::vector<std::int64_t>, std::vector<IntVector>, KeyHash> seen;
  SphereEnumerator e(d, n2, true);
  IntVector v;
  while (e.next(v)) {
    ++rec.vectors;
    std::vector<std::int64_t> key;
    try {
      key = with_fast_path([&](auto tag) { return checked_key<decltype(tag)>(v, n2); });
    } catch (ExactOverflow const&) {
      throw CapacityError("sublattice key does not fit in 64 bits at v = " + to_string(v));
    }
    auto& bucket = seen[std::move(key)];
    bucket.push_back(v);
    if (bucket.size() > 2) {
      throw CertificateFailure("sublattice collision: " + to_string(bucket[0]) + ", " +
                               to_string(bucket[1]) + ", " + to_string(bucket[2]));
    }
  }
  for (auto const& [key, bucket] : seen) {
    IntVector neg = bucket[0];
    for (auto& x : neg) x = -x;
    if (bucket.size() != 2 || bucket[1] != neg) {
      throw CertificateFailure("sublattice of " + to_string(bucket[0]) +
                               " is not shared with its negative alone");
    }
  }
  rec.sublattices = seen.size();
  rec.oriented_sublattices = rec.vectors;
  return rec;
}

}  // namespace covpolar
