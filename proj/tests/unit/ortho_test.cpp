#include <random>
#include <set>

#include <gtest/gtest.h>

#include "covpolar/error.hpp"
#include "covpolar/lattice/ortho.hpp"
#include "support.hpp"

namespace covpolar {
namespace {

BigInt dot(IntVector const& v, IntMatrix const& m, std::size_t col) {
  BigInt s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += BigInt(v[i]) * m(i, col);
  return s;
}

TEST(OrthogonalBasis, StandardPole) {
  auto b = orthogonal_basis(PrimVector({0, 0, 0, 1}));
  IntMatrix expect{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}};
  EXPECT_EQ(b.basis, expect);
  EXPECT_TRUE(b.canonical);
  auto c = orthogonal_basis(PrimVector({1, 0, 0}));
  EXPECT_EQ(c.basis, (IntMatrix{{0, 0}, {1, 0}, {0, 1}}));
}

TEST(OrthogonalBasis, AllOnes) {
  auto b = orthogonal_basis(PrimVector({1, 1, 1, 1}));
  IntMatrix expect{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}};
  EXPECT_EQ(b.basis, expect);
  EXPECT_EQ(covolume_sq(b), 4);
  EXPECT_EQ(covolume_sq(orthogonal_basis(PrimVector({2, 1, 0, 0}))), 5);
}

TEST(OrthogonalBasis, RejectsImprimitive) {
  EXPECT_THROW(PrimVector({2, 2, 0, 0}), PreconditionError);
}

TEST(OrthogonalBasis, CovolumeAndRoundTripUpToFifty) {
  for (std::int64_t n = 1; n <= 50; ++n) {
    for (auto const& c : enumerate_sphere(4, n, true)) {
      PrimVector v(c);
      auto b = orthogonal_basis(v);
      for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(dot(c, b.basis, j), 0);
      EXPECT_EQ(covolume_sq(b), n);
      EXPECT_EQ(normal_vector(b).coords(), sign_canonical(c));
    }
  }
}

TEST(HermiteNormalForm, InvariantUnderColumnChange) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 40; ++t) {
    IntMatrix b(5, 3);
    for (auto i = 0u; i < 5; ++i)
      for (auto j = 0u; j < 3; ++j) b(i, j) = static_cast<int>(rng() % 11) - 5;
    IntMatrix h;
    try {
      h = hermite_normal_form(b);
    } catch (DegenerateInput const&) {
      continue;
    }
    IntMatrix u = testing::random_unimodular(3, rng, 20);
    EXPECT_EQ(hermite_normal_form(b * u), h);
    EXPECT_EQ(hermite_normal_form(h), h);
  }
  EXPECT_THROW(hermite_normal_form(IntMatrix{{1, 2}, {2, 4}, {3, 6}}), DegenerateInput);
}

TEST(CompleteOriented, Examples) {
  EXPECT_EQ(complete_oriented(PrimVector({0, 0, 0, 1})).g, IntMatrix::identity(4));
  for (IntVector c : {IntVector{1, 1, 1, 1}, IntVector{3, 1, 1}, IntVector{0, 0, -1},
                      IntVector{2, -3, 5, 7, 1}, IntVector{-6, 10, 15, 0}}) {
    PrimVector v(c);
    auto g = complete_oriented(v).g;
    std::size_t d = c.size();
    EXPECT_EQ(determinant(g), 1) << to_string(c);
    EXPECT_EQ(dot(c, g, d - 1), 1);
    IntMatrix head(d, d - 1);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j + 1 < d; ++j) head(i, j) = g(i, j);
    EXPECT_EQ(hermite_normal_form(head), orthogonal_basis(v).basis);
  }
}

TEST(NormalVector, Examples) {
  SublatticeBasis b{IntMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}}, true};
  EXPECT_EQ(normal_vector(b).coords(), (IntVector{0, 0, 0, 1}));
  auto a3 = orthogonal_basis(PrimVector({1, 1, 1, 1}));
  EXPECT_EQ(normal_vector(a3).coords(), (IntVector{1, 1, 1, 1}));
  SublatticeBasis bad{IntMatrix{{1, 2}, {1, 2}, {1, 2}}, false};
  EXPECT_THROW(normal_vector(bad), DegenerateInput);
  EXPECT_THROW(covolume_sq(bad), DegenerateInput);
}

TEST(VerifyBijection, SmallSpheres) {
  auto r1 = verify_bijection(4, 1);
  EXPECT_EQ(r1.vectors, 8u);
  EXPECT_EQ(r1.sublattices, 4u);
  auto r3 = verify_bijection(4, 3);
  EXPECT_EQ(r3.vectors, 32u);
  EXPECT_EQ(r3.sublattices, 16u);
  EXPECT_EQ(r3.oriented_sublattices, 32u);
  auto r5 = verify_bijection(5, 4);
  EXPECT_EQ(r5.vectors, 80u);
  EXPECT_EQ(r5.sublattices, 40u);
}

TEST(VerifyBijection, TwoToOneOnEveryKey) {
  for (std::int64_t n = 1; n <= 60; ++n) {
    auto r = verify_bijection(4, n);
    EXPECT_EQ(2 * r.sublattices, r.vectors);
  }
}

}  // namespace
}  // namespace covpolar
