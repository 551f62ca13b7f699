#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "covpolar/error.hpp"
#include "covpolar/polar/polar.hpp"
#include "covpolar/sampling/sampler.hpp"

namespace covpolar {
namespace {

// Plain two-sample KS statistic, sort-and-sweep.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double best = 0;
  while (i < a.size() && j < b.size()) {
    double const t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == t) ++i;
    while (j < b.size() && b[j] == t) ++j;
    best = std::max(best, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return best;
}

TEST(Rng, DeterministicStreams) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    double x = a.uniform01();
    EXPECT_EQ(x, b.uniform01());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_NE(Rng(42).next(), c.next());
  auto s0 = Rng::substream(7, 0), s0b = Rng::substream(7, 0), s1 = Rng::substream(7, 1);
  std::uint64_t x0 = s0.next();
  EXPECT_EQ(x0, s0b.next());
  EXPECT_NE(x0, s1.next());
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
  Rng n(5);
  double m = 0, m2 = 0;
  for (int i = 0; i < 200000; ++i) {
    double z = n.normal();
    m += z;
    m2 += z * z;
  }
  EXPECT_NEAR(m / 200000, 0.0, 0.01);
  EXPECT_NEAR(m2 / 200000, 1.0, 0.02);
  Rng u(9);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(u.below(7), 7u);
}

TEST(SampleOrientation, UnitSignCanonicalUniform) {
  Rng rng(11);
  int const d = 5;
  double sum = 0;
  int const samples = 1000000;
  for (int i = 0; i < samples; ++i) {
    auto o = sample_orientation(d, rng);
    if (i < 1000) {
      double n = 0;
      for (double x : o.u) n += x * x;
      EXPECT_NEAR(n, 1.0, 1e-12);
      EXPECT_TRUE(o.normal.empty());
    }
    auto first = std::find_if(o.u.begin(), o.u.end(), [](double x) { return x != 0; });
    ASSERT_NE(first, o.u.end());
    ASSERT_GT(*first, 0);
    sum += o.u[0] * o.u[0];
  }
  EXPECT_NEAR(sum / samples, 1.0 / d, 0.002);
  EXPECT_THROW(sample_orientation(1, rng), PreconditionError);
}

TEST(SampleShapeRank2, DomainDeterminantAndTail) {
  Rng rng(12);
  int const samples = 1000000;
  int tail = 0;
  for (int i = 0; i < samples; ++i) {
    auto s = sample_shape_rank2_xy(rng);
    ASSERT_LE(std::abs(s.x), 0.5 + 1e-15);
    ASSERT_GE(s.x * s.x + s.y * s.y, 1 - 1e-12);
    if (i < 1000) EXPECT_NEAR(s.gram.determinant(), 1.0, 1e-12);
    tail += s.y >= 2;
  }
  EXPECT_NEAR(double(tail) / samples, 3 / (2 * std::numbers::pi), 0.003);
}

// Iwasawa coordinates of the canonical forms of many lattices stay inside
// the default Siegel box.
TEST(SampleShapeHaar, BoxContainsCanonicalDomain) {
  Rng rng(13);
  for (int n = 2; n <= 4; ++n) {
    SiegelBox box = default_siegel_box(n);
    for (int t = 0; t < 20000; ++t) {
      RealMatrix b(n, n);
      for (int i = 0; i < n * n; ++i) b(i / n, i % n) = rng.normal();
      Eigen::JacobiSVD<RealMatrix> svd(b);
      if (svd.singularValues()(0) > 100 * svd.singularValues()(n - 1)) continue;
      RealMatrix g = canonical_gram_real(b.transpose() * b).reduced;
      ASSERT_TRUE(is_canonical_real(g));
      RealMatrix r = Eigen::LLT<RealMatrix>(g).matrixU();
      for (int i = 0; i < n; ++i) {
        if (i + 1 < n) ASSERT_LE(r(i, i) / r(i + 1, i + 1), box.max_ratio[i]);
        for (int j = i + 1; j < n; ++j) {
          ASSERT_GE(r(i, j) / r(i, i), box.mu_lo(i, j) - 1e-12);
          ASSERT_LE(r(i, j) / r(i, i), box.mu_hi(i, j) + 1e-12);
        }
      }
    }
  }
}

TEST(SampleShapeHaar, DeterminantDeterminismAndStarvation) {
  for (int n = 2; n <= 4; ++n) {
    Rng a(21), b(21);
    for (int i = 0; i < 200; ++i) {
      RealMatrix g = sample_shape_haar(n, a);
      EXPECT_NEAR(g.determinant(), 1.0, 1e-10);
      EXPECT_TRUE(is_canonical_real(g));
      EXPECT_EQ(g, sample_shape_haar(n, b));
    }
  }
  Rng rng(1);
  SiegelBox outside = default_siegel_box(3);
  outside.mu_lo(0, 1) = 0.6;
  outside.mu_hi(0, 1) = 0.9;
  EXPECT_THROW(sample_shape_haar(3, rng, 1000, outside), SamplerStarvation);
  EXPECT_THROW(sample_shape_haar(5, rng), PreconditionError);
}

TEST(SampleShapeHaar, Rank2MatchesClosedForm) {
  Rng a(31), b(32);
  std::vector<double> x, y;
  for (int i = 0; i < 100000; ++i) {
    x.push_back(shape_statistics_real(sample_shape_haar(2, a), 1.0).lambda1);
    y.push_back(std::sqrt(sample_shape_rank2(b)(0, 0)));
  }
  EXPECT_LT(ks_statistic(x, y), 0.01);
}

TEST(SampleShapeHaar, Rank3MeanValue) {
  Rng rng(33);
  double total = 0;
  int const samples = 100000;
  for (int i = 0; i < samples; ++i) {
    total += count_points_in_ball(sample_shape_haar(3, rng), 1.2);
  }
  double const target = 4.0 / 3.0 * std::numbers::pi * std::pow(1.2, 3);
  EXPECT_NEAR(total / samples, target, 0.03 * target);
}

TEST(SampleShapeHaar, Rank4MeanValue) {
  Rng rng(34);
  double total = 0;
  int const samples = 20000;
  for (int i = 0; i < samples; ++i) {
    total += count_points_in_ball(sample_shape_haar(4, rng), 1.2);
  }
  double const target = std::numbers::pi * std::numbers::pi * std::pow(1.2, 4) / 2;
  EXPECT_NEAR(total / samples, target, 0.03 * target);
}

// Haar measure is invariant under g -> h g for h in SL_n(R); rotations leave
// Gram matrices unchanged, so a rotation followed by a diagonal stretch is
// applied to the basis before re-canonicalizing.
TEST(SampleShapeHaar, InvariantUnderLeftAction) {
  Rng a(41), b(42), rot(43);
  int const n = 3;
  RealMatrix h = RealMatrix::Zero(n, n);
  h.diagonal() << 2.0, 0.5, 1.0;
  std::vector<double> x, y;
  for (int i = 0; i < 100000; ++i) {
    x.push_back(shape_statistics_real(sample_shape_haar(n, a), 1.0).lambda1);
    RealMatrix g = sample_shape_haar(n, b);
    RealMatrix basis = Eigen::LLT<RealMatrix>(g).matrixU();
    RealMatrix q = Eigen::HouseholderQR<RealMatrix>(
                       RealMatrix::NullaryExpr(n, n, [&] { return rot.normal(); }))
                       .householderQ();
    RealMatrix moved = h * q * basis;
    RealMatrix g2 = canonical_gram_real(moved.transpose() * moved).reduced;
    y.push_back(shape_statistics_real(g2, 1.0).lambda1);
  }
  EXPECT_LT(ks_statistic(x, y), 0.02);
}

TEST(ReferencePopulation, CountsAndConsistency) {
  auto pop = reference_population(4, 3);
  EXPECT_EQ(pop.size(), 32u);
  for (auto const& p : pop) {
    EXPECT_LE(p.n2, 3);
    EXPECT_EQ(p.shape.scale(), p.n2);
  }
  std::size_t count = 0;
  for_each_reference_vector(4, 3, [&](IntVector const& v) {
    EXPECT_TRUE(is_sign_canonical(v));
    EXPECT_EQ(pop[count].orientation.normal, v);
    ++count;
  });
  auto sums = reference_summaries(4, 40, 1.3, 3);
  auto serial = reference_summaries(4, 40, 1.3, 1);
  auto full = reference_population(4, 40);
  EXPECT_EQ(sums.label, "reference");
  ASSERT_EQ(sums.size(), full.size());
  for (std::size_t i = 0; i < sums.size(); ++i) {
    auto st = shape_statistics(full[i].shape, 1.3);
    EXPECT_EQ(sums.n2[i], full[i].n2);
    for (int k = 0; k < 4; ++k) {
      EXPECT_EQ(sums.u[k][i], static_cast<float>(full[i].orientation.u[k]));
      EXPECT_EQ(sums.u[k][i], serial.u[k][i]);
    }
    EXPECT_EQ(sums.ball_count[i], st.ball_count);
    EXPECT_NEAR(sums.lambda1[i], st.lambda1, 1e-12);
    EXPECT_NEAR(sums.ratio[i], st.ratio, 1e-12);
    EXPECT_EQ(sums.lambda1[i], serial.lambda1[i]);
  }
}

TEST(SphereSummaries, MatchesEnumerationOrderAndThreads) {
  auto one = sphere_summaries(5, 54, 1.2, 1);
  auto many = sphere_summaries(5, 54, 1.2, 4);
  EXPECT_EQ(one.label, "sphere-54");
  std::vector<IntVector> half;
  for (auto const& v : enumerate_sphere(5, 54, true))
    if (is_sign_canonical(v)) half.push_back(v);
  ASSERT_EQ(one.size(), half.size());
  ASSERT_EQ(many.size(), half.size());
  for (std::size_t i = 0; i < half.size(); ++i) {
    auto u = orientation_of(half[i]).u;
    for (int k = 0; k < 5; ++k) {
      EXPECT_EQ(one.u[k][i], static_cast<float>(u[k]));
      EXPECT_EQ(one.u[k][i], many.u[k][i]);
    }
    EXPECT_EQ(one.n2[i], 54);
    EXPECT_EQ(one.ball_count[i], many.ball_count[i]);
  }
}

}  // namespace
}  // namespace covpolar
