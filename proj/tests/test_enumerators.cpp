#include <gtest/gtest.h>

#include <random>

#include "qcbounds/enumerators.hpp"
#include "support.hpp"

namespace qcb {
namespace {

using V = std::vector<Rational>;

V ints(std::initializer_list<long> v) {
  V out;
  for (long x : v) out.emplace_back(x);
  return out;
}

ComplexRationalMatrix diag_projector(std::initializer_list<int> d) {
  ComplexRationalMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  int r = 0;
  for (int v : d) {
    m(r, r) = {Rational(v), 0};
    ++r;
  }
  return m;
}

TEST(Enumerators, ProjectorExamples) {
  EnumeratorPair zero = enumerators_from_projector(diag_projector({1, 0}), 1);
  EXPECT_EQ(zero.a, ints({1, 1}));
  EXPECT_EQ(zero.b, ints({1, 1}));

  EnumeratorPair id = enumerators_from_projector(diag_projector({1, 1}), 1);
  EXPECT_EQ(id.a, ints({4, 0}));
  EXPECT_EQ(id.b, ints({2, 6}));

  EnumeratorPair bell = enumerators_from_projector(stabilizer_projector(StabilizerGroup::parse({"XX", "ZZ"})), 2);
  EXPECT_EQ(bell.a, ints({1, 0, 3}));
}

TEST(Enumerators, SizeMismatch) {
  EXPECT_THROW(enumerators_from_projector(diag_projector({1, 0, 0}), 1), std::invalid_argument);
  EXPECT_THROW(macwilliams(ints({1, 0}), 2), std::invalid_argument);
}

TEST(Enumerators, TransformExamples) {
  EXPECT_EQ(macwilliams(ints({1, 1}), 1), ints({1, 1}));
  EXPECT_EQ(macwilliams(ints({1, 0, 3}), 2), ints({1, 0, 3}));
  EXPECT_EQ(macwilliams(ints({0, 0, 0}), 2), ints({0, 0, 0}));
  EXPECT_EQ(shadow(ints({1, 0, 3}), 2), ints({1, 0, 3}));
  EXPECT_EQ(shadow(ints({1, 1}), 1), ints({0, 2}));
  EXPECT_EQ(shadow(ints({0, 0}), 1), ints({0, 0}));
}

TEST(Enumerators, FiveQubitCodeKnillLaflamme) {
  const auto g = StabilizerGroup::parse({"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"});
  EnumeratorPair e = enumerators_from_projector(stabilizer_projector(g), 5);
  EXPECT_EQ(e.a[0], 4);  // K^2
  for (int j = 0; j < 3; ++j) EXPECT_EQ(2 * e.b[j], e.a[j]) << j;
  EXPECT_EQ(macwilliams(e.a, 5), e.b);
}

TEST(EnumeratorsProperty, RandomStabilizerTransforms) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int k = static_cast<int>(rng() % n);
    const StabilizerGroup s = test::random_stabilizer(n, k, rng);
    const EnumeratorPair e = enumerators_from_projector(stabilizer_projector(s), n);
    ASSERT_EQ(macwilliams(e.a, n), e.b);
    const V sh = shadow(e.a, n);
    for (int j = 0; j <= n; ++j) {
      ASSERT_GE(sh[j], 0);
      if (k == 0 && (n - j) % 2) ASSERT_EQ(sh[j], 0) << "n " << n << " j " << j;
    }
  }
}

TEST(EnumeratorsProperty, MacwilliamsInvolutionOnSelfDualScale) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    std::vector<double> a(n + 1);
    double s = 0;
    for (auto& v : a) s += (v = u(rng));
    for (auto& v : a) v *= std::pow(2.0, n) / s;
    const std::vector<double> back = macwilliams(macwilliams(a, n), n);
    for (int j = 0; j <= n; ++j) ASSERT_NEAR(back[j], a[j], 1e-10);
  }
}

TEST(LpBound, WitnessWeightsAtFourOneThree) {
  // (1, 0, 0, 12, 3): every row holds except the shadow rows.
  const V a = ints({1, 0, 0, 12, 3});
  auto violated = [&](const ConicProgram<Rational>& p) {
    int bad = 0;
    for (const auto& r : p.equalities) bad += evaluate(r.terms, a) != r.rhs;
    for (const auto& r : p.inequalities) bad += evaluate(r.terms, a) < r.rhs;
    return bad;
  };
  EXPECT_EQ(violated(build_lp_bound(4, 1, 3)), 0);
  LpOptions opt;
  opt.shadow = true;
  EXPECT_GT(violated(build_lp_bound(4, 1, 3, opt)), 0);
}

TEST(LpBound, FiveQubitWithShadowFeasible) {
  LpOptions opt;
  opt.shadow = true;
  EXPECT_EQ(solve_lp_exact(build_lp_bound(5, 2, 3, opt)).status, Status::feasible);
}

TEST(LpBound, InvalidParameters) {
  EXPECT_THROW(build_lp_bound(3, 1, 4), std::invalid_argument);
  EXPECT_THROW(build_lp_bound(3, 0, 2), std::invalid_argument);
  LpOptions opt;
  opt.stab = StabType::type1;
  EXPECT_THROW(build_lp_bound(5, 3, 2, opt), std::invalid_argument);
}

TEST(LpBound, KnownCodesAreFeasible) {
  for (const auto& c : test::known_codes())
    for (bool sh : {false, true}) {
      LpOptions opt;
      opt.shadow = sh;
      EXPECT_EQ(solve_lp_exact(build_lp_bound(c.n, c.K, c.delta, opt)).status, Status::feasible) << c.name;
    }
}

}  // namespace
}  // namespace qcb
