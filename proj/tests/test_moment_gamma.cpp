#include <gtest/gtest.h>

#include <chrono>

#include "qcbounds/certcheck.hpp"
#include "qcbounds/moment_gamma.hpp"
#include "qcbounds/reduced_sdp.hpp"
#include "support.hpp"

namespace qcb {
namespace {

double theta(const Graph& g, LovaszForm form = LovaszForm::sdp1) {
  const SolveReport r = solve_sdp(to_float(build_lovasz_sdp(g, form)));
  EXPECT_EQ(r.status, Status::optimal) << r.message;
  return r.objective;
}

TEST(MomentGamma, StabilizerGammaExamples) {
  const GammaMatrix bell = gamma_from_stabilizer(StabilizerGroup::parse({"XX", "ZZ"}));
  EXPECT_EQ(bell.K, 1);
  EXPECT_EQ(bell.entries.size(), 16u);
  const std::uint64_t xx = PauliString::from_string("XX").index(), yy = PauliString::from_string("YY").index();
  EXPECT_EQ(bell.at(xx, yy), 1);
  EXPECT_EQ(bell.at(xx, 1), 0);
  EXPECT_DOUBLE_EQ(bell.dense().sum(), 16);
  EXPECT_EQ(gamma_from_stabilizer(test::group_of(test::known_codes()[2])).K, 2);
}

TEST(MomentGamma, ShiftedColumnSumsByHand) {
  // Bell group {II, XX, ZZ, YY}: each member collects one entry per member.
  const auto sums = shifted_column_sums(gamma_from_stabilizer(StabilizerGroup::parse({"XX", "ZZ"})));
  ASSERT_EQ(sums.size(), 4u);
  for (const auto& [x, v] : sums) EXPECT_EQ(v, 4);
}

TEST(MomentGamma, AveragingIdentityOnWitnesses) {
  for (const auto& c : test::known_codes()) {
    const GammaMatrix g = gamma_from_stabilizer(test::group_of(c));
    const Rational factor = Rational(1L << c.n) / Rational(g.K);
    for (const auto& [x, v] : shifted_column_sums(g)) EXPECT_EQ(v, factor * g.at(x, 0)) << c.name;
  }
}

TEST(MomentGamma, SmallGraphs) {
  const Graph k3 = complete_graph(3);
  EXPECT_TRUE(k3.adjacent(0, 1));
  EXPECT_FALSE(k3.adjacent(1, 1));
  EXPECT_THROW(cycle_graph(2), std::invalid_argument);
  EXPECT_NEAR(theta(k3), 1, 1e-6);
  EXPECT_NEAR(theta(cycle_graph(6)), 3, 1e-6);

  // One qubit, delta 2: every pair touches a weight-one product or anticommutes.
  const ConfusabilityGraph cg = build_confusability_graph(1, 2, GraphVariant::full);
  ASSERT_EQ(cg.graph.size, 4);
  EXPECT_FALSE(cg.graph.adjacent(0, 0));
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v)
      if (u || v) EXPECT_TRUE(cg.graph.adjacent(u, v)) << u << v;
  EXPECT_EQ(build_confusability_graph(2, 2).vertices.size(), 15u);
  EXPECT_THROW(build_confusability_graph(6, 2), std::invalid_argument);
}

TEST(MomentGamma, ThetaOfConfusabilityGraphAtFourThree) {
  const auto start = std::chrono::steady_clock::now();
  const ConfusabilityGraph cg = build_confusability_graph(4, 3);
  EXPECT_EQ(cg.graph.size, 255);
  EXPECT_NEAR(theta(cg.graph), 7, 1e-6);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 30);
}

TEST(MomentGamma, ThetaIgnoresLowWeightVertices) {
  for (auto [n, d] : {std::pair{3, 2}, std::pair{4, 3}}) {
    const double a = theta(build_confusability_graph(n, d, GraphVariant::without_identity).graph);
    const double b = theta(build_confusability_graph(n, d, GraphVariant::without_low_weight).graph);
    EXPECT_NEAR(a, b, 1e-6) << n << "," << d;
  }
}

TEST(MomentGamma, Sdp2AgreesWithSdp1) {
  for (auto [n, d] : {std::pair{3, 2}, std::pair{4, 3}}) {
    const Graph g = build_confusability_graph(n, d).graph;
    EXPECT_NEAR(theta(g, LovaszForm::sdp1), theta(g, LovaszForm::sdp2), 1e-6) << n << "," << d;
  }
}

TEST(GammaSdp, PositiveControlsFeasible) {
  for (auto [n, K, d] : {std::tuple{2, 1L, 2}, std::tuple{3, 1L, 2}, std::tuple{5, 2L, 3}}) {
    const GammaSdp s = build_gamma_sdp(n, K, d);
    EXPECT_EQ(solve_sdp(to_float(s.program)).status, Status::feasible) << n << "," << K << "," << d;
  }
}

TEST(GammaSdp, PureShadowFourOneThreeInfeasible) {
  GammaOptions o;
  o.pure = true;
  o.shadow = true;
  EXPECT_EQ(solve_sdp(to_float(build_gamma_sdp(4, 1, 3, o).program)).status, Status::infeasible_numeric);
}

TEST(GammaSdp, WitnessSatisfiesProgramExactly) {
  GammaOptions o;
  o.shadow = true;
  o.stabilizer = true;
  for (const auto& c : test::known_codes()) {
    if (c.n > 5) continue;
    const GammaMatrix g = gamma_from_stabilizer(test::group_of(c));
    const XVector<Rational> x = average_gamma_exact(g.entries, c.n);
    const GammaSdp s = build_gamma_sdp(c.n, c.K, c.delta, o);
    const TupleVars vars = make_tuple_vars(c.n, MergeMode::permutation, c.K == 1 ? c.delta : 0);
    EXPECT_EQ(check_point(s.program, assign(vars, x)), std::vector<std::string>{}) << c.name;
  }
}

TEST(GammaWitness, KnownCodesPassEveryCheck) {
  GammaOptions o;
  o.shadow = true;
  o.stabilizer = true;
  for (const auto& c : test::known_codes()) {
    o.pure = c.name != "steane" && c.name != "five_qubit";
    EXPECT_EQ(check_gamma_witness(gamma_from_stabilizer(test::group_of(c)), c.delta, o), std::vector<std::string>{})
        << c.name;
  }
}

TEST(GammaWitness, DetectsBrokenMatrices) {
  GammaMatrix g = gamma_from_stabilizer(StabilizerGroup::parse({"XX", "ZZ"}));
  g.entries.push_back({1, 0, Rational(1)});  // Z I row, asymmetric
  EXPECT_FALSE(check_gamma_witness(g, 2).empty());

  GammaMatrix wrong_k = gamma_from_stabilizer(StabilizerGroup::parse({"XX", "ZZ"}));
  wrong_k.K = 2;
  const auto bad = check_gamma_witness(wrong_k, 2);
  EXPECT_NE(std::find(bad.begin(), bad.end(), "trace"), bad.end());
}

}  // namespace
}  // namespace qcb
