#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "qcbounds/conic.hpp"
#include "qcbounds/enumerators.hpp"
#include "qcbounds/moment_gamma.hpp"

namespace qcb {
namespace {

TEST(LpExact, TinyMaximization) {
  ConicProgram<Rational> p;
  const int x = p.add_var("x");
  p.add_le({{x, 1}}, 1);
  p.add_ge({{x, 1}}, 0);
  p.sense = Sense::maximize;
  p.objective = {{x, 1}};
  const SolveReport r = solve_lp_exact(p);
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_EQ(r.exact_x[0], 1);
  EXPECT_EQ(r.exact_objective, 1);
}

TEST(LpExact, InfeasibleCarriesVerifiedFarkasRay) {
  ConicProgram<Rational> p;
  const int x = p.add_var("x"), y = p.add_var("y");
  p.add_eq({{x, 1}, {y, 1}}, 1);
  p.add_ge({{x, 1}}, 1);
  p.add_ge({{y, 1}}, Rational(1, 2));
  const SolveReport r = solve_lp_exact(p);
  ASSERT_EQ(r.status, Status::infeasible_certified);
  ASSERT_TRUE(r.farkas.has_value());
  EXPECT_TRUE(verify_farkas(p, *r.farkas));
}

TEST(LpExact, UnboundedFlagged) {
  ConicProgram<Rational> p;
  const int x = p.add_var("x");
  p.add_ge({{x, 1}}, 0);
  p.sense = Sense::maximize;
  p.objective = {{x, 1}};
  EXPECT_EQ(solve_lp_exact(p).status, Status::unbounded);
}

TEST(LpExact, RejectsBlocks) {
  ConicProgram<Rational> p;
  const int x = p.add_var("x");
  LmiBlock<Rational> b;
  b.side = 1;
  b.entries.push_back({0, 0, x, 1});
  p.blocks.push_back(b);
  EXPECT_THROW(solve_lp_exact(p), std::invalid_argument);
}

TEST(LpExact, ShadowLpAtFourOneThree) {
  LpOptions opt;
  opt.shadow = true;
  const ConicProgram<Rational> with = build_lp_bound(4, 1, 3, opt);
  const SolveReport r = solve_lp_exact(with);
  ASSERT_EQ(r.status, Status::infeasible_certified);
  EXPECT_TRUE(verify_farkas(with, *r.farkas));
  EXPECT_EQ(solve_lp_exact(build_lp_bound(4, 1, 3)).status, Status::feasible);
}

// Largest binary code of length n and minimum distance d, by exhaustive search.
int brute_force_code_size(int n, int d) {
  const int words = 1 << n;
  int best = 0;
  for (std::uint32_t set = 1; set < (1u << words); ++set) {
    bool ok = true;
    for (int a = 0; a < words && ok; ++a)
      for (int b = a + 1; b < words && ok; ++b)
        if ((set >> a & 1) && (set >> b & 1) && std::popcount(static_cast<unsigned>(a ^ b)) < d) ok = false;
    if (ok) best = std::max(best, std::popcount(set));
  }
  return best;
}

TEST(LpExact, ClassicalDelsarteMatchesBruteForce) {
  DelsarteOptions o;
  o.quantum = false;
  const SolveReport r = solve_lp_exact(build_delsarte(3, 3, o));
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_EQ(r.exact_objective, 2);
  EXPECT_EQ(brute_force_code_size(3, 3), 2);
}

TEST(LpExact, QuantumDelsarteUnconstrained) {
  const SolveReport r = solve_lp_exact(build_delsarte(2, 1));
  // No zeros: the full weight distribution of all 4^n strings is optimal.
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_EQ(r.exact_objective, 16);
}

TEST(LpExact, DelsartePinnedTotalWithShadowAtFourThree) {
  DelsarteOptions o;
  o.pin_total = true;
  o.shadow = true;
  EXPECT_EQ(solve_lp_exact(build_delsarte(4, 3, o)).status, Status::infeasible_certified);
}

TEST(Sdp, ThetaOfFiveCycle) {
  const ConicProgram<Rational> p = build_lovasz_sdp(cycle_graph(5), LovaszForm::sdp1);
  const SolveReport r = solve_sdp(to_float(p));
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_NEAR(r.objective, std::sqrt(5.0), 1e-6);
}

TEST(Sdp, ThetaOfCompleteGraphViaSdp2) {
  const SolveReport r = solve_sdp(to_float(build_lovasz_sdp(complete_graph(6), LovaszForm::sdp2)));
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_NEAR(r.objective, 1.0, 1e-6);
}

TEST(Sdp, KktResidualsAndObjectiveReevaluation) {
  const ConicProgram<double> p = to_float(build_lovasz_sdp(cycle_graph(7), LovaszForm::sdp1));
  SdpOptions opt;
  const SolveReport r = solve_sdp(p, opt);
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_LE(r.primal_residual, 10 * opt.tol);
  EXPECT_LE(r.dual_residual, 10 * opt.tol);
  EXPECT_NEAR(evaluate(p.objective, r.x, p.objective_constant), r.objective, 1e-9);
  // theta(C7) = 7 cos(pi/7) / (1 + cos(pi/7))
  const double c = std::cos(M_PI / 7);
  EXPECT_NEAR(r.objective, 7 * c / (1 + c), 1e-6);
}

TEST(Sdp, FeasibilityVerdicts) {
  // y >= 0 and [[y, 1], [1, y]] >= 0 is feasible; with y <= 1/2 it is not.
  ConicProgram<double> p;
  const int y = p.add_var("y");
  LmiBlock<double> b;
  b.side = 2;
  b.entries = {{0, 0, y, 1.0}, {1, 1, y, 1.0}, {0, 1, -1, 1.0}};
  p.blocks.push_back(b);
  EXPECT_EQ(solve_sdp(p).status, Status::feasible);
  p.add_le({{y, 1.0}}, 0.5);
  EXPECT_EQ(solve_sdp(p).status, Status::infeasible_numeric);
}

TEST(Sdp, Deterministic) {
  const ConicProgram<double> p = to_float(build_lovasz_sdp(cycle_graph(5), LovaszForm::sdp2));
  const SolveReport a = solve_sdp(p), b = solve_sdp(p);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.x, b.x);
}

TEST(Validate, RejectsMalformedPrograms) {
  ConicProgram<Rational> p;
  const int x = p.add_var("x");
  p.add_eq({{x, 1}, {x, 2}}, 0);
  EXPECT_THROW(validate(p), std::invalid_argument);
  ConicProgram<Rational> q;
  q.add_var("x");
  q.add_eq({{3, 1}}, 0);
  EXPECT_THROW(validate(q), std::invalid_argument);
  ConicProgram<Rational> r;
  r.add_var("x");
  r.blocks.push_back(LmiBlock<Rational>{});
  EXPECT_THROW(validate(r), std::invalid_argument);
}

TEST(Sdpa, SmallProgramLayout) {
  ConicProgram<double> p;
  const int y = p.add_var("y");
  LmiBlock<double> b;
  b.side = 1;
  b.entries = {{0, 0, y, 1.0}};
  p.blocks.push_back(b);
  p.sense = Sense::minimize;
  p.objective = {{y, 1.0}};
  const std::string text = export_sdpa(p);
  EXPECT_EQ(text, "1\n1\n1\n1\n1 1 1 1 1\n");
  EXPECT_EQ(export_sdpa(parse_sdpa(text)), text);
}

TEST(Sdpa, LpIsDiagonalOnly) {
  const std::string text = export_sdpa(to_float(build_lp_bound(5, 2, 3)));
  std::istringstream in(text);
  std::string m, nb, sizes;
  std::getline(in, m);
  std::getline(in, nb);
  std::getline(in, sizes);
  EXPECT_EQ(nb, "1");
  EXPECT_EQ(sizes.front(), '-');
  EXPECT_EQ(export_sdpa(parse_sdpa(text)), text);
}

}  // namespace
}  // namespace qcb
