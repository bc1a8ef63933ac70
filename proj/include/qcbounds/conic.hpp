#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "qcbounds/rational.hpp"

namespace qcb {

enum class Sense { feasibility, minimize, maximize };

template <class T>
struct Term {
  int var = 0;
  T coef{};
};

// sum(coef * var) == rhs for equalities, >= rhs for inequalities.
template <class T>
struct LinearRow {
  std::vector<Term<T>> terms;
  T rhs{};
  std::string label;
};

// One symmetric matrix cell. var < 0 marks the constant part. Stored with row <= col.
template <class T>
struct LmiEntry {
  int row = 0;
  int col = 0;
  int var = -1;
  T coef{};
};

// Cells of a block grouped into orbits of a symmetry group that leaves the whole
// program invariant. Every variable's coefficient matrix must be constant on each
// orbit; the solver then evaluates the Schur complement at one cell per orbit.
struct OrbitHint {
  std::vector<int> cell_orbit;  // side * side, row-major
};

// F(y) = F0 + sum_l y_l F_l  >= 0 (PSD). A diagonal block is a vector of scalar
// constraints and only uses row == col entries.
template <class T>
struct LmiBlock {
  int side = 0;
  bool diagonal = false;
  std::vector<LmiEntry<T>> entries;
  std::optional<OrbitHint> orbits;
  std::string label;
};

template <class T>
struct ConicProgram {
  int num_vars = 0;
  std::vector<std::string> var_names;
  std::vector<LinearRow<T>> equalities;
  std::vector<LinearRow<T>> inequalities;
  std::vector<LmiBlock<T>> blocks;
  Sense sense = Sense::feasibility;
  std::vector<Term<T>> objective;
  T objective_constant{};

  int add_var(std::string name = {}) {
    var_names.push_back(std::move(name));
    return num_vars++;
  }
  void add_eq(std::vector<Term<T>> terms, T rhs, std::string label = {}) {
    equalities.push_back({std::move(terms), std::move(rhs), std::move(label)});
  }
  void add_ge(std::vector<Term<T>> terms, T rhs, std::string label = {}) {
    inequalities.push_back({std::move(terms), std::move(rhs), std::move(label)});
  }
  void add_le(std::vector<Term<T>> terms, T rhs, std::string label = {}) {
    for (auto& t : terms) t.coef = -t.coef;
    inequalities.push_back({std::move(terms), -rhs, std::move(label)});
  }
};

// Merges repeated variables and drops zero coefficients.
template <class T>
std::vector<Term<T>> merge_terms(std::vector<Term<T>> terms);

// Throws std::invalid_argument when a row or cell references an undeclared
// variable, repeats a variable, or a block has side < 1.
template <class T>
void validate(const ConicProgram<T>& p);

ConicProgram<double> to_float(const ConicProgram<Rational>& p);

// Value of sum(coef * x) + constant.
double evaluate(const std::vector<Term<double>>& terms, const std::vector<double>& x, double constant = 0);
Rational evaluate(const std::vector<Term<Rational>>& terms, const std::vector<Rational>& x,
                  const Rational& constant = 0);

// Dense symmetric value of one block at x.
Eigen::MatrixXd block_value(const LmiBlock<double>& b, const std::vector<double>& x);

enum class Status { optimal, feasible, infeasible_certified, infeasible_numeric, unbounded, error };

const char* to_string(Status s);

// Exact Farkas ray for an LP: multipliers for equality rows (free sign) and
// inequality rows (nonnegative) with sum(y_r a_r) = 0 and sum(y_r b_r) > 0.
struct FarkasRay {
  std::vector<Rational> eq;
  std::vector<Rational> ineq;
};

bool verify_farkas(const ConicProgram<Rational>& p, const FarkasRay& ray);

struct SolveReport {
  Status status = Status::error;
  double objective = 0;
  std::vector<double> x;
  // IPM multipliers: one matrix per block (diagonal blocks as a column vector),
  // plus equality and inequality multipliers.
  std::vector<Eigen::MatrixXd> block_duals;
  std::vector<double> eq_duals;
  std::vector<double> ineq_duals;
  // Exact LP results.
  std::vector<Rational> exact_x;
  Rational exact_objective;
  std::optional<FarkasRay> farkas;
  // Feasibility solves: optimal shift s in F(y) + s I >= 0.
  double infeasibility = 0;
  int iterations = 0;
  double primal_residual = 0;
  double dual_residual = 0;
  double gap = 0;
  double min_eigenvalue = 0;
  std::string message;
};

// Two-phase simplex over the rationals with Bland's rule. PSD blocks are not allowed.
SolveReport solve_lp_exact(const ConicProgram<Rational>& p);

struct SdpOptions {
  double tol = 1e-8;
  // Feasibility verdicts: feasible iff shift <= feas_tol, numerically infeasible
  // iff shift >= 100 feas_tol.
  double feas_tol = 1e-6;
  int max_iter = 200;
  bool verbose = false;
};

// Infeasible-start primal-dual interior point (HKM direction, Mehrotra
// predictor-corrector) for programs with PSD blocks, inequalities and equalities.
SolveReport solve_sdp(const ConicProgram<double>& p, const SdpOptions& opt = {});

// SDPA sparse format. Equalities are written as pairs of inequalities in the
// trailing diagonal block.
std::string export_sdpa(const ConicProgram<double>& p);
ConicProgram<double> parse_sdpa(const std::string& text);

}  // namespace qcb
