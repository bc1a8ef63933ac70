#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcbounds/conic.hpp"
#include "qcbounds/enumerators.hpp"
#include "qcbounds/terwilliger.hpp"

namespace qcb {

// How tuples are identified with one another.
//   transpose:   x^{t,p}_{i,j} = x^{t,p}_{j,i} and x^{0,0}_{i,0} = x^{i,i}_{i,i}
//   permutation: t - p equal and (i, j, i+j-t-p) permuted (includes the above)
enum class MergeMode { transpose, permutation };

// Representative of the class of x (defined for every tuple, odd ones included).
Tuple class_key(const Tuple& x, MergeMode mode);

struct TupleVars {
  int n = 0;
  std::map<Tuple, int> var;  // absent: fixed to zero
  std::vector<std::vector<Tuple>> members;

  int num_vars() const { return static_cast<int>(members.size()); }
  int of(const Tuple& x) const {
    auto it = var.find(x);
    return it == var.end() ? -1 : it->second;
  }
};

// Odd t - p tuples are always zero. pure_delta > 1 also zeroes tuples with
// {i, j, i+j-t-p} meeting {1, .., pure_delta - 1}.
TupleVars make_tuple_vars(int n, MergeMode mode, int pure_delta = 0);

// Values of the program variables for x; throws when x is not constant on a
// class or nonzero on a fixed-zero tuple.
std::vector<Rational> assign(const TupleVars& v, const XVector<Rational>& x);

enum class ModelShape { full, relaxation, lovasz };
const char* to_string(ModelShape s);

struct ReducedOptions {
  bool shadow = false;
  StabType stab = StabType::none;
  bool stab_bounds = false;  // 0 <= x^{t,p}_{i,j} <= x^{0,0}_{i,0}
  bool pure = false;  // implied when K = 1
  bool complement = true;
  bool kl_equality_only = false;
  bool kl_widen = true;  // 0 < j < delta rather than 1 < j < delta
};

struct ReducedModel {
  ModelShape shape = ModelShape::full;
  int n = 0;
  long K = 1;
  int delta = 1;
  ReducedOptions opt;
  TupleVars vars;
  // Variables are the tuple classes; blocks are the rational scaled blocks,
  // congruent to the alpha blocks.
  ConicProgram<Rational> program;
  // Parallel to program.blocks; complement blocks repeat the ids.
  std::vector<BlockId> block_ids;
};

// Floating-point form with the unscaled alpha blocks, so that feasibility shifts
// are measured in the same metric as the dual Y blocks.
ConicProgram<double> solver_form(const ReducedModel& m);

ReducedModel build_reduced_sdp(int n, long K, int delta, const ReducedOptions& opt = {});
// Main blocks only, KL equalities for 0 < j < delta, no inequalities.
ReducedModel build_reduced_relaxation(int n, long K, int delta);
// Self-dual feasibility program: K = 1, zeros per confusability, sum gamma x = 2^n.
ReducedModel build_reduced_lovasz(int n, int delta);

// Shared linear rows over tuple variables.
void add_trace_row(ConicProgram<Rational>& p, const TupleVars& v, long K);
void add_kl_rows(ConicProgram<Rational>& p, const TupleVars& v, long K, int delta, bool widen, bool equality_only);
void add_shadow_rows(ConicProgram<Rational>& p, const TupleVars& v, long K);
void add_type_row(ConicProgram<Rational>& p, const TupleVars& v, long K, StabType type);
void add_stab_bounds(ConicProgram<Rational>& p, const TupleVars& v);

// --- dual programs -------------------------------------------------------

// The dual is homogeneous; one linear bound makes its optimum finite.
enum class DualNormalization {
  trace,         // sum of block traces of Y <= 1
  scaled_trace,  // sum of block traces of Z <= 1
  scalar,        // w <= 1 (Lovasz) or Q_0 <= 1 (relaxation)
};

// Printed dual of the relaxation or the Lovasz program, in the scaled variables
// Z^{(a,k)}_{ij} = 3^{i/2} Y_{ij} 3^{j/2} (global i, j), which makes every
// coefficient rational. Objective: maximize alpha.
struct DualModel {
  ModelShape shape = ModelShape::lovasz;
  int n = 0;
  long K = 1;
  int delta = 1;
  ConicProgram<Rational> program;
  std::vector<BlockId> blocks;
  std::vector<std::vector<int>> zvar;  // per block, side * side -> variable
  std::map<std::string, int> multipliers;  // primal row label -> variable
  std::vector<Term<Rational>> alpha;       // alpha as a linear form
};

DualModel build_dual(const ReducedModel& m, DualNormalization norm = DualNormalization::trace);

// Generic dual of "find x: F(x) >= 0, E x = f, G x >= h":  Z >= 0, u, v >= 0 with
// <Z, F_l> + (E^T u)_l + (G^T v)_l = 0 and alpha = u^T f + v^T h - <Z, F0>,
// maximized under sum tr Z <= 1. A positive optimum proves infeasibility.
ConicProgram<Rational> farkas_dual(const ConicProgram<Rational>& primal);

}  // namespace qcb
