#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "qcbounds/conic.hpp"
#include "qcbounds/enumerators.hpp"
#include "qcbounds/pauli.hpp"
#include "qcbounds/terwilliger.hpp"

namespace qcb {

// Moment matrix of side 4^n indexed by unsigned Pauli strings (lexicographic
// index). Stored sparsely; entries not listed are zero.
struct GammaMatrix {
  int n = 0;
  long K = 1;
  std::vector<SparseEntry> entries;

  Rational at(std::uint64_t a, std::uint64_t b) const;
  Eigen::MatrixXd dense() const;  // n <= 5
};

// Gamma_ab = 1 iff both unsigned strings lie in the stabilizer group.
GammaMatrix gamma_from_stabilizer(const StabilizerGroup& s);

// Sum over v of sigma_v(Gamma)_{x0} = Gamma_{x^v, v} for every x, computed by
// bucketing the nonzero entries by a ^ b. Keyed by x.
std::map<std::uint64_t, Rational> shifted_column_sums(const GammaMatrix& g);

// Graph on `size` vertices with loops. cell_class assigns every ordered pair a
// class; pairs in one class share a variable in the Lovasz programs. orbit, when
// present, is a finer partition handed to the solver as a symmetry hint.
struct Graph {
  int size = 0;
  std::vector<char> adj;       // size * size, symmetric; diagonal marks loops
  std::vector<int> cell_class;  // size * size, symmetric
  std::vector<int> orbit;       // optional
  // Class and orbit of the cells (anchor, v) of the SDP2 matrix and of the anchor itself.
  std::vector<int> anchor_class, anchor_orbit;
  int anchor_self_orbit = -1;

  bool adjacent(int u, int v) const { return adj[static_cast<std::size_t>(u) * size + v] != 0; }
};

Graph complete_graph(int m);
Graph cycle_graph(int m);

enum class GraphVariant { full, without_identity, without_low_weight };

// a ~ b iff E_a, E_b anticommute or 0 < wt(E_a E_b) < delta; loop at a iff
// 0 < wt(E_a) < delta. without_identity is G', without_low_weight is G''.
// Vertices keep lexicographic order. n <= 5.
struct ConfusabilityGraph {
  int n = 0, delta = 0;
  std::vector<std::uint64_t> vertices;
  Graph graph;
};
ConfusabilityGraph build_confusability_graph(int n, int delta, GraphVariant variant = GraphVariant::without_identity);

enum class LovaszForm { sdp1, sdp2, feasibility };

// sdp1: max <J, M>, tr M = 1, M zero on edges. sdp2: max sum M_ii with the
// bordered matrix [[1, diag^T], [diag, M]] PSD. feasibility: sdp2 constraints plus
// sum M_ii = target_trace - 1 (the anchor plays the identity).
ConicProgram<Rational> build_lovasz_sdp(const Graph& g, LovaszForm form, const Rational& target_trace = 0);

struct GammaOptions {
  bool pure = false;  // implied when K = 1
  bool stabilizer = false;
  StabType stab_type = StabType::none;
  bool shadow = false;
  // Knill-Laflamme equalities for 0 < j < delta (true) or 1 < j < delta.
  bool kl_widen = true;
};

// The Gamma SDP with one variable per class of cells, n <= 5.
struct GammaSdp {
  int n = 0;
  long K = 1;
  int delta = 1;
  ConicProgram<Rational> program;
  std::vector<int> tuple_var;  // index_set(n) position -> variable or -1
};
GammaSdp build_gamma_sdp(int n, long K, int delta, const GammaOptions& opt = {});

// Checks an explicit Gamma against every constraint of the Gamma SDP in exact
// arithmetic, using the cell-level definitions (no averaging). PSD is checked
// by exact LDL^T for n <= 3 and otherwise through a rank-one factorization
// Gamma = u u^T. Returns the list of violated constraints.
std::vector<std::string> check_gamma_witness(const GammaMatrix& g, int delta, const GammaOptions& opt = {});

}  // namespace qcb
