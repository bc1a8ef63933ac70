#include "qcbounds/moment_gamma.hpp"

#include <bit>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "qcbounds/certcheck.hpp"
#include "qcbounds/combinatorics.hpp"
#include "qcbounds/reduced_sdp.hpp"

namespace qcb {

namespace {

Rational pow2(int e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return Rational(r);
}

// Weight of a string given by its lexicographic index.
int weight_of(std::uint64_t a) {
  return std::popcount((a | (a >> 1)) & 0x5555555555555555ULL);
}

std::map<Tuple, int> tuple_positions(int n) {
  std::map<Tuple, int> pos;
  for (const Tuple& t : index_set(n)) pos.emplace(t, static_cast<int>(pos.size()));
  return pos;
}

}  // namespace

Rational GammaMatrix::at(std::uint64_t a, std::uint64_t b) const {
  for (const auto& e : entries)
    if (e.row == a && e.col == b) return e.value;
  return 0;
}

Eigen::MatrixXd GammaMatrix::dense() const {
  if (n < 1 || n > 5) throw std::invalid_argument("GammaMatrix::dense: n must be in [1, 5]");
  const int size = 1 << (2 * n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  for (const auto& e : entries) m(static_cast<int>(e.row), static_cast<int>(e.col)) += e.value.get_d();
  return m;
}

GammaMatrix gamma_from_stabilizer(const StabilizerGroup& s) {
  GammaMatrix g;
  g.n = s.n();
  g.K = 1L << s.k();
  std::vector<std::uint64_t> idx;
  for (const auto& el : s.elements()) idx.push_back(el.pauli.index());
  for (std::uint64_t a : idx)
    for (std::uint64_t b : idx) g.entries.push_back({a, b, Rational(1)});
  return g;
}

std::map<std::uint64_t, Rational> shifted_column_sums(const GammaMatrix& g) {
  std::map<std::uint64_t, Rational> out;
  for (const auto& e : g.entries) out[e.row ^ e.col] += e.value;
  return out;
}

Graph complete_graph(int m) {
  if (m < 1) throw std::invalid_argument("graph needs a vertex");
  Graph g;
  g.size = m;
  g.adj.assign(static_cast<std::size_t>(m) * m, 0);
  g.cell_class.assign(static_cast<std::size_t>(m) * m, 0);
  int next = 0;
  for (int u = 0; u < m; ++u)
    for (int v = u; v < m; ++v) {
      if (u != v) g.adj[u * m + v] = g.adj[v * m + u] = 1;
      g.cell_class[u * m + v] = g.cell_class[v * m + u] = next++;
    }
  for (int u = 0; u < m; ++u) g.anchor_class.push_back(g.cell_class[u * m + u]);
  return g;
}

Graph cycle_graph(int m) {
  if (m < 3) throw std::invalid_argument("cycle needs at least three vertices");
  Graph g = complete_graph(m);
  std::fill(g.adj.begin(), g.adj.end(), 0);
  for (int u = 0; u < m; ++u) {
    const int v = (u + 1) % m;
    g.adj[u * m + v] = g.adj[v * m + u] = 1;
  }
  return g;
}

ConfusabilityGraph build_confusability_graph(int n, int delta, GraphVariant variant) {
  if (n < 1 || n > 5) throw std::invalid_argument("confusability graph: n must be in [1, 5]");
  if (delta < 1 || delta > n + 1) throw std::invalid_argument("confusability graph: delta must be in [1, n + 1]");
  ConfusabilityGraph cg;
  cg.n = n;
  cg.delta = delta;
  const std::uint64_t total = std::uint64_t{1} << (2 * n);
  for (std::uint64_t a = 0; a < total; ++a) {
    if (variant == GraphVariant::without_identity && a == 0) continue;
    if (variant == GraphVariant::without_low_weight && weight_of(a) < delta) continue;
    cg.vertices.push_back(a);
  }
  const int m = static_cast<int>(cg.vertices.size());
  if (m == 0) throw std::invalid_argument("confusability graph has no vertices");
  const auto pos = tuple_positions(n);
  std::map<Tuple, int> classes;
  Graph& g = cg.graph;
  g.size = m;
  g.adj.assign(static_cast<std::size_t>(m) * m, 0);
  g.cell_class.assign(static_cast<std::size_t>(m) * m, 0);
  g.orbit.assign(static_cast<std::size_t>(m) * m, 0);
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v) {
      const std::uint64_t a = cg.vertices[u], b = cg.vertices[v];
      const Tuple x = tuple_of(a, b, n);
      const int w = u == v ? weight_of(a) : x.product_weight();
      const bool edge = (x.odd() || (w >= 1 && w < delta));
      const std::size_t cell = static_cast<std::size_t>(u) * m + v;
      g.adj[cell] = edge;
      g.cell_class[cell] = classes.emplace(class_key(x, MergeMode::transpose), static_cast<int>(classes.size())).first->second;
      g.orbit[cell] = pos.at(x);
    }
  const int base = static_cast<int>(pos.size());
  g.anchor_self_orbit = base;
  for (int u = 0; u < m; ++u) {
    g.anchor_class.push_back(g.cell_class[static_cast<std::size_t>(u) * m + u]);
    g.anchor_orbit.push_back(base + 1 + weight_of(cg.vertices[u]));
  }
  return cg;
}

ConicProgram<Rational> build_lovasz_sdp(const Graph& g, LovaszForm form, const Rational& target_trace) {
  const int m = g.size;
  int num_classes = 0;
  for (int c : g.cell_class) num_classes = std::max(num_classes, c + 1);
  std::vector<char> zero(num_classes, 0);
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v)
      if (g.adjacent(u, v)) zero[g.cell_class[static_cast<std::size_t>(u) * m + v]] = 1;

  ConicProgram<Rational> p;
  std::vector<int> var(num_classes, -1);
  for (int c = 0; c < num_classes; ++c)
    if (!zero[c]) var[c] = p.add_var("m" + std::to_string(c));
  auto cell_var = [&](int u, int v) { return var[g.cell_class[static_cast<std::size_t>(u) * m + v]]; };

  const bool bordered = form != LovaszForm::sdp1;
  if (bordered && static_cast<int>(g.anchor_class.size()) != m)
    throw std::invalid_argument("bordered Lovasz form needs an anchor class per vertex");
  const int off = bordered ? 1 : 0;
  const int side = m + off;
  LmiBlock<Rational> blk;
  blk.side = side;
  blk.label = bordered ? "bordered" : "M";
  for (int u = 0; u < m; ++u)
    for (int v = u; v < m; ++v) {
      const int x = cell_var(u, v);
      if (x >= 0) blk.entries.push_back({u + off, v + off, x, 1});
    }
  std::vector<Term<Rational>> diag, all;
  for (int u = 0; u < m; ++u) {
    const int x = cell_var(u, u);
    if (x >= 0) diag.push_back({x, 1});
    for (int v = 0; v < m; ++v)
      if (cell_var(u, v) >= 0) all.push_back({cell_var(u, v), 1});
  }
  diag = merge_terms(diag);
  if (bordered) {
    blk.entries.push_back({0, 0, -1, 1});
    for (int u = 0; u < m; ++u) {
      const int x = var[g.anchor_class[u]];
      if (x >= 0) blk.entries.push_back({0, u + 1, x, 1});
    }
  }
  const bool hinted = !g.orbit.empty() && (!bordered || !g.anchor_orbit.empty());
  if (hinted) {
    OrbitHint h;
    h.cell_orbit.assign(static_cast<std::size_t>(side) * side, 0);
    for (int u = 0; u < m; ++u)
      for (int v = 0; v < m; ++v)
        h.cell_orbit[static_cast<std::size_t>(u + off) * side + v + off] = g.orbit[static_cast<std::size_t>(u) * m + v];
    if (bordered) {
      // (0, u) and (u, 0) lie in different orbits: the anchor is fixed, so no
      // symmetry maps one to the other.
      int next = g.anchor_self_orbit;
      for (int o : g.orbit) next = std::max(next, o);
      for (int o : g.anchor_orbit) next = std::max(next, o);
      ++next;
      h.cell_orbit[0] = g.anchor_self_orbit;
      for (int u = 0; u < m; ++u) {
        h.cell_orbit[u + 1] = g.anchor_orbit[u];
        h.cell_orbit[static_cast<std::size_t>(u + 1) * side] = next + g.anchor_orbit[u];
      }
    }
    blk.orbits = std::move(h);
  }
  p.blocks.push_back(std::move(blk));

  switch (form) {
    case LovaszForm::sdp1:
      p.add_eq(diag, 1, "trace");
      p.sense = Sense::maximize;
      p.objective = merge_terms(all);
      break;
    case LovaszForm::sdp2:
      p.sense = Sense::maximize;
      p.objective = diag;
      break;
    case LovaszForm::feasibility:
      p.add_eq(diag, target_trace - 1, "trace");
      p.sense = Sense::feasibility;
      break;
  }
  return p;
}

GammaSdp build_gamma_sdp(int n, long K, int delta, const GammaOptions& opt) {
  if (n < 1 || n > 5) throw std::invalid_argument("Gamma SDP: n must be in [1, 5]");
  if (K < 1 || delta < 1 || delta > n + 1) throw std::invalid_argument("Gamma SDP: bad K or delta");
  GammaSdp out;
  out.n = n;
  out.K = K;
  out.delta = delta;
  const TupleVars vars = make_tuple_vars(n, MergeMode::permutation, opt.pure || K == 1 ? delta : 0);
  auto& p = out.program;
  for (const auto& members : vars.members) p.add_var("x[" + members.front().key() + "]");
  const auto pos = tuple_positions(n);
  out.tuple_var.assign(pos.size(), -1);
  for (const auto& [x, at] : pos) out.tuple_var[at] = vars.of(x);

  p.add_eq({{vars.of({0, 0, 0, 0}), 1}}, 1, "x00");
  add_trace_row(p, vars, K);
  CoeffTable ct(n);
  for (int i = 1; i <= n; ++i) {
    std::vector<Term<Rational>> terms;
    for (const auto& [x, v] : vars.var)
      if (x.i == i) terms.push_back({v, Rational(gamma_coeff(x.i, x.j, x.t, x.p, n))});
    const int diag = vars.of({i, i, i, i});
    if (diag >= 0) terms.push_back({diag, -pow2(n) / K * Rational(ct.weight_count(i))});
    terms = merge_terms(terms);
    if (!terms.empty()) p.add_eq(std::move(terms), 0, "row sum:" + std::to_string(i));
  }
  add_kl_rows(p, vars, K, delta, opt.kl_widen, false);
  if (opt.shadow) add_shadow_rows(p, vars, K);
  add_type_row(p, vars, K, opt.stab_type);
  if (opt.stabilizer) add_stab_bounds(p, vars);

  const int side = 1 << (2 * n);
  LmiBlock<Rational> blk;
  blk.side = side;
  blk.label = "Gamma";
  OrbitHint h;
  h.cell_orbit.resize(static_cast<std::size_t>(side) * side);
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b) {
      const Tuple x = tuple_of(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b), n);
      h.cell_orbit[static_cast<std::size_t>(a) * side + b] = pos.at(x);
      if (b < a) continue;
      const int v = vars.of(x);
      if (v >= 0) blk.entries.push_back({a, b, v, 1});
    }
  blk.orbits = std::move(h);
  p.blocks.push_back(std::move(blk));
  return out;
}

std::vector<std::string> check_gamma_witness(const GammaMatrix& g, int delta, const GammaOptions& opt) {
  const int n = g.n;
  if (n < 1 || n > 15) throw std::invalid_argument("check_gamma_witness: n out of range");
  std::vector<std::string> bad;
  auto fail = [&](const std::string& s) {
    if (std::find(bad.begin(), bad.end(), s) == bad.end()) bad.push_back(s);
  };
  std::unordered_map<std::uint64_t, Rational> cells;
  const int shift = 2 * n;
  auto key = [&](std::uint64_t a, std::uint64_t b) { return (a << shift) | b; };
  for (const auto& e : g.entries)
    if (e.value != 0) cells[key(e.row, e.col)] += e.value;
  auto at = [&](std::uint64_t a, std::uint64_t b) {
    auto it = cells.find(key(a, b));
    return it == cells.end() ? Rational(0) : it->second;
  };
  const Rational total = pow2(n) / g.K;

  if (at(0, 0) != 1) fail("x00");
  Rational trace = 0;
  std::vector<Rational> col0(n + 1);  // sum over weight-i strings of Gamma_{a,0}
  std::map<std::uint64_t, Rational> u;
  for (const auto& [k, v] : cells) {
    const std::uint64_t a = k >> shift, b = k & ((std::uint64_t{1} << shift) - 1);
    if (at(b, a) != v) fail("symmetry");
    if (a == b) trace += v;
    if (b == 0) {
      col0[weight_of(a)] += v;
      u[a] = v;
    }
    const Tuple x = tuple_of(a, b, n);
    if (x.odd()) fail("anticommuting zero");
    const std::uint64_t c = a ^ b;
    if (at(a, c) != v || at(c, b) != v) fail("triple structure");
    if (opt.pure) {
      for (int w : {weight_of(a), weight_of(b), weight_of(c)})
        if (w >= 1 && w < delta) fail("pure zero");
    }
    if (opt.stabilizer && (v < 0 || v > at(a, 0) || v > at(b, 0) || v > at(c, 0))) fail("stabilizer bound");
  }
  if (trace != total) fail("trace");

  // sum_v Gamma_{x^v, v} = (2^n / K) Gamma_{x, 0}
  const auto sums = shifted_column_sums(g);
  std::set<std::uint64_t> keys;
  for (const auto& [x, v] : sums) keys.insert(x);
  for (const auto& [a, v] : u) keys.insert(a);
  for (std::uint64_t x : keys) {
    auto it = sums.find(x);
    const Rational lhs = it == sums.end() ? Rational(0) : it->second;
    if (lhs != total * at(x, 0)) fail("shifted sums");
  }

  CoeffTable ct(n);
  const Rational scale = Rational(g.K) / pow2(n);
  for (int j = 1; j <= n; ++j) {
    Rational s = 0;
    for (int i = 0; i <= n; ++i) s += Rational(ct.kraw(j, i)) * col0[i];
    const Rational lhs = scale * s - col0[j];
    const bool eq = j < delta && (opt.kl_widen || j > 1);
    if (eq ? lhs != 0 : lhs < 0) fail("kl:" + std::to_string(j));
  }
  if (opt.shadow) {
    for (int j = 0; j <= n; ++j) {
      Rational s = 0;
      for (int i = 0; i <= n; ++i) s += (i % 2 ? -1 : 1) * Rational(ct.kraw(j, i)) * col0[i];
      if (s < 0) fail("shadow:" + std::to_string(j));
    }
  }
  if (opt.stab_type != StabType::none) {
    int logk = 0;
    while ((1L << logk) < g.K) ++logk;
    Rational even = 0;
    for (int i = 0; i <= n; i += 2) even += col0[i];
    if (even != pow2(n - logk - (opt.stab_type == StabType::type1 ? 1 : 0))) fail("type");
  }

  if (n <= 3) {
    const int side = 1 << (2 * n);
    DenseMatrix<Rational> m(side, side);
    for (const auto& [k, v] : cells) m(static_cast<int>(k >> shift), static_cast<int>(k & ((1u << shift) - 1))) = v;
    if (!psd_exact(m)) fail("psd");
  } else {
    // Gamma = u u^T with u the column of the identity.
    bool ok = at(0, 0) == 1;
    std::size_t nonzero = 0;
    for (const auto& [a, v] : u)
      if (v != 0) ++nonzero;
    ok = ok && cells.size() == nonzero * nonzero;
    for (const auto& [k, v] : cells) {
      if (!ok) break;
      const std::uint64_t a = k >> shift, b = k & ((std::uint64_t{1} << shift) - 1);
      auto ia = u.find(a), ib = u.find(b);
      ok = ia != u.end() && ib != u.end() && ia->second * ib->second == v;
    }
    if (!ok) fail("psd (rank-one factorization)");
  }
  return bad;
}

}  // namespace qcb
