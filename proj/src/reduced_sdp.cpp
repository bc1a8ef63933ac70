#include "qcbounds/reduced_sdp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

#include "qcbounds/combinatorics.hpp"

namespace qcb {

Tuple class_key(const Tuple& x, MergeMode mode) {
  if (mode == MergeMode::permutation) {
    std::array<int, 3> s{x.i, x.j, x.product_weight()};
    std::sort(s.begin(), s.end());
    return {s[0], s[1], s[2], x.t - x.p};
  }
  if (x.i > 0 && x.i == x.j && x.t == x.i && x.p == x.i) return {x.i, 0, 0, 0};
  return std::max(x, x.transposed());
}

namespace {

bool low_weight(int w, int delta) { return w >= 1 && w < delta; }

Rational pow2(int e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return Rational(r);
}

const std::vector<BlockStructure>& cached_structure(int n) {
  static std::map<int, std::vector<BlockStructure>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, block_structure(n)).first;
  return it->second;
}

void check_params(int n, long K, int delta) {
  if (n < 1 || n > 30) throw std::invalid_argument("n must be in [1, 30]");
  if (K < 1) throw std::invalid_argument("K must be positive");
  if (delta < 1 || delta > n + 1) throw std::invalid_argument("delta must be in [1, n + 1]");
}

int weight_var(const TupleVars& v, int i) { return v.of({i, 0, 0, 0}); }

// Scaled blocks sum_x (alpha / 3^((i+j)/2)) x, optionally of x^{0,0}_{k,0} - x.
void add_blocks(ReducedModel& m, bool complement) {
  for (const auto& bs : cached_structure(m.n)) {
    std::map<std::array<int, 3>, Rational> cells;
    for (const auto& term : bs.terms) {
      const int var = m.vars.of(term.x);
      if (complement) {
        const int kv = weight_var(m.vars, term.x.product_weight());
        if (kv >= 0) cells[{term.row, term.col, kv}] += term.scaled;
        if (var >= 0) cells[{term.row, term.col, var}] -= term.scaled;
      } else if (var >= 0) {
        cells[{term.row, term.col, var}] += term.scaled;
      }
    }
    LmiBlock<Rational> b;
    b.side = bs.side;
    b.label = std::string(complement ? "complement " : "main ") + bs.id.key();
    for (const auto& [key, coef] : cells)
      if (coef != 0) b.entries.push_back({key[0], key[1], key[2], coef});
    m.program.blocks.push_back(std::move(b));
    m.block_ids.push_back(bs.id);
  }
}

void add_x00(ConicProgram<Rational>& p, const TupleVars& v) {
  p.add_eq({{v.of({0, 0, 0, 0}), 1}}, 1, "x00");
}

// sum over tuples with product weight k of gamma x = (2^n / K) gamma_k x_k; k = 0
// is the homogeneous form of the trace row.
void add_weight_rows(ConicProgram<Rational>& p, const TupleVars& v, long K, int kmin) {
  const int n = v.n;
  CoeffTable ct(n);
  std::vector<std::vector<Term<Rational>>> rows(n + 1);
  for (const auto& [x, var] : v.var) {
    const int k = x.product_weight();
    rows[k].push_back({var, Rational(gamma_coeff(x.i, x.j, x.t, x.p, n))});
  }
  const Rational scale = pow2(n) / K;
  for (int k = kmin; k <= n; ++k) {
    const int kv = weight_var(v, k);
    if (kv >= 0) rows[k].push_back({kv, -scale * Rational(ct.weight_count(k))});
    auto terms = merge_terms(rows[k]);
    if (!terms.empty()) p.add_eq(std::move(terms), 0, "weight:" + std::to_string(k));
  }
}

}  // namespace

TupleVars make_tuple_vars(int n, MergeMode mode, int pure_delta) {
  TupleVars out;
  out.n = n;
  std::map<Tuple, int> by_key;
  for (const Tuple& x : index_set(n)) {
    if (x.odd()) continue;
    if (pure_delta > 1 &&
        (low_weight(x.i, pure_delta) || low_weight(x.j, pure_delta) || low_weight(x.product_weight(), pure_delta)))
      continue;
    const Tuple key = class_key(x, mode);
    auto [it, fresh] = by_key.emplace(key, out.num_vars());
    if (fresh) out.members.emplace_back();
    out.members[it->second].push_back(x);
    out.var[x] = it->second;
  }
  return out;
}

std::vector<Rational> assign(const TupleVars& v, const XVector<Rational>& x) {
  for (const auto& [key, val] : x)
    if (val != 0 && v.of(key) < 0) throw std::invalid_argument("x is nonzero on fixed-zero tuple " + key.key());
  std::vector<Rational> out(v.num_vars());
  for (int c = 0; c < v.num_vars(); ++c) {
    bool first = true;
    for (const Tuple& t : v.members[c]) {
      auto it = x.find(t);
      Rational val = it == x.end() ? Rational(0) : it->second;
      if (first) {
        out[c] = val;
        first = false;
      } else if (val != out[c]) {
        throw std::invalid_argument("x is not constant on the class of " + t.key());
      }
    }
  }
  return out;
}

const char* to_string(ModelShape s) {
  switch (s) {
    case ModelShape::full: return "sdpx";
    case ModelShape::relaxation: return "sdpx_relax";
    case ModelShape::lovasz: return "red_lovasz";
  }
  return "?";
}

void add_trace_row(ConicProgram<Rational>& p, const TupleVars& v, long K) {
  CoeffTable ct(v.n);
  std::vector<Term<Rational>> terms;
  for (int i = 0; i <= v.n; ++i) {
    const int var = weight_var(v, i);
    if (var >= 0) terms.push_back({var, Rational(ct.weight_count(i))});
  }
  p.add_eq(merge_terms(terms), pow2(v.n) / K, "trace");
}

void add_kl_rows(ConicProgram<Rational>& p, const TupleVars& v, long K, int delta, bool widen,
                 bool equality_only) {
  const int n = v.n;
  CoeffTable ct(n);
  const Rational scale = Rational(K) / pow2(n);
  for (int j = 1; j <= n; ++j) {
    const bool eq = j < delta && (widen || j > 1);
    if (!eq && equality_only) continue;
    std::vector<Term<Rational>> terms;
    for (int i = 0; i <= n; ++i) {
      const int var = weight_var(v, i);
      if (var < 0) continue;
      terms.push_back({var, scale * Rational(ct.kraw(j, i)) * Rational(ct.weight_count(i))});
      if (i == j) terms.push_back({var, -Rational(ct.weight_count(i))});
    }
    terms = merge_terms(terms);
    const std::string label = "kl:" + std::to_string(j);
    if (eq)
      p.add_eq(std::move(terms), 0, label);
    else
      p.add_ge(std::move(terms), 0, label);
  }
}

void add_shadow_rows(ConicProgram<Rational>& p, const TupleVars& v, long K) {
  const int n = v.n;
  CoeffTable ct(n);
  const Rational scale = Rational(K) * K / pow2(n);
  for (int j = 0; j <= n; ++j) {
    std::vector<Term<Rational>> terms;
    for (int i = 0; i <= n; ++i) {
      const int var = weight_var(v, i);
      if (var < 0) continue;
      Rational c = scale * Rational(ct.kraw(j, i)) * Rational(ct.weight_count(i));
      terms.push_back({var, i % 2 ? -c : c});
    }
    terms = merge_terms(terms);
    if (!terms.empty()) p.add_ge(std::move(terms), 0, "shadow:" + std::to_string(j));
  }
}

void add_type_row(ConicProgram<Rational>& p, const TupleVars& v, long K, StabType type) {
  if (type == StabType::none) return;
  if (K & (K - 1)) throw std::invalid_argument("stabilizer type constraints need K a power of two");
  int logk = 0;
  while ((1L << logk) < K) ++logk;
  const int e = v.n - logk - (type == StabType::type1 ? 1 : 0);
  if (e < 0) throw std::invalid_argument("type I constraint needs n > log2 K");
  CoeffTable ct(v.n);
  std::vector<Term<Rational>> terms;
  for (int i = 0; i <= v.n; i += 2) {
    const int var = weight_var(v, i);
    if (var >= 0) terms.push_back({var, Rational(ct.weight_count(i))});
  }
  p.add_eq(merge_terms(terms), pow2(e), "type");
}

void add_stab_bounds(ConicProgram<Rational>& p, const TupleVars& v) {
  std::set<std::pair<int, int>> seen;
  for (const auto& [x, var] : v.var) {
    if (seen.emplace(var, -1).second) p.add_ge({{var, 1}}, 0, "stab:" + x.key() + ">=0");
    for (int w : {x.i, x.j, x.product_weight()}) {
      const int wv = weight_var(v, w);
      if (wv < 0 || wv == var || !seen.emplace(var, wv).second) continue;
      p.add_ge({{wv, 1}, {var, -1}}, 0, "stab:" + x.key() + "<=" + std::to_string(w));
    }
  }
}

namespace {

ReducedModel make_model(ModelShape shape, int n, long K, int delta, MergeMode mode, int pure_delta) {
  check_params(n, K, delta);
  ReducedModel m;
  m.shape = shape;
  m.n = n;
  m.K = K;
  m.delta = delta;
  m.vars = make_tuple_vars(n, mode, pure_delta);
  for (const auto& members : m.vars.members) m.program.add_var("x[" + members.front().key() + "]");
  add_x00(m.program, m.vars);
  return m;
}

}  // namespace

ReducedModel build_reduced_sdp(int n, long K, int delta, const ReducedOptions& opt) {
  // With K = 1 the distance is the least stabilizer weight, so the code is pure.
  const bool pure = opt.pure || K == 1;
  ReducedModel m = make_model(ModelShape::full, n, K, delta, MergeMode::permutation, pure ? delta : 0);
  m.opt = opt;
  m.opt.pure = pure;
  add_trace_row(m.program, m.vars, K);
  add_weight_rows(m.program, m.vars, K, 1);
  add_kl_rows(m.program, m.vars, K, delta, opt.kl_widen, opt.kl_equality_only);
  if (opt.shadow) add_shadow_rows(m.program, m.vars, K);
  add_type_row(m.program, m.vars, K, opt.stab);
  if (opt.stab_bounds) add_stab_bounds(m.program, m.vars);
  add_blocks(m, false);
  if (opt.complement) add_blocks(m, true);
  return m;
}

ReducedModel build_reduced_relaxation(int n, long K, int delta) {
  ReducedModel m = make_model(ModelShape::relaxation, n, K, delta, MergeMode::permutation, 0);
  m.opt.complement = false;
  m.opt.kl_equality_only = true;
  add_weight_rows(m.program, m.vars, K, 0);
  add_kl_rows(m.program, m.vars, K, delta, true, true);
  add_blocks(m, false);
  return m;
}

ReducedModel build_reduced_lovasz(int n, int delta) {
  ReducedModel m = make_model(ModelShape::lovasz, n, 1, delta, MergeMode::transpose, delta);
  m.opt.complement = false;
  add_trace_row(m.program, m.vars, 1);
  add_blocks(m, false);
  return m;
}

namespace {

struct FarkasBuild {
  ConicProgram<Rational> program;
  std::vector<std::vector<int>> zvar;
  std::vector<int> eq_var;
  std::vector<Term<Rational>> alpha;
};

// diag_weight[b][r] weights Z_rr in the normalization row (default 1).
FarkasBuild farkas_build(const ConicProgram<Rational>& primal, const std::vector<std::vector<Rational>>* diag_weight) {
  validate(primal);
  FarkasBuild out;
  auto& d = out.program;
  std::vector<std::map<int, Rational>> eqs(primal.num_vars);
  std::vector<Term<Rational>> alpha, norm;

  for (std::size_t b = 0; b < primal.blocks.size(); ++b) {
    const auto& blk = primal.blocks[b];
    const int s = blk.side;
    std::vector<int> zv(static_cast<std::size_t>(s) * s, -1);
    LmiBlock<Rational> zb;
    zb.side = s;
    zb.diagonal = blk.diagonal;
    zb.label = "Z " + blk.label;
    for (int r = 0; r < s; ++r)
      for (int c = r; c < s; ++c) {
        if (blk.diagonal && c != r) continue;
        const int v = d.add_var("Z" + std::to_string(b) + "[" + std::to_string(r) + "," + std::to_string(c) + "]");
        zv[r * s + c] = zv[c * s + r] = v;
        zb.entries.push_back({r, c, v, 1});
      }
    for (int r = 0; r < s; ++r)
      norm.push_back({zv[r * s + r], diag_weight ? (*diag_weight)[b][r] : Rational(1)});
    for (const auto& e : blk.entries) {
      const Rational mult = e.row == e.col ? 1 : 2;
      const int z = zv[e.row * s + e.col];
      if (e.var < 0)
        alpha.push_back({z, -mult * e.coef});
      else
        eqs[e.var][z] += mult * e.coef;
    }
    d.blocks.push_back(std::move(zb));
    out.zvar.push_back(std::move(zv));
  }
  for (const auto& row : primal.equalities) {
    const int u = d.add_var("u:" + row.label);
    out.eq_var.push_back(u);
    for (const auto& t : row.terms) eqs[t.var][u] += t.coef;
    if (row.rhs != 0) alpha.push_back({u, row.rhs});
  }
  for (const auto& row : primal.inequalities) {
    const int v = d.add_var("v:" + row.label);
    d.add_ge({{v, 1}}, 0);
    for (const auto& t : row.terms) eqs[t.var][v] += t.coef;
    if (row.rhs != 0) alpha.push_back({v, row.rhs});
  }
  for (int l = 0; l < primal.num_vars; ++l) {
    std::vector<Term<Rational>> terms;
    for (const auto& [v, c] : eqs[l])
      if (c != 0) terms.push_back({v, c});
    if (!terms.empty()) d.add_eq(std::move(terms), 0, "var:" + primal.var_names[l]);
  }
  d.add_le(merge_terms(norm), 1, "normalization");
  out.alpha = merge_terms(alpha);
  d.sense = Sense::maximize;
  d.objective = out.alpha;
  return out;
}

}  // namespace

ConicProgram<Rational> farkas_dual(const ConicProgram<Rational>& primal) {
  return farkas_build(primal, nullptr).program;
}

DualModel build_dual(const ReducedModel& m, DualNormalization norm) {
  std::vector<std::vector<Rational>> weights;
  for (std::size_t b = 0; b < m.program.blocks.size(); ++b) {
    std::vector<Rational> w;
    for (int r = 0; r < m.program.blocks[b].side; ++r)
      w.push_back(norm == DualNormalization::trace ? Rational(1) / pow_int(Rational(3), m.block_ids[b].k + r)
                                                   : Rational(1));
    weights.push_back(std::move(w));
  }
  FarkasBuild fb = farkas_build(m.program, &weights);
  if (norm == DualNormalization::scalar) {
    const std::string label = m.shape == ModelShape::lovasz ? "trace" : "weight:0";
    int row = -1;
    for (std::size_t r = 0; r < m.program.equalities.size(); ++r)
      if (m.program.equalities[r].label == label) row = static_cast<int>(r);
    if (row < 0) throw std::invalid_argument("scalar normalization needs the Lovasz or relaxation shape");
    auto& ineq = fb.program.inequalities;
    for (auto& r : ineq)
      if (r.label == "normalization") r = {{{fb.eq_var[row], -1}}, -1, "normalization"};
  }
  DualModel d;
  d.shape = m.shape;
  d.n = m.n;
  d.K = m.K;
  d.delta = m.delta;
  d.program = std::move(fb.program);
  d.blocks = m.block_ids;
  d.zvar = std::move(fb.zvar);
  for (std::size_t r = 0; r < m.program.equalities.size(); ++r)
    d.multipliers[m.program.equalities[r].label] = fb.eq_var[r];
  d.alpha = std::move(fb.alpha);
  return d;
}

ConicProgram<double> solver_form(const ReducedModel& m) {
  ConicProgram<double> p = to_float(m.program);
  for (std::size_t b = 0; b < m.block_ids.size(); ++b)
    for (auto& e : p.blocks[b].entries) e.coef *= std::pow(3.0, m.block_ids[b].k + 0.5 * (e.row + e.col));
  return p;
}

}  // namespace qcb
