#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <stdexcept>

#include "qcbounds/certcheck.hpp"

namespace qcb {

namespace {

using SparseRow = std::map<int, Rational>;

// Adjusts x on pivot columns so that every (homogeneous or not) row holds
// exactly. Pivots are chosen among non-fixed columns by priority (lower first),
// then by magnitude. Returns false when the rows cannot be met.
bool repair(const std::vector<LinearRow<Rational>>& rows, std::vector<Rational>& x, const std::vector<int>& priority,
            const std::vector<char>& fixed) {
  struct Pivot {
    int col;
    SparseRow row;
    Rational rhs;
  };
  std::vector<Pivot> pivots;
  for (const auto& lr : rows) {
    SparseRow row;
    for (const auto& t : lr.terms) row[t.var] += t.coef;
    Rational rhs = lr.rhs - evaluate(lr.terms, x);
    for (const auto& pv : pivots) {
      auto it = row.find(pv.col);
      if (it == row.end()) continue;
      const Rational f = it->second;
      for (const auto& [c, v] : pv.row) {
        Rational& cell = row[c];
        cell -= f * v;
        if (cell == 0) row.erase(c);
      }
      rhs -= f * pv.rhs;
    }
    int best = -1;
    double best_mag = 0;
    for (const auto& [c, v] : row) {
      if (fixed[c]) continue;
      const double mag = std::fabs(v.get_d());
      if (best < 0 || priority[c] < priority[best] || (priority[c] == priority[best] && mag > best_mag)) {
        best = c;
        best_mag = mag;
      }
    }
    if (best < 0) {
      if (rhs != 0) return false;
      continue;
    }
    const Rational p = row[best];
    for (auto& [c, v] : row) v /= p;
    rhs /= p;
    pivots.push_back({best, std::move(row), std::move(rhs)});
  }
  std::vector<Rational> d(x.size());
  for (std::size_t k = pivots.size(); k-- > 0;) {
    const auto& pv = pivots[k];
    Rational v = pv.rhs;
    for (const auto& [c, coef] : pv.row)
      if (c != pv.col) v -= coef * d[c];
    d[pv.col] = v;
  }
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += d[i];
  return true;
}

DualCertificate make_certificate(const DualModel& d, const std::vector<Rational>& x) {
  DualCertificate c;
  c.n = d.n;
  c.K = d.K;
  c.delta = d.delta;
  c.shape = d.shape;
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    const BlockId id = d.blocks[b];
    const int side = block_side(d.n, id);
    DenseMatrix<QuadExt> m(side, side);
    for (int r = 0; r < side; ++r)
      for (int col = 0; col < side; ++col)
        m(r, col) = QuadExt(x[d.zvar[b][r * side + col]]) * QuadExt::pow_sqrt3(-(2 * id.k + r + col));
    c.blocks[id] = std::move(m);
  }
  auto mult = [&](const std::string& label) -> std::optional<Rational> {
    auto it = d.multipliers.find(label);
    if (it == d.multipliers.end()) return std::nullopt;
    return x[it->second];
  };
  if (d.shape == ModelShape::lovasz) {
    if (auto w = mult("trace")) c.scalars["w"] = *w;
  } else {
    for (int k = 0; k <= d.n; ++k)
      if (auto q = mult("weight:" + std::to_string(k))) c.scalars["Q" + std::to_string(k)] = *q;
    for (int j = 1; j < d.delta; ++j)
      if (auto v = mult("kl:" + std::to_string(j))) c.scalars["C" + std::to_string(j)] = Rational(-*v);
  }
  c.alpha = to_string(evaluate(d.alpha, x));
  return c;
}

bool blocks_psd(const DualModel& d, const std::vector<Rational>& x) {
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    const int side = block_side(d.n, d.blocks[b]);
    DenseMatrix<Rational> m(side, side);
    for (int r = 0; r < side; ++r)
      for (int col = 0; col < side; ++col) m(r, col) = x[d.zvar[b][r * side + col]];
    if (!psd_exact(m)) return false;
  }
  return true;
}

// Per-variable factor s with Z = s Y (1 for non-block variables).
std::vector<double> z_scale(const DualModel& d, int num_vars) {
  std::vector<double> s(num_vars, 1.0);
  for (std::size_t b = 0; b < d.zvar.size(); ++b) {
    const int side = block_side(d.n, d.blocks[b]);
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c) s[d.zvar[b][r * side + c]] = std::pow(3.0, d.blocks[b].k + 0.5 * (r + c));
  }
  return s;
}

// Floating-point form of a program over the dual variables, rewritten in the
// unscaled Y blocks; the solver is far better conditioned there.
ConicProgram<double> y_form(const ConicProgram<Rational>& p, const DualModel& d, std::vector<double>& scale) {
  ConicProgram<double> q = to_float(p);
  scale = z_scale(d, q.num_vars);
  auto rescale = [&](auto& terms) {
    for (auto& t : terms) t.coef *= scale[t.var];
  };
  for (auto& r : q.equalities) rescale(r.terms);
  for (auto& r : q.inequalities) rescale(r.terms);
  rescale(q.objective);
  for (std::size_t b = 0; b < d.blocks.size(); ++b)
    for (auto& e : q.blocks[b].entries) {
      const double dd = std::pow(3.0, d.blocks[b].k + 0.5 * (e.row + e.col));
      e.coef *= (e.var < 0 ? 1.0 : scale[e.var]) / dd;
    }
  return q;
}

// A point is usable when the dual variables satisfy their own constraints; the
// exact repair and verification decide the rest, so optimality is not needed.
bool usable(const SolveReport& r) {
  return r.status == Status::optimal || (!r.x.empty() && std::isfinite(r.objective) && r.primal_residual <= 1e-7);
}

SolveReport solve_in_y(const ConicProgram<Rational>& p, const DualModel& d, const SdpOptions& opt) {
  std::vector<double> scale;
  SolveReport r = solve_sdp(y_form(p, d, scale), opt);
  for (std::size_t v = 0; v < r.x.size(); ++v) r.x[v] *= scale[v];
  return r;
}

}  // namespace

CertifyResult extract_certificate(const ReducedModel& m, const CertifyOptions& opt) {
  if (m.shape == ModelShape::full)
    throw std::invalid_argument("certificates are produced for the relaxation and Lovasz models only");
  CertifyResult res;
  const DualModel d = build_dual(m, opt.normalization);
  const SolveReport first = solve_in_y(d.program, d, opt.sdp);
  res.float_alpha = first.objective;
  if (!usable(first)) {
    res.message = std::string("dual solve ended with status ") + to_string(first.status) + ": " + first.message;
    return res;
  }
  if (!(first.objective > 10 * opt.sdp.tol)) {
    res.message = "dual optimum is not positive; no certificate";
    return res;
  }

  // Re-centre on the ray alpha = 1 with the normalization bound relaxed to
  // trace_room times what the first optimum needs, maximizing the smallest
  // eigenvalue of the Y blocks (Z - s diag(3^{k+r}) >= 0).
  ConicProgram<Rational> centred = d.program;
  const Rational room = approximate(opt.trace_room / first.objective, 1000);
  for (auto& row : centred.inequalities)
    if (row.label == "normalization") row.rhs *= room;
  const int margin = centred.add_var("margin");
  for (std::size_t b = 0; b < centred.blocks.size(); ++b) {
    auto& blk = centred.blocks[b];
    for (int r = 0; r < blk.side; ++r)
      blk.entries.push_back({r, r, margin, Rational(-pow_int(Rational(3), d.blocks[b].k + r))});
  }
  centred.add_eq(d.alpha, 1, "alpha");
  centred.add_le({{margin, 1}}, 1, "margin cap");
  centred.sense = Sense::maximize;
  centred.objective = {{margin, 1}};

  const int nv = d.program.num_vars;
  std::vector<int> priority(nv, 2);
  std::vector<char> is_z(nv, 0);
  for (std::size_t b = 0; b < d.zvar.size(); ++b) {
    const int side = block_side(d.n, d.blocks[b]);
    for (int r = 0; r < side; ++r)
      for (int col = 0; col < side; ++col) {
        const int v = d.zvar[b][r * side + col];
        is_z[v] = 1;
        priority[v] = r == col ? 1 : 2;
      }
  }
  for (int v = 0; v < nv; ++v)
    if (!is_z[v]) priority[v] = 0;

  std::vector<char> fixed(nv, 0);
  for (res.rounds = 1; res.rounds <= opt.max_rounds; ++res.rounds) {
    const SolveReport sol = solve_in_y(centred, d, opt.sdp);
    if (!usable(sol)) {
      res.message = std::string("re-centring solve ended with status ") + to_string(sol.status);
      return res;
    }
    res.margin = sol.x[margin];
    if (opt.verbose) std::cerr << "round " << res.rounds << ": margin " << res.margin << "\n";
    std::vector<Rational> x(nv);
    std::vector<double> dist(nv, 0);
    for (int v = 0; v < nv; ++v) {
      if (fixed[v]) continue;
      x[v] = approximate(sol.x[v], opt.max_denominator);
      dist[v] = std::fabs(sol.x[v] - approximate(sol.x[v], 1000).get_d());
    }
    // Pinned values live in equalities labelled "pin:<var>".
    for (const auto& row : centred.equalities)
      if (row.label.rfind("pin:", 0) == 0) x[row.terms.front().var] = row.rhs;
    if (repair(d.program.equalities, x, priority, fixed) && blocks_psd(d, x)) {
      res.certificate = make_certificate(d, x);
      res.report = verify_certificate(res.certificate);
      res.certified = res.report.certified && res.report.alpha_value >= opt.alpha_margin;
      if (!res.report.certified) res.message = "exact check failed: " + res.report.verdict;
      else res.message = res.certified ? "certified" : "exact alpha below the margin";
      return res;
    }
    std::vector<int> order;
    for (int v = 0; v < nv; ++v)
      if (!fixed[v]) order.push_back(v);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] < dist[b]; });
    const std::size_t count = std::max<std::size_t>(1, static_cast<std::size_t>(opt.pin_fraction * order.size()));
    for (std::size_t i = 0; i < count && i < order.size(); ++i) {
      const int v = order[i];
      fixed[v] = 1;
      centred.add_eq({{v, 1}}, approximate(sol.x[v], 1000), "pin:" + std::to_string(v));
    }
  }
  res.message = "rounding did not produce a PSD certificate";
  return res;
}

}  // namespace qcb
