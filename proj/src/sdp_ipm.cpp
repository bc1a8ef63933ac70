#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "qcbounds/conic.hpp"

namespace qcb {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr int kEigenCutoff = 300;

struct Cell {
  int r, c;
  double v;
};

// One PSD or diagonal block in the form F(y) = F0 + sum y_l F_l.
struct Block {
  bool diagonal = false;
  int side = 0;
  MatrixXd f0;  // side x side, or side x 1 for diagonal blocks
  std::vector<LmiEntry<double>> entries;  // variable entries, upper triangle
  // Generic Schur path: full-orientation cells per variable.
  std::vector<int> vars;
  std::vector<std::vector<Cell>> cells;  // parallel to vars
  // Orbit Schur path.
  bool orbit = false;
  int norb = 0;
  std::vector<int> cell_orbit;
  std::vector<int> rep_r, rep_c, otrans;
  VectorXd osize;
  MatrixXd coef;  // vars.size() x norb
};

Block make_block(const LmiBlock<double>& in) {
  Block b;
  b.diagonal = in.diagonal;
  b.side = in.side;
  b.f0 = in.diagonal ? MatrixXd::Zero(in.side, 1) : MatrixXd::Zero(in.side, in.side);
  std::map<int, std::vector<Cell>> per_var;
  for (const auto& e : in.entries) {
    if (e.var < 0) {
      if (in.diagonal) b.f0(e.row, 0) += e.coef;
      else {
        b.f0(e.row, e.col) += e.coef;
        if (e.row != e.col) b.f0(e.col, e.row) += e.coef;
      }
      continue;
    }
    b.entries.push_back(e);
    auto& cl = per_var[e.var];
    cl.push_back({e.row, e.col, e.coef});
    if (!in.diagonal && e.row != e.col) cl.push_back({e.col, e.row, e.coef});
  }
  for (auto& [v, cl] : per_var) {
    b.vars.push_back(v);
    b.cells.push_back(std::move(cl));
  }
  if (in.orbits && !in.diagonal) {
    b.orbit = true;
    const int s = in.side;
    // Compact the ids; hints may skip some.
    std::map<int, int> ids;
    for (int o : in.orbits->cell_orbit) {
      if (o < 0) throw std::invalid_argument("orbit hint: negative orbit id");
      ids.emplace(o, 0);
    }
    int next = 0;
    for (auto& [o, k] : ids) k = next++;
    b.cell_orbit.reserve(in.orbits->cell_orbit.size());
    for (int o : in.orbits->cell_orbit) b.cell_orbit.push_back(ids[o]);
    b.norb = next;
    b.rep_r.assign(b.norb, -1);
    b.rep_c.assign(b.norb, -1);
    b.osize = VectorXd::Zero(b.norb);
    for (int r = 0; r < s; ++r)
      for (int c = 0; c < s; ++c) {
        int o = b.cell_orbit[static_cast<std::size_t>(r) * s + c];
        if (o < 0) throw std::invalid_argument("orbit hint: negative orbit id");
        if (b.rep_r[o] < 0) {
          b.rep_r[o] = r;
          b.rep_c[o] = c;
        }
        b.osize[o] += 1;
      }
    b.otrans.resize(b.norb);
    for (int o = 0; o < b.norb; ++o) {
      if (b.rep_r[o] < 0) throw std::invalid_argument("orbit hint: empty orbit id");
      b.otrans[o] = b.cell_orbit[static_cast<std::size_t>(b.rep_c[o]) * s + b.rep_r[o]];
    }
    b.coef = MatrixXd::Zero(static_cast<Eigen::Index>(b.vars.size()), b.norb);
    MatrixXd total = MatrixXd::Zero(b.coef.rows(), b.norb);
    for (std::size_t k = 0; k < b.vars.size(); ++k)
      for (const auto& cl : b.cells[k]) {
        int o = b.cell_orbit[static_cast<std::size_t>(cl.r) * s + cl.c];
        total(static_cast<Eigen::Index>(k), o) += cl.v;
        if (cl.r == b.rep_r[o] && cl.c == b.rep_c[o]) b.coef(static_cast<Eigen::Index>(k), o) += cl.v;
      }
    for (Eigen::Index k = 0; k < b.coef.rows(); ++k)
      for (int o = 0; o < b.norb; ++o)
        if (std::abs(total(k, o) - b.coef(k, o) * b.osize[o]) > 1e-9 * (1 + std::abs(total(k, o))))
          throw std::invalid_argument("orbit hint: a coefficient matrix is not constant on an orbit");
  }
  return b;
}

// F(y) including F0.
MatrixXd value(const Block& b, const VectorXd& y) {
  MatrixXd m = b.f0;
  for (const auto& e : b.entries) {
    double v = e.coef * y[e.var];
    if (b.diagonal) m(e.row, 0) += v;
    else {
      m(e.row, e.col) += v;
      if (e.row != e.col) m(e.col, e.row) += v;
    }
  }
  return m;
}

// sum_l y_l F_l without F0.
MatrixXd linear_part(const Block& b, const VectorXd& y) {
  MatrixXd m = MatrixXd::Zero(b.f0.rows(), b.f0.cols());
  for (const auto& e : b.entries) {
    double v = e.coef * y[e.var];
    if (b.diagonal) m(e.row, 0) += v;
    else {
      m(e.row, e.col) += v;
      if (e.row != e.col) m(e.col, e.row) += v;
    }
  }
  return m;
}

// out_l += <F_l, G>
void adjoint(const Block& b, const MatrixXd& g, VectorXd& out) {
  for (const auto& e : b.entries) {
    if (b.diagonal) out[e.var] += e.coef * g(e.row, 0);
    else if (e.row == e.col) out[e.var] += e.coef * g(e.row, e.row);
    else out[e.var] += e.coef * (g(e.row, e.col) + g(e.col, e.row));
  }
}

// M_kl += tr(F_k X F_l S^-1)
void schur(const Block& b, const MatrixXd& x, const MatrixXd& sinv, MatrixXd& m) {
  const auto nv = b.vars.size();
  if (b.diagonal) {
    VectorXd w = x.col(0).cwiseProduct(sinv.col(0));
    for (std::size_t k = 0; k < nv; ++k)
      for (std::size_t l = k; l < nv; ++l) {
        double s = 0;
        // Diagonal cells are short; merge by row index.
        for (const auto& a : b.cells[k])
          for (const auto& c : b.cells[l])
            if (a.r == c.r) s += a.v * c.v * w[a.r];
        m(b.vars[k], b.vars[l]) += s;
        if (l != k) m(b.vars[l], b.vars[k]) += s;
      }
    return;
  }
  if (b.orbit) {
    const int s = b.side;
    MatrixXd w = MatrixXd::Zero(b.norb, b.norb);
    std::vector<double> acc(static_cast<std::size_t>(b.norb));
    for (int tau = 0; tau < b.norb; ++tau) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const int xr = b.rep_r[tau], yc = b.rep_c[tau];
      for (int r = 0; r < s; ++r) {
        const double a = x(xr, r);
        if (a == 0) continue;
        const int* co = &b.cell_orbit[static_cast<std::size_t>(r) * s];
        for (int c = 0; c < s; ++c) acc[co[c]] += a * sinv(c, yc);
      }
      for (int o = 0; o < b.norb; ++o) w(tau, o) = acc[o];
    }
    MatrixXd wt(b.norb, b.norb);
    for (int o = 0; o < b.norb; ++o) wt.row(o) = w.row(b.otrans[o]);
    MatrixXd local = b.coef * b.osize.asDiagonal() * wt * b.coef.transpose();
    for (std::size_t k = 0; k < nv; ++k)
      for (std::size_t l = 0; l < nv; ++l)
        m(b.vars[k], b.vars[l]) += local(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
    return;
  }
  for (std::size_t k = 0; k < nv; ++k)
    for (std::size_t l = k; l < nv; ++l) {
      double s = 0;
      for (const auto& a : b.cells[k])
        for (const auto& c : b.cells[l]) s += a.v * c.v * x(a.c, c.r) * sinv(c.c, a.r);
      m(b.vars[k], b.vars[l]) += s;
      if (l != k) m(b.vars[l], b.vars[k]) += s;
    }
}

double inner(const MatrixXd& a, const MatrixXd& b) { return a.cwiseProduct(b).sum(); }

double lanczos_min(const MatrixXd& w) {
  const Eigen::Index s = w.rows();
  const int k = static_cast<int>(std::min<Eigen::Index>(s, 60));
  MatrixXd q(s, k + 1);
  VectorXd alpha(k), beta(k + 1);
  VectorXd v = VectorXd::Ones(s) / std::sqrt(static_cast<double>(s));
  // Deterministic but not too symmetric start vector.
  for (Eigen::Index i = 0; i < s; ++i) v[i] += 1e-3 * std::sin(1.0 + static_cast<double>(i));
  v.normalize();
  q.col(0) = v;
  int steps = 0;
  for (int j = 0; j < k; ++j) {
    VectorXd z = w * q.col(j);
    alpha[j] = q.col(j).dot(z);
    z -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * z);
    z -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * z);
    beta[j + 1] = z.norm();
    steps = j + 1;
    if (beta[j + 1] < 1e-12) break;
    q.col(j + 1) = z / beta[j + 1];
  }
  MatrixXd t = MatrixXd::Zero(steps, steps);
  for (int j = 0; j < steps; ++j) {
    t(j, j) = alpha[j];
    if (j + 1 < steps) t(j, j + 1) = t(j + 1, j) = beta[j + 1];
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(t, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Largest a <= cap with x + a dx still positive definite (dense), scaled by frac.
double max_step(const Block& b, const MatrixXd& x, const MatrixXd& dx, double frac) {
  if (b.diagonal) {
    double a = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (dx(i, 0) < 0) a = std::min(a, -x(i, 0) / dx(i, 0));
    return frac * a;
  }
  Eigen::LLT<MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) return 0;
  MatrixXd w = llt.matrixL().solve(dx);
  w = llt.matrixL().solve(w.transpose()).transpose();
  w = 0.5 * (w + w.transpose());
  double lam;
  const bool exact = w.rows() <= kEigenCutoff;
  if (exact) lam = Eigen::SelfAdjointEigenSolver<MatrixXd>(w, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  else lam = lanczos_min(w);
  if (lam >= 0) return std::numeric_limits<double>::infinity();
  double a = frac * (-1.0 / lam);
  if (!exact) {
    // Lanczos overestimates the step; back off until the update factorizes.
    for (int tries = 0; tries < 40; ++tries) {
      MatrixXd trial = x + a * dx;
      Eigen::LLT<MatrixXd> t(trial);
      if (t.info() == Eigen::Success) break;
      a *= 0.8;
    }
  }
  return a;
}

double min_eig(const Block& b, const MatrixXd& m) {
  if (b.diagonal) return m.col(0).minCoeff();
  if (m.rows() <= kEigenCutoff)
    return Eigen::SelfAdjointEigenSolver<MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  return lanczos_min(m);
}

struct Prepared {
  int m = 0;
  std::vector<Block> blocks;
  int ineq_block = -1;  // index into blocks of the inequality block
  MatrixXd e;           // equality rows (scaled, independent)
  VectorXd f;
  VectorXd b;  // maximize b^T y
  double obj_const = 0;
  double obj_sign = 1;  // reported objective = obj_sign * b^T y + const
  bool inconsistent = false;
  std::string message;
};

// Drops rows/columns whose diagonal is identically zero, turning their
// off-diagonal cells into equalities.
void drop_zero_diagonals(ConicProgram<double>& p) {
  for (auto& blk : p.blocks) {
    if (blk.diagonal) continue;
    const int s = blk.side;
    std::vector<char> has_var(static_cast<std::size_t>(s), 0);
    std::vector<double> cdiag(static_cast<std::size_t>(s), 0.0);
    for (const auto& e : blk.entries)
      if (e.row == e.col) {
        if (e.var >= 0) has_var[e.row] = 1;
        else cdiag[e.row] += e.coef;
      }
    std::vector<char> drop(static_cast<std::size_t>(s), 0);
    int ndrop = 0;
    for (int r = 0; r < s; ++r)
      if (!has_var[r] && cdiag[r] == 0) {
        drop[r] = 1;
        ++ndrop;
      }
    if (ndrop == 0 || ndrop == s) continue;
    // Off-diagonal cells touching a dropped row must vanish.
    std::map<std::pair<int, int>, std::vector<Term<double>>> cells;
    std::map<std::pair<int, int>, double> consts;
    for (const auto& e : blk.entries)
      if (e.row != e.col && (drop[e.row] || drop[e.col])) {
        if (e.var >= 0) cells[{e.row, e.col}].push_back({e.var, e.coef});
        else consts[{e.row, e.col}] += e.coef;
      }
    std::map<std::vector<std::pair<int, double>>, bool> seen;
    for (auto& [cell, terms] : cells) {
      double c = consts.count(cell) ? consts[cell] : 0.0;
      auto merged = merge_terms(terms);
      if (merged.empty()) continue;
      // Normalize so duplicates collapse.
      double lead = merged.front().coef;
      std::vector<std::pair<int, double>> key;
      for (auto& t : merged) key.push_back({t.var, t.coef / lead});
      key.push_back({-1, c / lead});
      if (seen.count(key)) continue;
      seen[key] = true;
      p.add_eq(merged, -c, blk.label + ":zero-diagonal");
    }
    for (auto& [cell, c] : consts)
      if (!cells.count(cell) && c != 0) p.add_eq({}, 1.0, blk.label + ":zero-diagonal-conflict");
    std::vector<int> newidx(static_cast<std::size_t>(s), -1);
    int k = 0;
    for (int r = 0; r < s; ++r)
      if (!drop[r]) newidx[r] = k++;
    std::vector<LmiEntry<double>> kept;
    for (const auto& e : blk.entries)
      if (!drop[e.row] && !drop[e.col]) kept.push_back({newidx[e.row], newidx[e.col], e.var, e.coef});
    if (blk.orbits) {
      std::vector<int> co(static_cast<std::size_t>(k) * k);
      std::unordered_map<int, int> relabel;
      for (int r = 0; r < s; ++r) {
        if (drop[r]) continue;
        for (int c = 0; c < s; ++c) {
          if (drop[c]) continue;
          int o = blk.orbits->cell_orbit[static_cast<std::size_t>(r) * s + c];
          auto it = relabel.find(o);
          if (it == relabel.end()) it = relabel.emplace(o, static_cast<int>(relabel.size())).first;
          co[static_cast<std::size_t>(newidx[r]) * k + newidx[c]] = it->second;
        }
      }
      blk.orbits->cell_orbit = std::move(co);
    }
    blk.entries = std::move(kept);
    blk.side = k;
  }
}

Prepared prepare(const ConicProgram<double>& in) {
  ConicProgram<double> p = in;
  drop_zero_diagonals(p);
  Prepared pr;
  pr.m = p.num_vars;
  for (const auto& b : p.blocks) pr.blocks.push_back(make_block(b));
  if (!p.inequalities.empty()) {
    LmiBlock<double> d;
    d.diagonal = true;
    d.side = static_cast<int>(p.inequalities.size());
    for (int r = 0; r < d.side; ++r) {
      for (const auto& t : p.inequalities[r].terms) d.entries.push_back({r, r, t.var, t.coef});
      if (p.inequalities[r].rhs != 0) d.entries.push_back({r, r, -1, -p.inequalities[r].rhs});
    }
    pr.ineq_block = static_cast<int>(pr.blocks.size());
    pr.blocks.push_back(make_block(d));
  }
  // Equalities: scale rows, then keep an independent subset.
  const int neq = static_cast<int>(p.equalities.size());
  MatrixXd e = MatrixXd::Zero(neq, pr.m);
  VectorXd f(neq);
  for (int r = 0; r < neq; ++r) {
    for (const auto& t : p.equalities[r].terms) e(r, t.var) += t.coef;
    f[r] = p.equalities[r].rhs;
    double sc = e.row(r).cwiseAbs().maxCoeff();
    if (sc > 0) {
      e.row(r) /= sc;
      f[r] /= sc;
    } else if (std::abs(f[r]) > 1e-12) {
      pr.inconsistent = true;
      pr.message = "equality row '" + p.equalities[r].label + "' reads 0 = nonzero";
    }
  }
  if (neq > 0 && pr.m > 0) {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(e.transpose());
    qr.setThreshold(1e-10);
    const auto rank = qr.rank();
    std::vector<int> keep;
    for (Eigen::Index i = 0; i < rank; ++i) keep.push_back(qr.colsPermutation().indices()[i]);
    std::sort(keep.begin(), keep.end());
    MatrixXd ek(keep.size(), pr.m);
    VectorXd fk(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      ek.row(static_cast<Eigen::Index>(i)) = e.row(keep[i]);
      fk[static_cast<Eigen::Index>(i)] = f[keep[i]];
    }
    // Consistency of the dropped rows.
    if (rank < neq) {
      VectorXd ysol = ek.rows() ? VectorXd(ek.completeOrthogonalDecomposition().solve(fk)) : VectorXd::Zero(pr.m);
      VectorXd res = e * ysol - f;
      if (res.cwiseAbs().maxCoeff() > 1e-7) {
        pr.inconsistent = true;
        pr.message = "linear equalities are inconsistent";
      }
    }
    pr.e = ek;
    pr.f = fk;
  } else {
    pr.e = MatrixXd::Zero(0, pr.m);
    pr.f = VectorXd::Zero(0);
  }
  pr.b = VectorXd::Zero(pr.m);
  if (p.sense != Sense::feasibility) {
    pr.obj_sign = p.sense == Sense::maximize ? 1.0 : -1.0;
    for (const auto& t : p.objective) pr.b[t.var] += pr.obj_sign * t.coef;
  }
  pr.obj_const = p.objective_constant;
  return pr;
}

SolveReport run_ipm(const Prepared& pr, const SdpOptions& opt) {
  SolveReport rep;
  const int m = pr.m;
  const Eigen::Index p = pr.e.rows();
  const int nb = static_cast<int>(pr.blocks.size());
  std::vector<MatrixXd> x(nb), s(nb);
  double nrm_c = 0;
  double big_a = 0;
  {
    VectorXd colnorm = VectorXd::Zero(m);
    for (const auto& b : pr.blocks) {
      nrm_c += b.f0.squaredNorm();
      for (const auto& e : b.entries) colnorm[e.var] += e.coef * e.coef * (e.row == e.col ? 1 : 2);
    }
    nrm_c = std::sqrt(nrm_c);
    for (int i = 0; i < m; ++i) big_a = std::max(big_a, std::sqrt(colnorm[i]));
  }
  double n_total = 0;
  for (const auto& b : pr.blocks) n_total += b.side;
  const double nrm_b = pr.b.norm();
  const double nrm_f = pr.f.size() ? pr.f.norm() : 0.0;
  double xi = std::max({10.0, std::sqrt(n_total), n_total * (1 + pr.b.cwiseAbs().maxCoeff()) / (1 + big_a)});
  double eta = std::max({10.0, std::sqrt(n_total), nrm_c, big_a});
  for (int j = 0; j < nb; ++j) {
    const auto& b = pr.blocks[j];
    if (b.diagonal) {
      x[j] = MatrixXd::Constant(b.side, 1, xi);
      s[j] = MatrixXd::Constant(b.side, 1, eta);
    } else {
      x[j] = xi * MatrixXd::Identity(b.side, b.side);
      s[j] = eta * MatrixXd::Identity(b.side, b.side);
    }
  }
  VectorXd y = VectorXd::Zero(m);
  VectorXd u = VectorXd::Zero(p);
  const double frac = 0.95;
  double last_dobj = 0;
  int stalled = 0;
  // Best iterate by worst residual; near the end of a run the Schur system can
  // lose accuracy and later iterates drift away from it.
  struct Snapshot {
    double err = std::numeric_limits<double>::infinity();
    double relp = 0, reld = 0, rele = 0, gap = 0;
    int it = 0;
    std::vector<MatrixXd> x, s;
    VectorXd y, u;
  } best;
  auto restore_best = [&](const char* why) {
    x = best.x;
    s = best.s;
    y = best.y;
    u = best.u;
    rep.status = Status::optimal;
    rep.iterations = best.it;
    rep.primal_residual = std::max(best.reld, best.rele);
    rep.dual_residual = best.relp;
    rep.gap = best.gap;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s; kept iterate %d with relp %.2e gap %.2e", why, best.it, best.relp, best.gap);
    rep.message = buf;
  };

  for (int it = 0; it <= opt.max_iter; ++it) {
    rep.iterations = it;
    // Residuals.
    std::vector<MatrixXd> sinv(nb), rd(nb);
    VectorXd rp = pr.b;
    if (p) rp += pr.e.transpose() * u;
    double rd_norm = 0, mu = 0, pobj = 0;
    for (int j = 0; j < nb; ++j) {
      const auto& b = pr.blocks[j];
      adjoint(b, x[j], rp);
      rd[j] = value(b, y) - s[j];
      rd_norm += rd[j].squaredNorm();
      mu += b.diagonal ? x[j].col(0).dot(s[j].col(0)) : inner(x[j], s[j]);
      pobj += b.diagonal ? b.f0.col(0).dot(x[j].col(0)) : inner(b.f0, x[j]);
      if (b.diagonal) sinv[j] = s[j].cwiseInverse();
      else {
        Eigen::LLT<MatrixXd> llt(s[j]);
        sinv[j] = llt.solve(MatrixXd::Identity(b.side, b.side));
      }
    }
    rd_norm = std::sqrt(rd_norm);
    mu /= n_total;
    VectorXd re = p ? VectorXd(pr.f - pr.e * y) : VectorXd::Zero(0);
    const double dobj = pr.b.dot(y);
    pobj -= p ? pr.f.dot(u) : 0.0;  // <F0, X> - f^T u bounds max b^T y from above
    const double relp = rp.norm() / (1 + nrm_b);
    const double reld = rd_norm / (1 + nrm_c);
    const double rele = p ? re.norm() / (1 + nrm_f) : 0.0;
    const double gap = std::abs(pobj - dobj) / (1 + std::abs(pobj) + std::abs(dobj));
    rep.primal_residual = std::max(reld, rele);
    rep.dual_residual = relp;
    rep.gap = gap;
    if (opt.verbose)
      std::fprintf(stderr, "it %3d  dobj % .9e  pobj % .9e  relp %.2e reld %.2e rele %.2e gap %.2e mu %.2e\n", it,
                   dobj, pobj, relp, reld, rele, gap, mu);
    if (!std::isfinite(dobj) || !std::isfinite(mu)) {
      rep.status = Status::error;
      rep.message = "numerical breakdown";
      break;
    }
    if (std::max({relp, reld, rele}) <= opt.tol && gap <= opt.tol) {
      rep.status = Status::optimal;
      break;
    }
    const double err = std::max({relp, reld, rele, gap});
    const bool near = best.err <= 100 * opt.tol;
    if (near && err > 100 * best.err) {
      restore_best("residuals grew");
      break;
    }
    if (err < best.err) best = {err, relp, reld, rele, gap, it, x, s, y, u};
    // On nearly infeasible programs the X side can stop improving while y is
    // feasible and b^T y has settled; accept that point at reduced accuracy.
    const bool settled = std::abs(dobj - last_dobj) <= 1e-10 * (1 + std::abs(dobj));
    stalled = settled && reld <= opt.tol && rele <= opt.tol && relp <= std::sqrt(opt.tol) && gap <= 100 * opt.tol
                  ? stalled + 1
                  : 0;
    last_dobj = dobj;
    if (stalled >= 8) {
      rep.status = Status::optimal;
      char buf[120];
      std::snprintf(buf, sizeof buf, "objective settled with relp %.2e gap %.2e", relp, gap);
      rep.message = buf;
      break;
    }
    if (std::abs(dobj) > 1e12 && reld < 1e-6 && rele < 1e-6) {
      rep.status = Status::unbounded;
      rep.message = "objective diverges";
      break;
    }
    if (it == opt.max_iter && near) {
      restore_best("max iterations");
      break;
    }
    if (it == opt.max_iter) {
      rep.status = Status::error;
      char buf[160];
      std::snprintf(buf, sizeof buf, "max iterations: relp %.2e reld %.2e rele %.2e gap %.2e", relp, reld, rele, gap);
      rep.message = buf;
      break;
    }
    // Schur complement.
    MatrixXd mm = MatrixXd::Zero(m, m);
    for (int j = 0; j < nb; ++j) schur(pr.blocks[j], x[j], sinv[j], mm);
    double reg = 1e-14 * (1 + mm.diagonal().cwiseAbs().maxCoeff());
    for (int i = 0; i < m; ++i) mm(i, i) += reg;
    MatrixXd kkt = MatrixXd::Zero(m + p, m + p);
    kkt.topLeftCorner(m, m) = mm;
    if (p) {
      kkt.topRightCorner(m, p) = pr.e.transpose();
      kkt.bottomLeftCorner(p, m) = pr.e;
    }
    Eigen::PartialPivLU<MatrixXd> lu(kkt);

    // Builds the direction for a given complementarity term G_j (dense: target
    // minus X, plus correction; diagonal: elementwise).
    auto direction = [&](const std::vector<MatrixXd>& g, VectorXd& dy, std::vector<MatrixXd>& dx,
                         std::vector<MatrixXd>& ds) {
      VectorXd rhs = rp;
      std::vector<MatrixXd> h(nb);
      for (int j = 0; j < nb; ++j) {
        const auto& b = pr.blocks[j];
        if (b.diagonal) h[j] = g[j] - x[j].cwiseProduct(rd[j]).cwiseProduct(sinv[j]);
        else h[j] = g[j] - x[j] * rd[j] * sinv[j];
        adjoint(b, h[j], rhs);
      }
      VectorXd full(m + p);
      full.head(m) = rhs;
      if (p) full.tail(p) = re;
      VectorXd sol = lu.solve(full);
      for (int refine = 0; refine < 2; ++refine) sol += lu.solve(VectorXd(full - kkt * sol));
      dy = sol.head(m);
      for (int j = 0; j < nb; ++j) {
        const auto& b = pr.blocks[j];
        ds[j] = rd[j] + linear_part(b, dy);
        if (b.diagonal) dx[j] = g[j] - x[j].cwiseProduct(ds[j]).cwiseProduct(sinv[j]);
        else {
          dx[j] = g[j] - x[j] * ds[j] * sinv[j];
          dx[j] = 0.5 * (dx[j] + dx[j].transpose()).eval();
        }
      }
      return VectorXd(p ? VectorXd(-sol.tail(p)) : VectorXd::Zero(0));
    };
    auto steps = [&](const std::vector<MatrixXd>& dx, const std::vector<MatrixXd>& ds, double& ap, double& ad) {
      ap = 1.0;
      ad = 1.0;
      for (int j = 0; j < nb; ++j) {
        ap = std::min(ap, max_step(pr.blocks[j], x[j], dx[j], frac));
        ad = std::min(ad, max_step(pr.blocks[j], s[j], ds[j], frac));
      }
    };

    // Predictor.
    std::vector<MatrixXd> g(nb), dx(nb), ds(nb);
    for (int j = 0; j < nb; ++j) g[j] = -x[j];
    VectorXd dy;
    VectorXd du = direction(g, dy, dx, ds);
    double ap, ad;
    steps(dx, ds, ap, ad);
    double mu_aff = 0;
    for (int j = 0; j < nb; ++j) {
      MatrixXd xa = x[j] + ap * dx[j];
      MatrixXd sa = s[j] + ad * ds[j];
      mu_aff += pr.blocks[j].diagonal ? xa.col(0).dot(sa.col(0)) : inner(xa, sa);
    }
    mu_aff /= n_total;
    double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);
    // Corrector.
    for (int j = 0; j < nb; ++j) {
      const auto& b = pr.blocks[j];
      if (b.diagonal)
        g[j] = sigma * mu * sinv[j] - x[j] - dx[j].cwiseProduct(ds[j]).cwiseProduct(sinv[j]);
      else g[j] = sigma * mu * sinv[j] - x[j] - dx[j] * ds[j] * sinv[j];
    }
    du = direction(g, dy, dx, ds);
    steps(dx, ds, ap, ad);
    for (int j = 0; j < nb; ++j) {
      x[j] += ap * dx[j];
      s[j] += ad * ds[j];
      if (!pr.blocks[j].diagonal) {
        x[j] = 0.5 * (x[j] + x[j].transpose()).eval();
        s[j] = 0.5 * (s[j] + s[j].transpose()).eval();
      }
    }
    y += ad * dy;
    if (p) u += ap * du;
  }
  rep.x.assign(y.data(), y.data() + m);
  rep.objective = pr.obj_sign * pr.b.dot(y) + pr.obj_const;
  for (int j = 0; j < nb; ++j) {
    if (j == pr.ineq_block) rep.ineq_duals.assign(x[j].data(), x[j].data() + x[j].rows());
    else rep.block_duals.push_back(x[j]);
  }
  rep.eq_duals.assign(u.data(), u.data() + u.size());
  double lam = std::numeric_limits<double>::infinity();
  for (int j = 0; j < nb; ++j) lam = std::min(lam, min_eig(pr.blocks[j], value(pr.blocks[j], y)));
  rep.min_eigenvalue = nb ? lam : 0.0;
  return rep;
}

}  // namespace

SolveReport solve_sdp(const ConicProgram<double>& p, const SdpOptions& opt) {
  validate(p);
  if (p.sense != Sense::feasibility) {
    Prepared pr = prepare(p);
    if (pr.inconsistent) {
      SolveReport rep;
      rep.status = Status::infeasible_numeric;
      rep.message = pr.message;
      return rep;
    }
    return run_ipm(pr, opt);
  }
  // Feasibility: minimize s subject to F(y) + s I >= 0, rows + s >= 0, s >= -1.
  ConicProgram<double> q = p;
  const int sv = q.add_var("shift");
  for (auto& b : q.blocks)
    for (int r = 0; r < b.side; ++r) b.entries.push_back({r, r, sv, 1.0});
  for (auto& r : q.inequalities) r.terms.push_back({sv, 1.0});
  q.add_ge({{sv, 1.0}}, -1.0, "shift lower bound");
  q.sense = Sense::minimize;
  q.objective = {{sv, 1.0}};
  q.objective_constant = 0;
  // Rows of the original blocks that are identically zero on the diagonal are
  // dropped before the shift is added.
  ConicProgram<double> base = p;
  drop_zero_diagonals(base);
  q.blocks = base.blocks;
  q.equalities = base.equalities;
  for (auto& b : q.blocks)
    for (int r = 0; r < b.side; ++r) b.entries.push_back({r, r, sv, 1.0});

  SolveReport rep;
  SdpOptions o = opt;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Prepared pr = prepare(q);
    if (pr.inconsistent) {
      rep.status = Status::infeasible_numeric;
      rep.message = pr.message;
      return rep;
    }
    rep = run_ipm(pr, o);
    if (rep.status == Status::error && rep.x.empty()) return rep;
    rep.infeasibility = rep.x.empty() ? 0.0 : rep.x[sv];
    bool converged = rep.status == Status::optimal;
    if (converged && rep.infeasibility <= opt.feas_tol) {
      rep.status = Status::feasible;
      break;
    }
    if (converged && rep.infeasibility >= 100 * opt.feas_tol) {
      rep.status = Status::infeasible_numeric;
      break;
    }
    if (attempt == 0) {
      o.tol = opt.tol * 1e-2;
      o.max_iter = opt.max_iter + 100;
      continue;
    }
    if (rep.status == Status::error && rep.infeasibility <= opt.feas_tol) {
      rep.status = Status::feasible;
      rep.message = "accepted at reduced accuracy: " + rep.message;
    } else if (rep.status != Status::error) {
      rep.status = rep.infeasibility <= 10 * opt.feas_tol ? Status::feasible : Status::infeasible_numeric;
    }
  }
  rep.x.resize(static_cast<std::size_t>(p.num_vars));
  rep.objective = rep.infeasibility;
  return rep;
}

}  // namespace qcb
