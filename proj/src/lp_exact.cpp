#include <stdexcept>

#include "qcbounds/conic.hpp"

namespace qcb {

namespace {

// Dense tableau for min c^T z, A z = b, z >= 0, b >= 0.
class Simplex {
 public:
  Simplex(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
      : rows_(static_cast<int>(a.size())), a_(std::move(a)), b_(std::move(b)) {
    cols_ = rows_ ? static_cast<int>(a_[0].size()) : 0;
  }

  // Phase I. Returns false when infeasible; y then holds the Farkas multipliers
  // (y^T A <= 0 columnwise, y^T b > 0) for the standardized rows.
  bool phase_one(std::vector<Rational>& y) {
    // Artificial columns cols_ .. cols_+rows_-1.
    for (int r = 0; r < rows_; ++r) {
      a_[r].resize(static_cast<std::size_t>(cols_ + rows_), Rational(0));
      a_[r][cols_ + r] = 1;
    }
    basis_.resize(static_cast<std::size_t>(rows_));
    for (int r = 0; r < rows_; ++r) basis_[r] = cols_ + r;
    std::vector<Rational> cost(static_cast<std::size_t>(cols_ + rows_), Rational(0));
    for (int r = 0; r < rows_; ++r) cost[cols_ + r] = 1;
    total_ = cols_ + rows_;
    run(cost, total_);
    Rational obj = 0;
    for (int r = 0; r < rows_; ++r) obj += cost[basis_[r]] * b_[r];
    y = multipliers(cost);
    return obj == 0;
  }

  // Removes artificials from the basis and drops redundant rows.
  void cleanup() {
    for (int r = 0; r < rows_; ++r) {
      if (basis_[r] < cols_) continue;
      int enter = -1;
      for (int c = 0; c < cols_; ++c)
        if (a_[r][c] != 0) { enter = c; break; }
      if (enter >= 0) pivot(r, enter);
    }
    for (int r = rows_ - 1; r >= 0; --r) {
      if (basis_[r] < cols_) continue;
      a_.erase(a_.begin() + r);
      b_.erase(b_.begin() + r);
      basis_.erase(basis_.begin() + r);
      --rows_;
    }
    total_ = cols_;
  }

  // Phase II on the structural columns. Returns false when unbounded.
  bool phase_two(const std::vector<Rational>& cost) { return run(cost, cols_); }

  std::vector<Rational> point() const {
    std::vector<Rational> z(static_cast<std::size_t>(cols_), Rational(0));
    for (int r = 0; r < rows_; ++r)
      if (basis_[r] < cols_) z[basis_[r]] = b_[r];
    return z;
  }

 private:
  std::vector<Rational> multipliers(const std::vector<Rational>& cost) const {
    // y_r = 1 - reduced cost of artificial r; from the current tableau the
    // reduced cost of column j is c_j - sum_r c_B(r) a[r][j].
    std::vector<Rational> y(static_cast<std::size_t>(rows_));
    for (int r = 0; r < rows_; ++r) {
      Rational rc = cost[cols_ + r];
      for (int i = 0; i < rows_; ++i) rc -= cost[basis_[i]] * a_[i][cols_ + r];
      y[r] = cost[cols_ + r] - rc;
    }
    return y;
  }

  bool run(const std::vector<Rational>& cost, int ncols) {
    while (true) {
      // Bland: smallest column index with negative reduced cost.
      int enter = -1;
      for (int c = 0; c < ncols; ++c) {
        if (is_basic(c)) continue;
        Rational rc = cost[c];
        for (int r = 0; r < rows_; ++r)
          if (a_[r][c] != 0) rc -= cost[basis_[r]] * a_[r][c];
        if (rc < 0) { enter = c; break; }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (int r = 0; r < rows_; ++r) {
        if (a_[r][enter] <= 0) continue;
        Rational ratio = b_[r] / a_[r][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  bool is_basic(int c) const {
    for (int b : basis_)
      if (b == c) return true;
    return false;
  }

  void pivot(int r, int c) {
    const Rational piv = a_[r][c];
    for (int j = 0; j < total_; ++j) a_[r][j] /= piv;
    b_[r] /= piv;
    for (int i = 0; i < rows_; ++i) {
      if (i == r || a_[i][c] == 0) continue;
      const Rational f = a_[i][c];
      for (int j = 0; j < total_; ++j)
        if (a_[r][j] != 0) a_[i][j] -= f * a_[r][j];
      b_[i] -= f * b_[r];
    }
    basis_[r] = c;
  }

  int rows_;
  int cols_ = 0;
  int total_ = 0;
  std::vector<std::vector<Rational>> a_;
  std::vector<Rational> b_;
  std::vector<int> basis_;
};

}  // namespace

SolveReport solve_lp_exact(const ConicProgram<Rational>& p) {
  validate(p);
  if (!p.blocks.empty()) throw std::invalid_argument("solve_lp_exact: PSD blocks are not supported");
  SolveReport rep;
  const int nv = p.num_vars;
  const int neq = static_cast<int>(p.equalities.size());
  const int nin = static_cast<int>(p.inequalities.size());
  // Columns: x+ (nv), x- (nv), one surplus per inequality.
  const int ncols = 2 * nv + nin;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  std::vector<int> flip;
  auto add_row = [&](const std::vector<Term<Rational>>& terms, const Rational& rhs, int surplus) {
    std::vector<Rational> row(static_cast<std::size_t>(ncols), Rational(0));
    for (const auto& t : terms) {
      row[t.var] += t.coef;
      row[nv + t.var] -= t.coef;
    }
    if (surplus >= 0) row[2 * nv + surplus] = -1;
    int s = rhs < 0 ? -1 : 1;
    if (s < 0)
      for (auto& v : row) v = -v;
    a.push_back(std::move(row));
    b.push_back(s < 0 ? Rational(-rhs) : rhs);
    flip.push_back(s);
  };
  for (const auto& r : p.equalities) add_row(r.terms, r.rhs, -1);
  for (int i = 0; i < nin; ++i) add_row(p.inequalities[i].terms, p.inequalities[i].rhs, i);

  if (a.empty()) {
    // No constraints: any point is feasible; the objective decides boundedness.
    rep.exact_x.assign(static_cast<std::size_t>(nv), Rational(0));
    if (p.sense != Sense::feasibility && !p.objective.empty()) {
      rep.status = Status::unbounded;
      return rep;
    }
    rep.status = p.sense == Sense::feasibility ? Status::feasible : Status::optimal;
    rep.exact_objective = p.objective_constant;
    rep.objective = rep.exact_objective.get_d();
    rep.x.assign(static_cast<std::size_t>(nv), 0.0);
    return rep;
  }

  Simplex sx(a, b);
  std::vector<Rational> y;
  if (!sx.phase_one(y)) {
    FarkasRay ray;
    for (int r = 0; r < neq; ++r) ray.eq.push_back(flip[r] * y[r]);
    for (int i = 0; i < nin; ++i) ray.ineq.push_back(flip[neq + i] * y[neq + i]);
    if (!verify_farkas(p, ray)) {
      rep.status = Status::error;
      rep.message = "phase one failed but the Farkas ray did not verify";
      return rep;
    }
    rep.status = Status::infeasible_certified;
    rep.farkas = std::move(ray);
    rep.message = "exact Farkas certificate";
    return rep;
  }
  sx.cleanup();
  std::vector<Rational> cost(static_cast<std::size_t>(ncols), Rational(0));
  if (p.sense != Sense::feasibility) {
    const int sgn = p.sense == Sense::maximize ? -1 : 1;
    for (const auto& t : p.objective) {
      cost[t.var] += sgn * t.coef;
      cost[nv + t.var] -= sgn * t.coef;
    }
    if (!sx.phase_two(cost)) {
      rep.status = Status::unbounded;
      return rep;
    }
  }
  std::vector<Rational> z = sx.point();
  rep.exact_x.resize(static_cast<std::size_t>(nv));
  rep.x.resize(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) {
    rep.exact_x[v] = z[v] - z[nv + v];
    rep.x[v] = rep.exact_x[v].get_d();
  }
  rep.exact_objective = evaluate(p.objective, rep.exact_x, p.objective_constant);
  rep.objective = rep.exact_objective.get_d();
  rep.status = p.sense == Sense::feasibility ? Status::feasible : Status::optimal;
  return rep;
}

}  // namespace qcb
