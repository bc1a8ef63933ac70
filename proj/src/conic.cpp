#include "qcbounds/conic.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qcb {

template <class T>
std::vector<Term<T>> merge_terms(std::vector<Term<T>> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term<T>& a, const Term<T>& b) { return a.var < b.var; });
  std::vector<Term<T>> out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().var == t.var) out.back().coef += t.coef;
    else out.push_back(std::move(t));
  }
  std::erase_if(out, [](const Term<T>& t) { return t.coef == 0; });
  return out;
}

template std::vector<Term<double>> merge_terms(std::vector<Term<double>>);
template std::vector<Term<Rational>> merge_terms(std::vector<Term<Rational>>);

namespace {

template <class T>
void check_row(const std::vector<Term<T>>& terms, int num_vars, const std::string& what) {
  std::vector<int> seen;
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= num_vars) throw std::invalid_argument(what + ": undeclared variable");
    seen.push_back(t.var);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw std::invalid_argument(what + ": repeated variable");
}

}  // namespace

template <class T>
void validate(const ConicProgram<T>& p) {
  for (const auto& r : p.equalities) check_row(r.terms, p.num_vars, "equality " + r.label);
  for (const auto& r : p.inequalities) check_row(r.terms, p.num_vars, "inequality " + r.label);
  check_row(p.objective, p.num_vars, "objective");
  for (const auto& b : p.blocks) {
    if (b.side < 1) throw std::invalid_argument("block " + b.label + ": side must be positive");
    std::map<std::pair<int, int>, std::vector<int>> cells;
    for (const auto& e : b.entries) {
      if (e.row < 0 || e.col < e.row || e.col >= b.side)
        throw std::invalid_argument("block " + b.label + ": entry outside the upper triangle");
      if (b.diagonal && e.row != e.col) throw std::invalid_argument("block " + b.label + ": off-diagonal entry");
      if (e.var >= p.num_vars) throw std::invalid_argument("block " + b.label + ": undeclared variable");
      cells[{e.row, e.col}].push_back(e.var);
    }
    for (auto& [cell, vars] : cells) {
      std::sort(vars.begin(), vars.end());
      if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
        throw std::invalid_argument("block " + b.label + ": repeated variable in a cell");
    }
    if (b.orbits && static_cast<long>(b.orbits->cell_orbit.size()) != static_cast<long>(b.side) * b.side)
      throw std::invalid_argument("block " + b.label + ": orbit hint has the wrong size");
  }
}

template void validate(const ConicProgram<double>&);
template void validate(const ConicProgram<Rational>&);

namespace {

std::vector<Term<double>> terms_to_float(const std::vector<Term<Rational>>& t) {
  std::vector<Term<double>> out;
  out.reserve(t.size());
  for (const auto& x : t) out.push_back({x.var, x.coef.get_d()});
  return out;
}

}  // namespace

ConicProgram<double> to_float(const ConicProgram<Rational>& p) {
  ConicProgram<double> q;
  q.num_vars = p.num_vars;
  q.var_names = p.var_names;
  for (const auto& r : p.equalities) q.equalities.push_back({terms_to_float(r.terms), r.rhs.get_d(), r.label});
  for (const auto& r : p.inequalities) q.inequalities.push_back({terms_to_float(r.terms), r.rhs.get_d(), r.label});
  for (const auto& b : p.blocks) {
    LmiBlock<double> fb;
    fb.side = b.side;
    fb.diagonal = b.diagonal;
    fb.orbits = b.orbits;
    fb.label = b.label;
    fb.entries.reserve(b.entries.size());
    for (const auto& e : b.entries) fb.entries.push_back({e.row, e.col, e.var, e.coef.get_d()});
    q.blocks.push_back(std::move(fb));
  }
  q.sense = p.sense;
  q.objective = terms_to_float(p.objective);
  q.objective_constant = p.objective_constant.get_d();
  return q;
}

double evaluate(const std::vector<Term<double>>& terms, const std::vector<double>& x, double constant) {
  double s = constant;
  for (const auto& t : terms) s += t.coef * x.at(t.var);
  return s;
}

Rational evaluate(const std::vector<Term<Rational>>& terms, const std::vector<Rational>& x,
                  const Rational& constant) {
  Rational s = constant;
  for (const auto& t : terms) s += t.coef * x.at(t.var);
  return s;
}

Eigen::MatrixXd block_value(const LmiBlock<double>& b, const std::vector<double>& x) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(b.side, b.side);
  for (const auto& e : b.entries) {
    double v = e.var < 0 ? e.coef : e.coef * x.at(e.var);
    m(e.row, e.col) += v;
    if (e.row != e.col) m(e.col, e.row) += v;
  }
  return m;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::feasible: return "feasible";
    case Status::infeasible_certified: return "infeasible_certified";
    case Status::infeasible_numeric: return "infeasible_numeric";
    case Status::unbounded: return "unbounded";
    case Status::error: return "error";
  }
  return "error";
}

bool verify_farkas(const ConicProgram<Rational>& p, const FarkasRay& ray) {
  if (ray.eq.size() != p.equalities.size() || ray.ineq.size() != p.inequalities.size()) return false;
  std::vector<Rational> combo(static_cast<std::size_t>(p.num_vars), Rational(0));
  Rational rhs = 0;
  for (std::size_t r = 0; r < p.equalities.size(); ++r) {
    for (const auto& t : p.equalities[r].terms) combo[t.var] += ray.eq[r] * t.coef;
    rhs += ray.eq[r] * p.equalities[r].rhs;
  }
  for (std::size_t r = 0; r < p.inequalities.size(); ++r) {
    if (ray.ineq[r] < 0) return false;
    for (const auto& t : p.inequalities[r].terms) combo[t.var] += ray.ineq[r] * t.coef;
    rhs += ray.ineq[r] * p.inequalities[r].rhs;
  }
  for (const auto& c : combo)
    if (c != 0) return false;
  return rhs > 0;
}

}  // namespace qcb
