#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "qcbounds/conic.hpp"

namespace qcb {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// SDPA solves  min c^T x  s.t.  sum_i x_i F_i - F_0 >= 0.  Our blocks read
// F0 + sum_l y_l F_l >= 0, so the SDPA constant matrix is -F0.
std::string export_sdpa(const ConicProgram<double>& p) {
  validate(p);
  const int m = p.num_vars;
  std::vector<int> sizes;
  for (const auto& b : p.blocks) sizes.push_back(b.diagonal ? -b.side : b.side);
  const int lin_rows = static_cast<int>(p.inequalities.size() + 2 * p.equalities.size());
  if (lin_rows > 0) sizes.push_back(-lin_rows);

  // (matno, block, i, j) -> value, 1-based with i <= j.
  std::map<std::tuple<int, int, int, int>, double> cells;
  auto put = [&](int var, int blk, int i, int j, double v) {
    if (v == 0) return;
    cells[{var < 0 ? 0 : var + 1, blk + 1, i + 1, j + 1}] += var < 0 ? -v : v;
  };
  for (int bi = 0; bi < static_cast<int>(p.blocks.size()); ++bi)
    for (const auto& e : p.blocks[bi].entries) put(e.var, bi, e.row, e.col, e.coef);
  if (lin_rows > 0) {
    const int bi = static_cast<int>(p.blocks.size());
    int r = 0;
    for (const auto& row : p.inequalities) {
      for (const auto& t : row.terms) put(t.var, bi, r, r, t.coef);
      put(-1, bi, r, r, -row.rhs);
      ++r;
    }
    for (const auto& row : p.equalities) {
      for (const auto& t : row.terms) put(t.var, bi, r, r, t.coef);
      put(-1, bi, r, r, -row.rhs);
      ++r;
      for (const auto& t : row.terms) put(t.var, bi, r, r, -t.coef);
      put(-1, bi, r, r, row.rhs);
      ++r;
    }
  }

  std::vector<double> c(static_cast<std::size_t>(m), 0.0);
  if (p.sense != Sense::feasibility) {
    const double s = p.sense == Sense::maximize ? -1.0 : 1.0;
    for (const auto& t : p.objective) c[t.var] += s * t.coef;
  }

  std::ostringstream out;
  out << m << "\n" << sizes.size() << "\n";
  for (std::size_t i = 0; i < sizes.size(); ++i) out << (i ? " " : "") << sizes[i];
  out << "\n";
  for (int i = 0; i < m; ++i) out << (i ? " " : "") << fmt(c[i]);
  out << "\n";
  for (const auto& [key, v] : cells) {
    if (v == 0) continue;
    auto [mat, blk, i, j] = key;
    out << mat << " " << blk << " " << i << " " << j << " " << fmt(v) << "\n";
  }
  return out.str();
}

ConicProgram<double> parse_sdpa(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  std::vector<int> token_line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;
    for (char& ch : line)
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      tokens.push_back(tok);
      token_line.push_back(lineno);
    }
  }
  std::size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= tokens.size()) throw std::invalid_argument("sdpa: unexpected end of input");
    return tokens[pos++];
  };
  auto as_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("sdpa: line " + std::to_string(token_line[pos - 1]) +
                                                      ": expected an integer, got '" + s + "'");
    return v;
  };
  auto as_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("sdpa: line " + std::to_string(token_line[pos - 1]) +
                                                      ": expected a number, got '" + s + "'");
    return v;
  };

  ConicProgram<double> p;
  const int m = as_int(next());
  const int nblocks = as_int(next());
  if (m < 0 || nblocks < 1) throw std::invalid_argument("sdpa: bad header");
  for (int i = 0; i < m; ++i) p.add_var("x" + std::to_string(i + 1));
  for (int b = 0; b < nblocks; ++b) {
    int s = as_int(next());
    if (s == 0) throw std::invalid_argument("sdpa: zero block size");
    LmiBlock<double> blk;
    blk.side = std::abs(s);
    blk.diagonal = s < 0;
    blk.label = "block" + std::to_string(b + 1);
    p.blocks.push_back(std::move(blk));
  }
  p.sense = Sense::minimize;
  for (int i = 0; i < m; ++i) {
    double c = as_double(next());
    if (c != 0) p.objective.push_back({i, c});
  }
  std::map<std::tuple<int, int, int, int>, double> cells;
  while (pos < tokens.size()) {
    int mat = as_int(next());
    int blk = as_int(next());
    int i = as_int(next());
    int j = as_int(next());
    double v = as_double(next());
    if (mat < 0 || mat > m || blk < 1 || blk > nblocks) throw std::invalid_argument("sdpa: entry index out of range");
    auto& b = p.blocks[blk - 1];
    if (i > j) std::swap(i, j);
    if (i < 1 || j > b.side) throw std::invalid_argument("sdpa: entry outside block");
    if (b.diagonal && i != j) throw std::invalid_argument("sdpa: off-diagonal entry in a diagonal block");
    cells[{blk - 1, i - 1, j - 1, mat - 1}] += mat == 0 ? -v : v;
  }
  for (const auto& [key, v] : cells) {
    auto [blk, i, j, var] = key;
    if (v != 0) p.blocks[blk].entries.push_back({i, j, var, v});
  }
  if (p.objective.empty()) p.sense = Sense::feasibility;
  return p;
}

}  // namespace qcb
