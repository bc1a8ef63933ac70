#include "qcbounds/terwilliger.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qcbounds/combinatorics.hpp"

namespace qcb {

std::string Tuple::key() const {
  return std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(t) + "," + std::to_string(p);
}

Tuple Tuple::parse(const std::string& key) {
  Tuple x;
  char c1 = 0, c2 = 0, c3 = 0;
  std::istringstream in(key);
  if (!(in >> x.i >> c1 >> x.j >> c2 >> x.t >> c3 >> x.p) || c1 != ',' || c2 != ',' || c3 != ',')
    throw std::invalid_argument("malformed tuple key '" + key + "'");
  return x;
}

std::string BlockId::key() const { return std::to_string(a) + "," + std::to_string(k); }

std::vector<Tuple> index_set(int n) {
  if (n < 1) throw std::invalid_argument("index_set: n must be positive");
  std::vector<Tuple> out;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int t = 0; t <= std::min(i, j); ++t)
        for (int p = 0; p <= t; ++p)
          if (i + j <= t + n) out.push_back({i, j, t, p});
  return out;
}

Tuple tuple_of(std::uint64_t a, std::uint64_t b, int n) {
  const std::uint64_t low = n >= 32 ? 0x5555555555555555ULL : ((std::uint64_t{1} << (2 * n)) - 1) & 0x5555555555555555ULL;
  const std::uint64_t sa = (a | (a >> 1)) & low;
  const std::uint64_t sb = (b | (b >> 1)) & low;
  const std::uint64_t d = a ^ b;
  const std::uint64_t eq = ~(d | (d >> 1)) & low;
  return {std::popcount(sa), std::popcount(sb), std::popcount(sa & sb), std::popcount(sa & eq)};
}

std::vector<BlockId> block_layout(int n) {
  std::vector<BlockId> out;
  for (int a = 0; a <= n; ++a)
    for (int k = a; k <= n; ++k)
      if (k <= n + a - k) out.push_back({a, k});
  return out;
}

int block_side(int n, BlockId b) { return n + b.a - 2 * b.k + 1; }

std::vector<BlockStructure> block_structure(int n) {
  std::vector<BlockStructure> out;
  for (BlockId id : block_layout(n)) {
    BlockStructure bs;
    bs.id = id;
    bs.side = block_side(n, id);
    for (int r = 0; r < bs.side; ++r)
      for (int c = r; c < bs.side; ++c) {
        const int i = id.k + r, j = id.k + c;
        for (int t = 0; t <= std::min(i, j); ++t)
          for (int p = 0; p <= t; ++p) {
            if (!in_index_set(i, j, t, p, n)) continue;
            Rational v = alpha_scaled(i, j, t, p, id.a, id.k, n);
            if (v != 0) bs.terms.push_back({r, c, {i, j, t, p}, v});
          }
      }
    out.push_back(std::move(bs));
  }
  return out;
}

Eigen::MatrixXi basis_matrix(const Tuple& x, int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("basis_matrix: n must be in [1, 3]");
  const int size = 1 << (2 * n);
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(size, size);
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b)
      if (tuple_of(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b), n) == x) m(a, b) = 1;
  return m;
}

namespace {

template <class T>
T lookup(const XVector<T>& x, const Tuple& key) {
  auto it = x.find(key);
  return it == x.end() ? T(0) : it->second;
}

}  // namespace

std::vector<Eigen::MatrixXd> blocks_from_x(const XVector<double>& x, int n) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& bs : block_structure(n)) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(bs.side, bs.side);
    for (const auto& term : bs.terms) {
      double v = term.scaled.get_d() * std::pow(3.0, 0.5 * (term.x.i + term.x.j)) * lookup(x, term.x);
      m(term.row, term.col) += v;
      if (term.row != term.col) m(term.col, term.row) += v;
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<DenseMatrix<QuadExt>> blocks_from_x_exact(const XVector<Rational>& x, int n) {
  std::vector<DenseMatrix<QuadExt>> out;
  for (const auto& bs : block_structure(n)) {
    DenseMatrix<QuadExt> m(bs.side, bs.side);
    for (const auto& term : bs.terms) {
      Rational xv = lookup(x, term.x);
      if (xv == 0) continue;
      QuadExt v = QuadExt::pow_sqrt3(term.x.i + term.x.j) * QuadExt(term.scaled * xv);
      m(term.row, term.col) += v;
      if (term.row != term.col) m(term.col, term.row) += v;
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<DenseMatrix<Rational>> scaled_blocks_from_x(const XVector<Rational>& x, int n) {
  std::vector<DenseMatrix<Rational>> out;
  for (const auto& bs : block_structure(n)) {
    DenseMatrix<Rational> m(bs.side, bs.side);
    for (const auto& term : bs.terms) {
      Rational v = term.scaled * lookup(x, term.x);
      m(term.row, term.col) += v;
      if (term.row != term.col) m(term.col, term.row) += v;
    }
    out.push_back(std::move(m));
  }
  return out;
}

template <class T>
XVector<T> complement_x(const XVector<T>& x, int n) {
  XVector<T> out;
  for (const Tuple& key : index_set(n)) out[key] = lookup(x, {key.product_weight(), 0, 0, 0}) - lookup(x, key);
  return out;
}

template XVector<double> complement_x(const XVector<double>&, int);
template XVector<Rational> complement_x(const XVector<Rational>&, int);

std::vector<Eigen::MatrixXd> complement_blocks_from_x(const XVector<double>& x, int n) {
  return blocks_from_x(complement_x(x, n), n);
}

std::vector<DenseMatrix<Rational>> scaled_complement_blocks_from_x(const XVector<Rational>& x, int n) {
  return scaled_blocks_from_x(complement_x(x, n), n);
}

Eigen::MatrixXd explicit_matrix(const XVector<double>& x, int n) {
  if (n < 1 || n > 5) throw std::invalid_argument("explicit_matrix: n must be in [1, 5]");
  const int size = 1 << (2 * n);
  Eigen::MatrixXd m(size, size);
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b)
      m(a, b) = lookup(x, tuple_of(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b), n));
  return m;
}

XVector<double> average_gamma(const Eigen::MatrixXd& g, int n) {
  if (n < 1 || n > 5) throw std::invalid_argument("average_gamma: n must be in [1, 5]");
  const int size = 1 << (2 * n);
  if (g.rows() != size || g.cols() != size) throw std::invalid_argument("average_gamma: size mismatch");
  XVector<double> lambda;
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b)
      lambda[tuple_of(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b), n)] += g(a, b);
  XVector<double> out;
  for (const Tuple& key : index_set(n)) out[key] = lambda[key] / gamma_coeff(key.i, key.j, key.t, key.p, n).get_d();
  return out;
}

XVector<Rational> average_gamma_exact(const std::vector<SparseEntry>& entries, int n) {
  XVector<Rational> lambda;
  for (const auto& e : entries) lambda[tuple_of(e.row, e.col, n)] += e.value;
  XVector<Rational> out;
  for (const Tuple& key : index_set(n)) {
    Rational v = lambda[key] / Rational(gamma_coeff(key.i, key.j, key.t, key.p, n));
    v.canonicalize();
    out[key] = v;
  }
  return out;
}

}  // namespace qcb
