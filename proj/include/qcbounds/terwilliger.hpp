#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qcbounds/matrix.hpp"
#include "qcbounds/quadext.hpp"
#include "qcbounds/rational.hpp"

namespace qcb {

// (i, j, t, p) labelling one basis matrix M^{t,p}_{i,j} of the quaternary
// Terwilliger algebra.
struct Tuple {
  int i = 0, j = 0, t = 0, p = 0;
  auto operator<=>(const Tuple&) const = default;
  int product_weight() const { return i + j - t - p; }
  bool odd() const { return (t - p) % 2 != 0; }
  Tuple transposed() const { return {j, i, t, p}; }
  std::string key() const;  // "i,j,t,p"
  static Tuple parse(const std::string& key);
};

// All tuples with 0 <= p <= t <= i, j <= n and i + j <= t + n, lex order.
std::vector<Tuple> index_set(int n);

// Profile of a pair of strings given by their lexicographic indices (see
// PauliString::index); 2-bit digit m holds the symbol code of coordinate m.
Tuple tuple_of(std::uint64_t a, std::uint64_t b, int n);

// Values x^{t,p}_{i,j}. Missing keys read as zero.
template <class T>
using XVector = std::map<Tuple, T>;

struct BlockId {
  int a = 0, k = 0;
  auto operator<=>(const BlockId&) const = default;
  std::string key() const;  // "a,k"
};

// Blocks (a, k) with 0 <= a <= k <= n + a - k in lex order; block (a, k) has
// rows i = k .. n + a - k.
std::vector<BlockId> block_layout(int n);
int block_side(int n, BlockId b);

// One nonzero coefficient of a block: local cell (row <= col), the tuple it
// multiplies and alpha / 3^((i+j)/2), which is rational.
struct BlockTerm {
  int row = 0, col = 0;
  Tuple x;
  Rational scaled;
};

struct BlockStructure {
  BlockId id;
  int side = 0;
  std::vector<BlockTerm> terms;
};

std::vector<BlockStructure> block_structure(int n);

// 0/1 matrix of size 4^n (n <= 3).
Eigen::MatrixXi basis_matrix(const Tuple& x, int n);

// Blocks with the alpha coefficients, as floats.
std::vector<Eigen::MatrixXd> blocks_from_x(const XVector<double>& x, int n);
// Exact blocks in Q(sqrt 3).
std::vector<DenseMatrix<QuadExt>> blocks_from_x_exact(const XVector<Rational>& x, int n);
// Blocks conjugated by diag(3^(-i/2)); congruent to the exact blocks and rational.
std::vector<DenseMatrix<Rational>> scaled_blocks_from_x(const XVector<Rational>& x, int n);

// x^{0,0}_{i+j-t-p,0} - x^{t,p}_{i,j}, the input of the complement blocks.
template <class T>
XVector<T> complement_x(const XVector<T>& x, int n);

std::vector<Eigen::MatrixXd> complement_blocks_from_x(const XVector<double>& x, int n);
std::vector<DenseMatrix<Rational>> scaled_complement_blocks_from_x(const XVector<Rational>& x, int n);

// Dense sum_x x^{t,p}_{i,j} M^{t,p}_{i,j} of side 4^n (n <= 5).
Eigen::MatrixXd explicit_matrix(const XVector<double>& x, int n);

// x = lambda / gamma where lambda^{t,p}_{i,j} sums the entries of G over the
// pairs with that profile.
XVector<double> average_gamma(const Eigen::MatrixXd& g, int n);

struct SparseEntry {
  std::uint64_t row = 0, col = 0;
  Rational value;
};
XVector<Rational> average_gamma_exact(const std::vector<SparseEntry>& entries, int n);

}  // namespace qcb
