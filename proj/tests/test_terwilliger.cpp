#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <random>

#include "qcbounds/certcheck.hpp"
#include "qcbounds/combinatorics.hpp"
#include "qcbounds/moment_gamma.hpp"
#include "qcbounds/terwilliger.hpp"
#include "support.hpp"

namespace qcb {
namespace {

double min_eig(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

double min_block_eig(const std::vector<Eigen::MatrixXd>& blocks) {
  double m = 1e300;
  for (const auto& b : blocks) m = std::min(m, min_eig(b));
  return m;
}

// Symmetric random x: uniform values, or the average of a random Gram matrix
// (PSD by construction), or a Gram average pushed slightly off the cone.
XVector<double> random_x(int n, std::mt19937_64& rng, int kind) {
  std::normal_distribution<double> g(0, 1);
  XVector<double> x;
  if (kind == 0) {
    for (const Tuple& t : index_set(n)) {
      if (t.i > t.j) continue;
      x[t] = g(rng);
      x[t.transposed()] = x[t];
    }
    return x;
  }
  const int size = 1 << (2 * n);
  const int rank = 1 + static_cast<int>(rng() % 4);
  Eigen::MatrixXd f(size, rank);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < rank; ++c) f(r, c) = g(rng);
  x = average_gamma(f * f.transpose(), n);
  if (kind == 2) x[{0, 0, 0, 0}] -= 0.05 * std::abs(g(rng)) + 0.01;
  return x;
}

TEST(Terwilliger, IndexSetForOneQubit) {
  const std::vector<Tuple> want = {{0, 0, 0, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}, {1, 1, 1, 0}, {1, 1, 1, 1}};
  EXPECT_EQ(index_set(1), want);
  EXPECT_EQ(Tuple::parse("3,2,1,0"), (Tuple{3, 2, 1, 0}));
  EXPECT_EQ((Tuple{3, 2, 1, 0}).key(), "3,2,1,0");
}

TEST(Terwilliger, BlockLayout) {
  EXPECT_EQ(block_layout(7).size(), 20u);
  for (int n = 1; n <= 8; ++n) {
    // Block sides squared sum to the number of tuples.
    std::size_t dim = 0;
    for (BlockId b : block_layout(n)) dim += static_cast<std::size_t>(block_side(n, b) * block_side(n, b));
    EXPECT_EQ(dim, index_set(n).size()) << n;
  }
}

TEST(Terwilliger, BasisIsAPartitionWithGammaSizes) {
  for (int n = 1; n <= 3; ++n) {
    const int size = 1 << (2 * n);
    Eigen::MatrixXi sum = Eigen::MatrixXi::Zero(size, size);
    for (const Tuple& x : index_set(n)) {
      const Eigen::MatrixXi m = basis_matrix(x, n);
      // <M, M> counts the ones of a 0/1 matrix.
      EXPECT_EQ(Integer(m.sum()), gamma_coeff(x.i, x.j, x.t, x.p, n));
      EXPECT_EQ(m.transpose(), basis_matrix(x.transposed(), n));
      sum += m;
    }
    EXPECT_EQ(sum, Eigen::MatrixXi::Ones(size, size));
  }
}

TEST(Terwilliger, ClosedUnderProducts) {
  const int n = 2;
  const auto tuples = index_set(n);
  std::vector<Eigen::MatrixXi> basis;
  for (const Tuple& x : tuples) basis.push_back(basis_matrix(x, n));
  for (const auto& a : basis)
    for (const auto& b : basis) {
      const Eigen::MatrixXi c = a * b;
      for (std::size_t k = 0; k < tuples.size(); ++k) {
        int value = -1;
        for (int r = 0; r < c.rows(); ++r)
          for (int s = 0; s < c.cols(); ++s)
            if (basis[k](r, s)) {
              if (value < 0) value = c(r, s);
              ASSERT_EQ(c(r, s), value);
            }
      }
    }
}

TEST(TerwilligerProperty, BlockPsdAgreesWithExplicitMatrix) {
  std::mt19937_64 rng(77);
  for (int n = 1; n <= 3; ++n) {
    int psd = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const XVector<double> x = random_x(n, rng, trial % 3);
      const double full = min_eig(explicit_matrix(x, n));
      const double blocks = min_block_eig(blocks_from_x(x, n));
      // The blocks are congruent to the reduction, so only the sign of the minimum carries over.
      ASSERT_EQ(full >= -1e-9, blocks >= -1e-9) << "n " << n << " trial " << trial << " " << full << " " << blocks;
      psd += full >= -1e-9;
    }
    // Both verdicts occur.
    EXPECT_GT(psd, 10) << n;
    EXPECT_LT(psd, 90) << n;
  }
}

TEST(TerwilligerProperty, ExactBlocksMatchFloatBlocks) {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 4; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      XVector<Rational> x;
      XVector<double> xd;
      for (const Tuple& t : index_set(n)) {
        if (t.i > t.j) continue;
        x[t] = x[t.transposed()] = test::random_rational(rng);
        xd[t] = xd[t.transposed()] = x[t].get_d();
      }
      const auto exact = blocks_from_x_exact(x, n);
      const auto scaled = scaled_blocks_from_x(x, n);
      const auto approx = blocks_from_x(xd, n);
      ASSERT_EQ(exact.size(), approx.size());
      for (std::size_t b = 0; b < exact.size(); ++b) {
        for (int r = 0; r < exact[b].rows(); ++r)
          for (int c = 0; c < exact[b].cols(); ++c) ASSERT_NEAR(exact[b](r, c).to_double(), approx[b](r, c), 1e-9);
        ASSERT_EQ(psd_exact(exact[b]), psd_exact(scaled[b]));
      }
    }
}

TEST(Terwilliger, AverageGammaExamples) {
  // All-ones averages to one on every tuple; the identity to one on the diagonal tuples.
  for (int n = 1; n <= 3; ++n) {
    const int size = 1 << (2 * n);
    for (const auto& [t, v] : average_gamma(Eigen::MatrixXd::Ones(size, size), n)) EXPECT_NEAR(v, 1, 1e-12);
    for (const auto& [t, v] : average_gamma(Eigen::MatrixXd::Identity(size, size), n))
      EXPECT_NEAR(v, t.i == t.j && t.i == t.t && t.t == t.p ? 1 : 0, 1e-12) << t.key();
  }
  // Dense and sparse averaging agree on a stabilizer moment matrix.
  const GammaMatrix g = gamma_from_stabilizer(test::group_of(test::known_codes()[1]));
  const XVector<Rational> exact = average_gamma_exact(g.entries, g.n);
  for (const auto& [t, v] : average_gamma(g.dense(), g.n)) {
    auto it = exact.find(t);
    EXPECT_NEAR(v, it == exact.end() ? 0 : it->second.get_d(), 1e-12) << t.key();
  }
}

TEST(Terwilliger, WitnessBlocksArePsd) {
  for (const auto& c : test::known_codes()) {
    const GammaMatrix g = gamma_from_stabilizer(test::group_of(c));
    const XVector<Rational> x = average_gamma_exact(g.entries, c.n);
    for (const auto& b : scaled_blocks_from_x(x, c.n)) EXPECT_TRUE(psd_exact(b)) << c.name;
    for (const auto& b : scaled_complement_blocks_from_x(x, c.n)) EXPECT_TRUE(psd_exact(b)) << c.name;
  }
}

TEST(Terwilliger, ComplementOfConstantIsZero) {
  // x constant on every tuple makes the complement vanish.
  for (int n = 1; n <= 4; ++n) {
    XVector<Rational> x;
    for (const Tuple& t : index_set(n)) x[t] = Rational(5, 3);
    for (const auto& [t, v] : complement_x(x, n)) EXPECT_EQ(v, 0) << t.key();
    for (const auto& b : scaled_complement_blocks_from_x(x, n))
      for (int r = 0; r < b.rows(); ++r)
        for (int c = 0; c < b.cols(); ++c) EXPECT_EQ(b(r, c), 0);
  }
}

}  // namespace
}  // namespace qcb
