#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <fstream>
#include <random>
#include <sstream>

#include "qcbounds/certcheck.hpp"
#include "support.hpp"

namespace qcb {
namespace {

const std::string kFixture = std::string(QCB_DATA_DIR) + "/cert_7_1_4.json";

DenseMatrix<Rational> rat_matrix(std::initializer_list<std::initializer_list<long>> rows) {
  DenseMatrix<Rational> m(static_cast<int>(rows.size()), static_cast<int>(rows.begin()->size()));
  int r = 0;
  for (const auto& row : rows) {
    int c = 0;
    for (long v : row) m(r, c++) = Rational(v);
    ++r;
  }
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(PsdExact, Examples) {
  EXPECT_TRUE(psd_exact(rat_matrix({{2, -1}, {-1, 2}})));
  EXPECT_TRUE(psd_exact(rat_matrix({{1, 1}, {1, 1}})));
  EXPECT_TRUE(psd_exact(rat_matrix({{0, 0}, {0, 0}})));
  EXPECT_FALSE(psd_exact(rat_matrix({{1, 2}, {2, 1}})));
  EXPECT_FALSE(psd_exact(rat_matrix({{0, 1}, {1, 5}})));  // zero pivot with a nonzero row
  EXPECT_FALSE(psd_exact(rat_matrix({{1, 0}, {1, 1}})));  // not symmetric
  EXPECT_TRUE(psd_exact(DenseMatrix<Rational>(0, 0)));

  // [[2, sqrt3], [sqrt3, 2]] has eigenvalues 2 +- sqrt3 > 0; [[1, sqrt3], [sqrt3, 1]] does not.
  DenseMatrix<QuadExt> q(2, 2);
  q(0, 0) = q(1, 1) = 2;
  q(0, 1) = q(1, 0) = QuadExt::sqrt3();
  EXPECT_TRUE(psd_exact(q));
  q(0, 0) = q(1, 1) = 1;
  EXPECT_FALSE(psd_exact(q));
}

TEST(PsdExactProperty, AgreesWithFloatEigenvalues) {
  std::mt19937_64 rng(17);
  int psd = 0;
  for (int trial = 0; trial < 500; ++trial) {
    // B B^T shifted by a random multiple of the identity.
    const int s = 6, r = 1 + static_cast<int>(rng() % 6);
    DenseMatrix<Rational> b(s, r), m(s, s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < r; ++j) b(i, j) = test::random_rational(rng, 5, 3);
    const Rational shift = test::random_rational(rng, 3, 4) * Rational(trial % 3 == 0 ? 0 : 1);
    Eigen::MatrixXd d(s, s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        Rational v = 0;
        for (int k = 0; k < r; ++k) v += b(i, k) * b(j, k);
        if (i == j) v += shift;
        m(i, j) = v;
        d(i, j) = v.get_d();
      }
    const double low = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(d).eigenvalues().minCoeff();
    if (std::abs(low) < 1e-9) {
      // Too close to call in floating point; exact answer must follow the shift sign.
      if (shift >= 0) EXPECT_TRUE(psd_exact(m));
      continue;
    }
    ASSERT_EQ(psd_exact(m), low > 0) << "trial " << trial << " low " << low;
    psd += low > 0;
  }
  EXPECT_GT(psd, 50);
  EXPECT_LT(psd, 450);
}

TEST(QuadExtProperty, NormIsMultiplicative) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const QuadExt a(test::random_rational(rng), test::random_rational(rng));
    const QuadExt b(test::random_rational(rng), test::random_rational(rng));
    ASSERT_EQ((a * b).norm(), a.norm() * b.norm());
    ASSERT_EQ(a * a.conjugate(), QuadExt(a.norm()));
    if (b != QuadExt(0)) ASSERT_EQ(a / b * b, a);
    ASSERT_EQ((a - b).sign(), a.to_double() - b.to_double() > 0 ? 1 : (a == b ? 0 : -1));
  }
}

TEST(QuadExt, ParseForms) {
  EXPECT_EQ(parse_quadext("3/4"), QuadExt(Rational(3, 4)));
  EXPECT_EQ(parse_quadext("1+2*sqrt3"), QuadExt(1, 2));
  EXPECT_EQ(parse_quadext("1/2-1/3*sqrt3"), QuadExt(Rational(1, 2), Rational(-1, 3)));
  EXPECT_EQ(parse_quadext("0.25"), QuadExt(Rational(1, 4)));
  EXPECT_EQ(parse_quadext("-0.0625"), QuadExt(Rational(-1, 16)));
  EXPECT_EQ(parse_quadext("010"), QuadExt(10));
  EXPECT_EQ(QuadExt::pow_sqrt3(3), QuadExt(0, 3));
  EXPECT_THROW(parse_quadext("3/0"), std::invalid_argument);
  EXPECT_THROW(parse_quadext("abc"), std::invalid_argument);
}

TEST(Certificate, FixtureVerifies) {
  const DualCertificate c = load_certificate(kFixture);
  EXPECT_EQ(c.n, 7);
  EXPECT_EQ(c.delta, 4);
  EXPECT_EQ(c.shape, ModelShape::lovasz);
  EXPECT_EQ(c.blocks.size(), 20u);
  const DenseMatrix<QuadExt>& y03 = c.blocks.at({0, 3});
  EXPECT_EQ(y03(0, 0), QuadExt(84));
  EXPECT_EQ(y03(0, 1), QuadExt(0));
  EXPECT_EQ(y03(1, 1), QuadExt(12));
  EXPECT_EQ(c.blocks.at({4, 4})(1, 1), QuadExt(Rational(16187991, 644740)));

  const VerificationReport r = verify_certificate(c);
  EXPECT_TRUE(r.certified) << r.verdict;
  EXPECT_EQ(r.verdict, "certified");
  EXPECT_NEAR(r.alpha_value, 0.58, 0.01);
  for (const auto& [fam, res] : r.max_residual) EXPECT_LE(res, 1e-12) << fam;
  for (const auto& [blk, ok] : r.block_psd) EXPECT_TRUE(ok) << blk;
  EXPECT_EQ(r.block_psd.size(), 20u);
}

TEST(Certificate, RoundTrip) {
  const DualCertificate c = load_certificate(kFixture);
  const DualCertificate back = parse_certificate(certificate_to_json(c));
  EXPECT_EQ(back.blocks, c.blocks);
  EXPECT_EQ(back.scalars, c.scalars);
  EXPECT_EQ(back.n, c.n);
  EXPECT_EQ(verify_certificate(back).alpha, verify_certificate(c).alpha);
}

TEST(Certificate, PerturbationIsRejected) {
  DualCertificate c = load_certificate(kFixture);
  // A large negative diagonal breaks PSD; a small symmetric change breaks an equation.
  DualCertificate neg = c;
  neg.blocks.at({0, 3})(1, 1) = QuadExt(-1000);
  EXPECT_FALSE(verify_certificate(neg).certified);
  DualCertificate off = c;
  off.blocks.at({1, 3})(1, 2) += Rational(1, 7);
  off.blocks.at({1, 3})(2, 1) += Rational(1, 7);
  const VerificationReport r = verify_certificate(off);
  EXPECT_FALSE(r.certified);
  EXPECT_TRUE(r.verdict == "psd_failed" || r.verdict == "residual_exceeded") << r.verdict;
}

TEST(Certificate, ZeroCertificateIsNotCertified) {
  DualCertificate c = load_certificate(kFixture);
  for (auto& [id, m] : c.blocks)
    for (int r = 0; r < m.rows(); ++r)
      for (int s = 0; s < m.cols(); ++s) m(r, s) = 0;
  EXPECT_FALSE(verify_certificate(c).certified);
}

TEST(Certificate, ObjectEntriesAndErrors) {
  const std::string text = R"({"n": 1, "K": 1, "delta": 2, "model": "red_lovasz",
    "blocks": {"0,0": [[{"rat": "1/2", "sqrt3": "1"}, "0"], ["0", "1"]]}, "scalars": {}})";
  const DualCertificate c = parse_certificate(text);
  EXPECT_EQ(c.blocks.at({0, 0})(0, 0), QuadExt(Rational(1, 2), 1));
  EXPECT_THROW(parse_certificate(R"({"n": 1})"), std::invalid_argument);
  EXPECT_THROW(parse_certificate("not json"), std::invalid_argument);
  EXPECT_THROW(load_certificate("/nonexistent/cert.json"), std::runtime_error);
}

TEST(CheckPoint, ReportsViolatedRows) {
  ConicProgram<Rational> p;
  const int x = p.add_var("x");
  p.add_eq({{x, 1}}, 2, "fix");
  p.add_ge({{x, 1}}, 3, "low");
  EXPECT_EQ(check_point(p, {Rational(2)}), std::vector<std::string>{"low"});
  EXPECT_EQ(check_point(p, {Rational(3)}), std::vector<std::string>{"fix"});
}

}  // namespace
}  // namespace qcb
