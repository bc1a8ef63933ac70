#include "qcbounds/combinatorics.hpp"

#include <stdexcept>

namespace qcb {

Integer binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

Integer multinomial(long n, const std::vector<long>& parts) {
  long rest = n;
  Integer r = 1;
  for (long k : parts) {
    if (k < 0 || k > rest) return 0;
    r *= binomial(rest, k);
    rest -= k;
  }
  return rest == 0 ? r : Integer(0);
}

namespace {

Integer ipow(long base, long e) {
  if (e < 0) throw std::invalid_argument("negative exponent");
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return r;
}

Integer signed_pow(long base, long e) {
  // base may be zero; 0^0 = 1.
  if (base == 0) return e == 0 ? 1 : 0;
  return ipow(base, e);
}

}  // namespace

Integer krawtchouk(int j, int i, int n, int q) {
  if (q != 2 && q != 4) throw std::invalid_argument("krawtchouk: q must be 2 or 4");
  if (n < 0 || i < 0 || j < 0 || i > n || j > n) throw std::out_of_range("krawtchouk: index out of range");
  Integer s = 0;
  for (int a = 0; a <= j; ++a) {
    Integer term = ipow(q - 1, j - a) * binomial(i, a) * binomial(n - i, j - a);
    if (a % 2) s -= term;
    else s += term;
  }
  return s;
}

bool in_index_set(int i, int j, int t, int p, int n) {
  return 0 <= p && p <= t && t <= i && t <= j && i <= n && j <= n && i + j <= t + n;
}

Integer gamma_coeff(int i, int j, int t, int p, int n, int q) {
  if (q != 2 && q != 4) throw std::invalid_argument("gamma_coeff: q must be 2 or 4");
  if (!in_index_set(i, j, t, p, n)) return 0;
  return ipow(q - 1, i + j - t) * signed_pow(q - 2, t - p) *
         multinomial(n, {p, t - p, i - t, j - t, n - i - j + t});
}

Integer beta_coeff(int i, int j, int k, int m, int t) {
  Integer s = 0;
  for (int u = 0; u <= m; ++u) {
    Integer term = binomial(u, t) * binomial(m - 2 * k, m - k - u) * binomial(m - k - u, i - u) *
                   binomial(m - k - u, j - u);
    if (term == 0) continue;
    if ((t - u) % 2) s -= term;
    else s += term;
  }
  return s;
}

namespace {

// beta^{n-a,t-a}_{i-a,j-a,k-a} * sum_g (-1)^(a-g) C(a,g) C(t-a,p-g) 2^(t-a-p+g)
Integer alpha_integer_part(int i, int j, int t, int p, int a, int k, int n) {
  Integer b = beta_coeff(i - a, j - a, k - a, n - a, t - a);
  if (b == 0) return 0;
  Integer s = 0;
  for (int g = 0; g <= p; ++g) {
    int e = t - a - p + g;
    if (e < 0) continue;
    Integer term = binomial(a, g) * binomial(t - a, p - g) * ipow(2, e);
    if ((a - g) % 2) s -= term;
    else s += term;
  }
  return b * s;
}

}  // namespace

QuadExt alpha_coeff(int i, int j, int t, int p, int a, int k, int n) {
  Integer c = alpha_integer_part(i, j, t, p, a, k, n);
  if (c == 0) return QuadExt();
  // 3^((i+j)/2 - t) = 3^((i+j-2t)/2)
  return QuadExt(Rational(c)) * QuadExt::pow_sqrt3(i + j - 2 * t);
}

Rational alpha_scaled(int i, int j, int t, int p, int a, int k, int n) {
  Integer c = alpha_integer_part(i, j, t, p, a, k, n);
  if (c == 0) return 0;
  Rational r(c, ipow(3, t));
  r.canonicalize();
  return r;
}

CoeffTable::CoeffTable(int n) : n_(n) {
  if (n < 1 || n > 32) throw std::invalid_argument("CoeffTable: n must be in [1, 32]");
  const int m = 2 * n + 1;
  binom_.resize(static_cast<std::size_t>(m * m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) binom_[a * m + b] = binomial(a, b);
  kraw_.resize(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) kraw_[j * (n + 1) + i] = krawtchouk(j, i, n, 4);
  for (int i = 0; i <= n; ++i) wcount_.push_back(ipow(3, i) * binomial(n, i));
}

const Integer& CoeffTable::binom(int a, int b) const {
  const int m = 2 * n_ + 1;
  if (a < 0 || b < 0 || a >= m || b >= m) throw std::out_of_range("CoeffTable::binom");
  return binom_[a * m + b];
}

}  // namespace qcb
