#pragma once

#include <array>
#include <vector>

#include "qcbounds/quadext.hpp"
#include "qcbounds/rational.hpp"

namespace qcb {

// C(n, k), zero when n < 0, k < 0 or k > n.
Integer binomial(long n, long k);

// n! / (k_1! ... k_r!) with n = sum k; zero if any part is negative.
Integer multinomial(long n, const std::vector<long>& parts);

// K_j(i; n, q) for q in {2, 4}:  sum_a (-1)^a (q-1)^(j-a) C(i, a) C(n-i, j-a).
Integer krawtchouk(int j, int i, int n, int q = 4);

// Membership in the index set: 0 <= p <= t <= i, j <= n and i + j <= t + n.
bool in_index_set(int i, int j, int t, int p, int n);

// gamma^{t,p}_{i,j}: the number of (x, y) pairs with overlap profile (i, j, t, p).
// Zero outside the index set.
Integer gamma_coeff(int i, int j, int t, int p, int n, int q = 4);

// beta^{m,t}_{i,j,k} = sum_u (-1)^(t-u) C(u,t) C(m-2k, m-k-u) C(m-k-u, i-u) C(m-k-u, j-u).
Integer beta_coeff(int i, int j, int k, int m, int t);

// alpha(i,j,t,p,a,k) for q = 4. Carries a sqrt(3) factor when i + j is odd.
QuadExt alpha_coeff(int i, int j, int t, int p, int a, int k, int n);

// alpha(i,j,t,p,a,k) / 3^((i+j)/2), always rational. Conjugating a block by
// diag(3^(-i/2)) turns every alpha entry into this value.
Rational alpha_scaled(int i, int j, int t, int p, int a, int k, int n);

// Precomputed coefficients for one block length n (q = 4). Read-only after construction.
class CoeffTable {
 public:
  explicit CoeffTable(int n);

  int n() const { return n_; }
  const Integer& binom(int a, int b) const;
  const Integer& kraw(int j, int i) const { return kraw_[j * (n_ + 1) + i]; }
  // gamma^{0,0}_{i,0} = 3^i C(n,i), the number of strings of weight i.
  const Integer& weight_count(int i) const { return wcount_[i]; }

 private:
  int n_;
  std::vector<Integer> binom_;  // (2n+1)^2 table
  std::vector<Integer> kraw_;
  std::vector<Integer> wcount_;
};

}  // namespace qcb
