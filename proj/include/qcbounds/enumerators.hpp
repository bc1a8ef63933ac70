#pragma once

#include <vector>

#include "qcbounds/conic.hpp"
#include "qcbounds/matrix.hpp"
#include "qcbounds/pauli.hpp"
#include "qcbounds/rational.hpp"

namespace qcb {

struct ComplexRational {
  Rational re{0}, im{0};
  friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  ComplexRational& operator+=(const ComplexRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  bool operator==(const ComplexRational&) const = default;
};

using ComplexRationalMatrix = DenseMatrix<ComplexRational>;

// 2^-(n-k) sum_s sign_s E_s over the group elements, qubit 0 as the most
// significant bit of the computational basis index. n <= 6.
ComplexRationalMatrix stabilizer_projector(const StabilizerGroup& s);

struct EnumeratorPair {
  std::vector<Rational> a;  // A_j = sum_{wt E = j} tr(E^dag P) tr(E P)
  std::vector<Rational> b;  // B_j = sum_{wt E = j} tr(P E^dag P E)
};

// Brute force over all 4^n Pauli strings. n <= 5.
EnumeratorPair enumerators_from_projector(const ComplexRationalMatrix& p, int n);

// B_j = 2^-n sum_i K_j(i) A_i.
std::vector<Rational> macwilliams(const std::vector<Rational>& a, int n);
std::vector<double> macwilliams(const std::vector<double>& a, int n);
// S_j = 2^-n sum_i (-1)^i K_j(i) A_i.
std::vector<Rational> shadow(const std::vector<Rational>& a, int n);
std::vector<double> shadow(const std::vector<double>& a, int n);

enum class StabType { none, type1, type2 };

struct LpOptions {
  bool shadow = false;
  // Forced on for K = 1, since self-dual codes are pure.
  bool pure = false;
  StabType stab = StabType::none;
};

// Variables A_0 .. A_n (named "A0".."An"), feasibility sense.
ConicProgram<Rational> build_lp_bound(int n, long K, int delta, const LpOptions& opt = {});

struct DelsarteOptions {
  bool quantum = true;
  // Zeros for 0 < j < delta instead of 1 < j < delta.
  bool widen = false;
  // Replace the objective by the constraint sum_j A_j = 2^n (quantum only).
  bool pin_total = false;
  // Append S_j >= 0 with S_j = 0 for n - j odd (quantum only).
  bool shadow = false;
};

// Quantum: maximize sum A_j. Classical: maximize 2^n sum x_i with binary
// Krawtchouk rows.
ConicProgram<Rational> build_delsarte(int n, int delta, const DelsarteOptions& opt = {});

}  // namespace qcb
