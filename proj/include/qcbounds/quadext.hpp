#pragma once

#include <string>

#include "qcbounds/rational.hpp"

namespace qcb {

// Exact element a + b*sqrt(3) of Q(sqrt 3).
class QuadExt {
 public:
  QuadExt() = default;
  QuadExt(const Rational& a) : a_(a) {}  // NOLINT: implicit embedding of Q
  QuadExt(long a) : a_(a) {}             // NOLINT
  QuadExt(const Rational& a, const Rational& b) : a_(a), b_(b) {}

  static QuadExt sqrt3() { return {0, 1}; }
  // 3^(e/2) for any integer e.
  static QuadExt pow_sqrt3(int e);

  const Rational& rat() const { return a_; }
  const Rational& sqrt3_coeff() const { return b_; }
  bool is_rational() const { return b_ == 0; }

  QuadExt& operator+=(const QuadExt& o) { a_ += o.a_; b_ += o.b_; return *this; }
  QuadExt& operator-=(const QuadExt& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
  QuadExt& operator*=(const QuadExt& o);
  QuadExt& operator/=(const QuadExt& o);

  friend QuadExt operator+(QuadExt x, const QuadExt& y) { return x += y; }
  friend QuadExt operator-(QuadExt x, const QuadExt& y) { return x -= y; }
  friend QuadExt operator*(QuadExt x, const QuadExt& y) { return x *= y; }
  friend QuadExt operator/(QuadExt x, const QuadExt& y) { return x /= y; }
  QuadExt operator-() const { return {-a_, -b_}; }

  friend bool operator==(const QuadExt& x, const QuadExt& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
  friend bool operator!=(const QuadExt& x, const QuadExt& y) { return !(x == y); }

  QuadExt conjugate() const { return {a_, -b_}; }
  // a^2 - 3 b^2
  Rational norm() const { return a_ * a_ - 3 * b_ * b_; }
  // Exact sign in {-1, 0, 1}.
  int sign() const;
  QuadExt abs() const { return sign() < 0 ? -*this : *this; }
  double to_double() const;

 private:
  Rational a_{0};
  Rational b_{0};
};

inline bool operator<(const QuadExt& x, const QuadExt& y) { return (x - y).sign() < 0; }
inline bool operator>(const QuadExt& x, const QuadExt& y) { return (x - y).sign() > 0; }
inline bool operator<=(const QuadExt& x, const QuadExt& y) { return (x - y).sign() <= 0; }
inline bool operator>=(const QuadExt& x, const QuadExt& y) { return (x - y).sign() >= 0; }

std::string to_string(const QuadExt& q);

}  // namespace qcb
