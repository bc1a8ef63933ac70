#include "qcbounds/rational.hpp"

#include "qcbounds/quadext.hpp"

#include <cmath>
#include <stdexcept>

namespace qcb {

namespace {

bool valid_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  if (!valid_integer(s)) throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  if (s.front() == '+') s.remove_prefix(1);
  return Integer(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    std::string digits(whole);
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    if (!frac.empty() && !valid_integer(frac)) throw std::invalid_argument("malformed decimal");
    Integer num = parse_integer(std::string(digits) + std::string(frac));
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rational& r) { return r.get_d(); }

Rational approximate(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot approximate a non-finite value");
  if (max_den < 1) max_den = 1;
  Rational target(x);  // exact binary value of x
  // Continued-fraction expansion of the exact target.
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational rem = target;
  const Integer cap = max_den;
  while (true) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), rem.get_num_mpz_t(), rem.get_den_mpz_t());
    Integer p2 = a * p1 + p0;
    Integer q2 = a * q1 + q0;
    if (q2 > cap) {
      // Best semiconvergent with denominator within the cap.
      Integer k = (cap - q0) / q1;
      Integer ps = k * p1 + p0, qs = k * q1 + q0;
      Rational conv(p1, q1), semi(ps, qs);
      conv.canonicalize();
      semi.canonicalize();
      if (qs > 0 && abs(semi - target) < abs(conv - target)) return semi;
      return conv;
    }
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    Rational frac = rem - Rational(a);
    if (frac == 0) break;
    rem = 1 / frac;
  }
  Rational r(p1, q1);
  r.canonicalize();
  return r;
}

Rational pow_int(const Rational& base, int exponent) {
  Rational result = 1;
  Rational b = exponent >= 0 ? base : Rational(1) / base;
  unsigned e = static_cast<unsigned>(exponent >= 0 ? exponent : -exponent);
  while (e) {
    if (e & 1u) result *= b;
    b *= b;
    e >>= 1u;
  }
  return result;
}

QuadExt QuadExt::pow_sqrt3(int e) {
  // 3^(e/2): even e gives a rational power of 3, odd e one sqrt(3) factor.
  int half = (e >= 0 ? e : e - 1) / 2;  // floor(e/2)
  Rational p = pow_int(Rational(3), half);
  if (e % 2 == 0) return QuadExt(p);
  return QuadExt(0, p);
}

QuadExt& QuadExt::operator*=(const QuadExt& o) {
  Rational a = a_ * o.a_ + 3 * b_ * o.b_;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

QuadExt& QuadExt::operator/=(const QuadExt& o) {
  Rational nrm = o.norm();
  if (nrm == 0) throw std::domain_error("QuadExt division by zero");
  *this *= o.conjugate();
  a_ /= nrm;
  b_ /= nrm;
  return *this;
}

int QuadExt::sign() const {
  int sa = sgn(a_), sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 with 3 b^2.
  int c = cmp(a_ * a_, 3 * b_ * b_);
  if (c == 0) return 0;  // cannot happen for b != 0 since sqrt 3 is irrational
  return c > 0 ? sa : sb;
}

double QuadExt::to_double() const { return a_.get_d() + b_.get_d() * 1.7320508075688772; }

std::string to_string(const QuadExt& q) {
  if (q.is_rational()) return to_string(q.rat());
  return to_string(q.rat()) + "+" + to_string(q.sqrt3_coeff()) + "*sqrt3";
}

}  // namespace qcb
