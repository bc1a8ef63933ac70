#include "qcbounds/enumerators.hpp"

#include <bit>
#include <stdexcept>

#include "qcbounds/combinatorics.hpp"

namespace qcb {

namespace {

// E |x> = e(x) |x ^ flip>, basis bit n-1-m for qubit m.
struct MonomialPauli {
  std::uint64_t flip = 0;
  std::uint64_t zmask = 0;
  int ys = 0;

  MonomialPauli(const PauliString& p) {  // NOLINT
    const int n = p.size();
    for (int m = 0; m < n; ++m) {
      const std::uint64_t bit = std::uint64_t{1} << (n - 1 - m);
      if ((p.x_bits() >> m) & 1u) flip |= bit;
      if ((p.z_bits() >> m) & 1u) zmask |= bit;
    }
    ys = std::popcount(p.x_bits() & p.z_bits());
  }

  // i^ys (-1)^{|z & x|}: Z acts first, then X, and Y = iXZ.
  ComplexRational value(std::uint64_t x) const {
    int e = ys + 2 * (std::popcount(zmask & x) & 1);
    switch (e % 4) {
      case 0: return {1, 0};
      case 1: return {0, 1};
      case 2: return {-1, 0};
      default: return {0, -1};
    }
  }
};

ComplexRational conj(const ComplexRational& c) { return {c.re, -c.im}; }

std::vector<Integer> kraw_row(int j, int n, int q) {
  std::vector<Integer> r;
  for (int i = 0; i <= n; ++i) r.push_back(krawtchouk(j, i, n, q));
  return r;
}

void check_len(std::size_t len, int n) {
  if (n < 1 || len != static_cast<std::size_t>(n + 1)) throw std::invalid_argument("enumerator length must be n + 1");
}

Rational pow2(int e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return Rational(r);
}

}  // namespace

ComplexRationalMatrix stabilizer_projector(const StabilizerGroup& s) {
  const int n = s.n();
  if (n > 6) throw std::invalid_argument("stabilizer_projector: n must be at most 6");
  const int dim = 1 << n;
  ComplexRationalMatrix p(dim, dim);
  const Rational scale(1, static_cast<unsigned long>(s.elements().size()));
  for (const auto& el : s.elements()) {
    MonomialPauli e(el.pauli);
    for (int x = 0; x < dim; ++x) {
      ComplexRational v = e.value(static_cast<std::uint64_t>(x));
      ComplexRational w{v.re * el.sign * scale, v.im * el.sign * scale};
      p(static_cast<int>(static_cast<std::uint64_t>(x) ^ e.flip), x) += w;
    }
  }
  return p;
}

EnumeratorPair enumerators_from_projector(const ComplexRationalMatrix& p, int n) {
  if (n < 1 || n > 5) throw std::invalid_argument("enumerators_from_projector: n must be in [1, 5]");
  const int dim = 1 << n;
  if (p.rows() != dim || p.cols() != dim) throw std::invalid_argument("enumerators_from_projector: size mismatch");
  EnumeratorPair out;
  out.a.assign(static_cast<std::size_t>(n + 1), Rational(0));
  out.b.assign(static_cast<std::size_t>(n + 1), Rational(0));
  for (const PauliString& ps : enumerate_basis(n)) {
    MonomialPauli e(ps);
    const int w = ps.weight();
    ComplexRational tr_e, tr_edag;
    for (int x = 0; x < dim; ++x) {
      const auto ux = static_cast<std::uint64_t>(x);
      const int fx = static_cast<int>(ux ^ e.flip);
      // tr(E P) = sum_y e(y) P[y, y^f];  tr(E^dag P) = sum_x conj(e(x)) P[x^f, x]
      tr_e += e.value(ux) * p(x, fx);
      tr_edag += conj(e.value(ux)) * p(fx, x);
    }
    ComplexRational prod = tr_edag * tr_e;
    if (prod.im != 0) throw std::runtime_error("enumerators_from_projector: A term is not real");
    out.a[w] += prod.re;
    // tr(P E^dag P E) = sum_{a,b} P[a,b] conj(e(b)) P[b^f, a^f] e(a)
    ComplexRational tb;
    for (int a = 0; a < dim; ++a) {
      const auto ua = static_cast<std::uint64_t>(a);
      const ComplexRational ea = e.value(ua);
      const int fa = static_cast<int>(ua ^ e.flip);
      for (int b = 0; b < dim; ++b) {
        const ComplexRational& pab = p(a, b);
        if (pab.re == 0 && pab.im == 0) continue;
        const auto ub = static_cast<std::uint64_t>(b);
        tb += pab * conj(e.value(ub)) * p(static_cast<int>(ub ^ e.flip), fa) * ea;
      }
    }
    if (tb.im != 0) throw std::runtime_error("enumerators_from_projector: B term is not real");
    out.b[w] += tb.re;
  }
  return out;
}

std::vector<Rational> macwilliams(const std::vector<Rational>& a, int n) {
  check_len(a.size(), n);
  std::vector<Rational> b;
  const Rational scale = 1 / pow2(n);
  for (int j = 0; j <= n; ++j) {
    auto k = kraw_row(j, n, 4);
    Rational s = 0;
    for (int i = 0; i <= n; ++i) s += Rational(k[i]) * a[i];
    b.push_back(s * scale);
  }
  return b;
}

std::vector<Rational> shadow(const std::vector<Rational>& a, int n) {
  check_len(a.size(), n);
  std::vector<Rational> s;
  const Rational scale = 1 / pow2(n);
  for (int j = 0; j <= n; ++j) {
    auto k = kraw_row(j, n, 4);
    Rational v = 0;
    for (int i = 0; i <= n; ++i) v += (i % 2 ? -1 : 1) * Rational(k[i]) * a[i];
    s.push_back(v * scale);
  }
  return s;
}

std::vector<double> macwilliams(const std::vector<double>& a, int n) {
  check_len(a.size(), n);
  std::vector<double> b;
  for (int j = 0; j <= n; ++j) {
    double s = 0;
    for (int i = 0; i <= n; ++i) s += krawtchouk(j, i, n, 4).get_d() * a[i];
    b.push_back(std::ldexp(s, -n));
  }
  return b;
}

std::vector<double> shadow(const std::vector<double>& a, int n) {
  check_len(a.size(), n);
  std::vector<double> out;
  for (int j = 0; j <= n; ++j) {
    double s = 0;
    for (int i = 0; i <= n; ++i) s += (i % 2 ? -1.0 : 1.0) * krawtchouk(j, i, n, 4).get_d() * a[i];
    out.push_back(std::ldexp(s, -n));
  }
  return out;
}

namespace {

// Rows of the transform  T_j(A) = 2^-n sum_i sign_i K_j(i) A_i.
std::vector<Term<Rational>> transform_row(int j, int n, bool alternate, int q = 4) {
  std::vector<Term<Rational>> t;
  const Rational scale = 1 / pow2(n);
  for (int i = 0; i <= n; ++i) {
    Rational c = Rational(krawtchouk(j, i, n, q)) * scale;
    if (alternate && i % 2) c = -c;
    if (c != 0) t.push_back({i, c});
  }
  return t;
}

void validate_params(int n, long K, int delta) {
  if (n < 1 || n > 32) throw std::invalid_argument("n must be in [1, 32]");
  if (K < 1) throw std::invalid_argument("K must be positive");
  if (delta < 1 || delta > n) throw std::invalid_argument("delta must be in [1, n]");
}

}  // namespace

ConicProgram<Rational> build_lp_bound(int n, long K, int delta, const LpOptions& opt) {
  validate_params(n, K, delta);
  ConicProgram<Rational> p;
  for (int j = 0; j <= n; ++j) p.add_var("A" + std::to_string(j));
  const Rational kk(K);
  p.add_eq({{0, 1}}, kk * kk, "A0 = K^2");
  for (int j = 0; j <= n; ++j) {
    p.add_ge({{j, 1}}, 0, "A" + std::to_string(j) + " >= 0");
    auto b = transform_row(j, n, false);
    p.add_ge(b, 0, "B" + std::to_string(j) + " >= 0");
    // K B_j - A_j
    std::vector<Term<Rational>> kl;
    for (auto t : b) kl.push_back({t.var, t.coef * kk});
    kl.push_back({j, -1});
    kl = merge_terms(kl);
    if (j < delta) p.add_eq(kl, 0, "K B" + std::to_string(j) + " = A" + std::to_string(j));
    else p.add_ge(kl, 0, "K B" + std::to_string(j) + " >= A" + std::to_string(j));
  }
  if (opt.shadow)
    for (int j = 0; j <= n; ++j) {
      auto s = transform_row(j, n, true);
      if (K == 1 && (n - j) % 2) p.add_eq(s, 0, "S" + std::to_string(j) + " = 0");
      else p.add_ge(s, 0, "S" + std::to_string(j) + " >= 0");
    }
  if (opt.pure || K == 1)
    for (int j = 1; j < delta; ++j) p.add_eq({{j, 1}}, 0, "pure A" + std::to_string(j) + " = 0");
  if (opt.stab != StabType::none) {
    if (!std::has_single_bit(static_cast<unsigned long>(K)))
      throw std::invalid_argument("type sums need K to be a power of two");
    const int logk = std::bit_width(static_cast<unsigned long>(K)) - 1;
    // With A_0 = K^2 the normalized enumerator is A / K^2.
    Rational rhs = kk * kk * pow2(n - logk - (opt.stab == StabType::type1 ? 1 : 0));
    std::vector<Term<Rational>> even;
    for (int j = 0; j <= n; j += 2) even.push_back({j, 1});
    p.add_eq(even, rhs, "even-weight sum");
  }
  return p;
}

ConicProgram<Rational> build_delsarte(int n, int delta, const DelsarteOptions& opt) {
  validate_params(n, 1, delta);
  ConicProgram<Rational> p;
  if (opt.quantum) {
    for (int j = 0; j <= n; ++j) p.add_var("A" + std::to_string(j));
    p.add_eq({{0, 1}}, 1, "A0 = 1");
    const int first = opt.widen ? 1 : 2;
    for (int j = 1; j <= n; ++j) {
      if (j >= first && j < delta) p.add_eq({{j, 1}}, 0, "A" + std::to_string(j) + " = 0");
      else p.add_ge({{j, 1}}, 0, "A" + std::to_string(j) + " >= 0");
    }
    for (int j = 0; j <= n; ++j) {
      std::vector<Term<Rational>> row;
      for (int i = 0; i <= n; ++i) {
        Rational c(krawtchouk(j, i, n, 4));
        if (c != 0) row.push_back({i, c});
      }
      p.add_ge(row, 0, "krawtchouk " + std::to_string(j));
    }
    if (opt.shadow)
      for (int j = 0; j <= n; ++j) {
        auto s = transform_row(j, n, true);
        if ((n - j) % 2) p.add_eq(s, 0, "S" + std::to_string(j) + " = 0");
        else p.add_ge(s, 0, "S" + std::to_string(j) + " >= 0");
      }
    std::vector<Term<Rational>> total;
    for (int j = 0; j <= n; ++j) total.push_back({j, 1});
    if (opt.pin_total) {
      p.add_eq(total, pow2(n), "sum A = 2^n");
    } else {
      p.sense = Sense::maximize;
      p.objective = total;
    }
    return p;
  }
  for (int i = 0; i <= n; ++i) p.add_var("x" + std::to_string(i));
  p.add_eq({{0, 1}}, 1 / pow2(n), "x0 = 2^-n");
  for (int i = 1; i <= n; ++i) {
    if (i < delta) p.add_eq({{i, 1}}, 0, "x" + std::to_string(i) + " = 0");
    else p.add_ge({{i, 1}}, 0, "x" + std::to_string(i) + " >= 0");
  }
  for (int j = 0; j <= n; ++j) {
    std::vector<Term<Rational>> row;
    for (int i = 0; i <= n; ++i) {
      Rational c(krawtchouk(j, i, n, 2));
      if (c != 0) row.push_back({i, c});
    }
    p.add_ge(row, 0, "binary krawtchouk " + std::to_string(j));
  }
  p.sense = Sense::maximize;
  for (int i = 0; i <= n; ++i) p.objective.push_back({i, pow2(n)});
  return p;
}

}  // namespace qcb
