#include "qcbounds/pauli.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace qcb {

namespace {

// Phase exponent b with sigma_x sigma_y = i^b sigma_{x^y}, codes I=0, Z=1, X=2, Y=3.
constexpr int kPhase[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},  // Z*X = iY, Z*Y = -iX
    {0, 3, 0, 1},  // X*Z = -iY, X*Y = iZ
    {0, 1, 3, 0},  // Y*Z = iX, Y*X = -iZ
};

constexpr char kSymbols[4] = {'I', 'Z', 'X', 'Y'};

int symbol_code(char c) {
  switch (c) {
    case 'I': case '_': return 0;
    case 'Z': return 1;
    case 'X': return 2;
    case 'Y': return 3;
    default: throw std::invalid_argument(std::string("invalid Pauli symbol '") + c + "'");
  }
}

}  // namespace

PauliString::PauliString(int n) : n_(n) {
  if (n < 1 || n > kMaxQubits) throw std::invalid_argument("Pauli string length must be in [1, 32]");
}

PauliString PauliString::from_string(std::string_view s) {
  PauliString p(static_cast<int>(s.size()));
  for (int m = 0; m < p.n_; ++m) p.set(m, symbol_code(s[m]));
  return p;
}

PauliString PauliString::from_index(std::uint64_t index, int n) {
  PauliString p(n);
  // Lexicographic order: coordinate 0 is the most significant digit.
  for (int m = n - 1; m >= 0; --m) {
    p.set(m, static_cast<int>(index & 3u));
    index >>= 2;
  }
  return p;
}

std::uint64_t PauliString::index() const {
  std::uint64_t idx = 0;
  for (int m = 0; m < n_; ++m) idx = (idx << 2) | static_cast<std::uint64_t>(symbol(m));
  return idx;
}

void PauliString::set(int m, int code) {
  if (m < 0 || m >= n_ || code < 0 || code > 3) throw std::out_of_range("Pauli coordinate");
  const std::uint64_t bit = std::uint64_t{1} << m;
  z_ = (code & 1) ? (z_ | bit) : (z_ & ~bit);
  x_ = (code & 2) ? (x_ | bit) : (x_ & ~bit);
}

int PauliString::symbol(int m) const {
  return static_cast<int>(((z_ >> m) & 1u) | (((x_ >> m) & 1u) << 1));
}

int PauliString::weight() const { return std::popcount(support_mask()); }

std::string PauliString::str() const {
  std::string s(static_cast<std::size_t>(n_), 'I');
  for (int m = 0; m < n_; ++m) s[m] = kSymbols[symbol(m)];
  return s;
}

PauliString PauliString::operator^(const PauliString& o) const {
  check_same_length(*this, o);
  PauliString r(n_);
  r.x_ = x_ ^ o.x_;
  r.z_ = z_ ^ o.z_;
  return r;
}

void check_same_length(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) throw std::invalid_argument("Pauli strings of different lengths");
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  check_same_length(a, b);
  int phase = 0;
  for (int m = 0; m < a.size(); ++m) phase += kPhase[a.symbol(m)][b.symbol(m)];
  return {a ^ b, Phase(phase)};
}

bool commutes(const PauliString& a, const PauliString& b) {
  check_same_length(a, b);
  // Symplectic form: x_a . z_b + z_a . x_b (mod 2).
  int s = std::popcount((a.x_bits() & b.z_bits()) ^ (a.z_bits() & b.x_bits()));
  return s % 2 == 0;
}

OverlapProfile overlap_profile(const PauliString& a, const PauliString& b) {
  check_same_length(a, b);
  std::uint64_t sa = a.support_mask(), sb = b.support_mask();
  std::uint64_t both = sa & sb;
  std::uint64_t differ = (a.x_bits() ^ b.x_bits()) | (a.z_bits() ^ b.z_bits());
  OverlapProfile p;
  p.i = std::popcount(sa);
  p.j = std::popcount(sb);
  p.t = std::popcount(both);
  p.p = std::popcount(both & ~differ);
  return p;
}

std::vector<PauliString> enumerate_basis(int n, int cap) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (n > cap) throw std::invalid_argument("n exceeds the enumeration cap");
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  std::vector<PauliString> out;
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) out.push_back(PauliString::from_index(k, n));
  return out;
}

SignedPauli SignedPauli::parse(std::string_view s) {
  SignedPauli sp;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    sp.sign = s.front() == '-' ? -1 : 1;
    s.remove_prefix(1);
  }
  sp.pauli = PauliString::from_string(s);
  return sp;
}

std::string SignedPauli::str() const { return (sign < 0 ? "-" : "+") + pauli.str(); }

StabilizerGroup::StabilizerGroup(std::vector<SignedPauli> generators) : gens_(std::move(generators)) {
  if (gens_.empty()) throw std::invalid_argument("stabilizer group needs at least one generator");
  n_ = gens_.front().pauli.size();
  for (const auto& g : gens_)
    if (g.pauli.size() != n_) throw std::invalid_argument("generators of different lengths");
  for (std::size_t a = 0; a < gens_.size(); ++a)
    for (std::size_t b = a + 1; b < gens_.size(); ++b)
      if (!commutes(gens_[a].pauli, gens_[b].pauli))
        throw std::invalid_argument("generators " + gens_[a].str() + " and " + gens_[b].str() + " anticommute");
  if (static_cast<int>(gens_.size()) > n_) throw std::invalid_argument("more generators than qubits");
  k_ = n_ - static_cast<int>(gens_.size());
  elements_ = expand();
  for (const auto& e : elements_) sorted_indices_.push_back(e.pauli.index());
  std::sort(sorted_indices_.begin(), sorted_indices_.end());
}

StabilizerGroup StabilizerGroup::parse(const std::vector<std::string>& lines) {
  std::vector<SignedPauli> gens;
  for (const auto& l : lines) gens.push_back(SignedPauli::parse(l));
  return StabilizerGroup(std::move(gens));
}

std::vector<SignedPauli> StabilizerGroup::expand() const {
  std::vector<SignedPauli> group;
  group.push_back({PauliString(n_), 1});
  for (const auto& g : gens_) {
    const std::size_t old = group.size();
    for (std::size_t e = 0; e < old; ++e) {
      auto prod = multiply(group[e].pauli, g.pauli);
      // Commuting Hermitian Paulis multiply to a Hermitian one: the phase is real.
      if (prod.phase.exponent() % 2 != 0) throw std::logic_error("imaginary phase in stabilizer product");
      int sign = group[e].sign * g.sign * (prod.phase.exponent() == 2 ? -1 : 1);
      group.push_back({prod.pauli, sign});
    }
  }
  std::vector<std::uint64_t> seen;
  seen.reserve(group.size());
  for (const auto& e : group) seen.push_back(e.pauli.index());
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    // A repeated string means dependent generators; a repeated identity with
    // sign -1 is the stronger failure, so report that one first.
    for (std::size_t e = 1; e < group.size(); ++e)
      if (group[e].pauli.weight() == 0 && group[e].sign < 0)
        throw std::invalid_argument("generators produce -identity");
    throw std::invalid_argument("dependent generators");
  }
  return group;
}

bool StabilizerGroup::contains_unsigned(const PauliString& p) const {
  return std::binary_search(sorted_indices_.begin(), sorted_indices_.end(), p.index());
}

}  // namespace qcb
