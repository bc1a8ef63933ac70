#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qcbounds/pauli.hpp"
#include "qcbounds/rational.hpp"

namespace qcb::test {

struct KnownCode {
  std::string name;
  int n;
  long K;
  int delta;
  std::vector<std::string> generators;
};

inline const std::vector<KnownCode>& known_codes() {
  static const std::vector<KnownCode> codes = {
      {"bell", 2, 1, 2, {"XX", "ZZ"}},
      {"ghz", 3, 1, 2, {"XXX", "ZZI", "IZZ"}},
      {"five_qubit", 5, 2, 3, {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"}},
      {"hexacode", 6, 1, 4, {"XZZZZZ", "ZXIIZZ", "ZIXZIZ", "ZIZXZI", "ZZIZXI", "ZZZIIX"}},
      {"steane", 7, 2, 3, {"IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"}},
  };
  return codes;
}

inline StabilizerGroup group_of(const KnownCode& c) { return StabilizerGroup::parse(c.generators); }

// Random stabilizer group on n qubits with n - k generators: draws random
// strings and keeps those that commute with the chosen ones and lie outside the
// unsigned group generated so far. Signs are random.
inline StabilizerGroup random_stabilizer(int n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> pick(1, (std::uint64_t{1} << (2 * n)) - 1);
  std::vector<SignedPauli> gens;
  std::vector<PauliString> span{PauliString(n)};
  while (static_cast<int>(gens.size()) < n - k) {
    const PauliString cand = PauliString::from_index(pick(rng), n);
    bool ok = true;
    for (const auto& g : gens) ok = ok && commutes(g.pauli, cand);
    for (const auto& s : span) ok = ok && !(s == cand);
    if (!ok) continue;
    const std::size_t size = span.size();
    for (std::size_t i = 0; i < size; ++i) span.push_back(span[i] ^ cand);
    gens.push_back({cand, rng() % 2 ? 1 : -1});
  }
  return StabilizerGroup(gens);
}

inline Rational random_rational(std::mt19937_64& rng, int num = 20, int den = 9) {
  std::uniform_int_distribution<int> a(-num, num), b(1, den);
  Rational r(a(rng), b(rng));
  r.canonicalize();
  return r;
}

}  // namespace qcb::test
