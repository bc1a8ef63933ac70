#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qcb {

// i^b for b in {0,1,2,3}.
class Phase {
 public:
  constexpr Phase() = default;
  constexpr explicit Phase(int exponent) : b_(((exponent % 4) + 4) % 4) {}
  constexpr int exponent() const { return b_; }
  constexpr Phase operator*(Phase o) const { return Phase(b_ + o.b_); }
  constexpr bool operator==(const Phase&) const = default;

 private:
  int b_ = 0;
};

// Unsigned n-qubit Pauli string. Symbols are coded I=0, Z=1, X=2, Y=3 (the GF(4)
// identification 0, 1, w, w^2), so the product string is the XOR of codes.
// Packed as two bit planes: z holds code bit 0, x holds code bit 1.
class PauliString {
 public:
  static constexpr int kMaxQubits = 32;

  PauliString() = default;
  explicit PauliString(int n);  // all-identity

  static PauliString from_string(std::string_view s);  // "XZZXI"
  // Position in the lexicographic order of enumerate_basis.
  static PauliString from_index(std::uint64_t index, int n);
  std::uint64_t index() const;

  int size() const { return n_; }
  int symbol(int m) const;
  void set(int m, int code);
  int weight() const;
  std::uint64_t support_mask() const { return x_ | z_; }
  std::uint64_t x_bits() const { return x_; }
  std::uint64_t z_bits() const { return z_; }
  std::string str() const;

  // Unsigned product (GF(4) addition).
  PauliString operator^(const PauliString& o) const;
  bool operator==(const PauliString& o) const = default;

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

void check_same_length(const PauliString& a, const PauliString& b);

struct PauliProduct {
  PauliString pauli;
  Phase phase;
};

// E_a E_b = i^b E_c.
PauliProduct multiply(const PauliString& a, const PauliString& b);
bool commutes(const PauliString& a, const PauliString& b);

// (i, j, t, p): weights, support overlap, and coordinates with equal non-identity symbols.
struct OverlapProfile {
  int i = 0, j = 0, t = 0, p = 0;
  bool commuting() const { return (t - p) % 2 == 0; }
  int product_weight() const { return i + j - t - p; }
  bool operator==(const OverlapProfile&) const = default;
};

OverlapProfile overlap_profile(const PauliString& a, const PauliString& b);

// All 4^n strings in lexicographic order (identity first).
std::vector<PauliString> enumerate_basis(int n, int cap = 8);

struct SignedPauli {
  PauliString pauli;
  int sign = 1;
  static SignedPauli parse(std::string_view s);  // "+XZZXI", "-YY", "ZZ"
  std::string str() const;
};

class StabilizerGroup {
 public:
  explicit StabilizerGroup(std::vector<SignedPauli> generators);
  static StabilizerGroup parse(const std::vector<std::string>& lines);

  int n() const { return n_; }
  int k() const { return k_; }
  const std::vector<SignedPauli>& generators() const { return gens_; }
  // All 2^(n-k) signed elements, identity first.
  const std::vector<SignedPauli>& elements() const { return elements_; }
  bool contains_unsigned(const PauliString& p) const;

 private:
  std::vector<SignedPauli> expand() const;

  std::vector<SignedPauli> gens_;
  int n_ = 0;
  int k_ = 0;
  std::vector<SignedPauli> elements_;
  std::vector<std::uint64_t> sorted_indices_;
};

}  // namespace qcb
