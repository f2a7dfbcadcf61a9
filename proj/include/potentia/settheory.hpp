#pragma once

#include "potentia/control.hpp"
#include "potentia/potentialist.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace potentia {

/// Hereditarily finite set, stored as its Ackermann code: y ∈ x iff bit
/// code(y) of code(x) is set. Codes order V_n canonically, and V_n is exactly
/// the codes below the n-th tower of twos (0, 1, 2, 4, 16, 65536). Sets of
/// rank ≤ 4 are representable.
class HFSet {
 public:
  HFSet() = default;  // ∅
  static HFSet from_code(std::uint64_t code);
  /// Throws std::length_error if the result has rank > 4.
  static HFSet from_children(const std::vector<HFSet>& children);

  std::uint64_t code() const { return code_; }
  /// Members in canonical (code) order.
  std::vector<HFSet> children() const;
  std::size_t size() const;
  int rank() const;
  bool contains(const HFSet& y) const;
  bool is_transitive() const;
  bool is_ordinal() const;

  friend auto operator<=>(const HFSet&, const HFSet&) = default;

 private:
  explicit HFSet(std::uint64_t c) : code_(c) {}
  std::uint64_t code_ = 0;
};

/// Brace notation with members in canonical order: {}, {{}}, {{},{{}}}.
std::string to_string(const HFSet& h);
/// Accepts any member order and duplicates; throws std::invalid_argument.
HFSet parse_hfset(std::string_view text);

inline constexpr int kMaxRank = 5;

/// |V_n| for n ≤ 5.
std::uint64_t v_size(int n);
/// Elements of V_n (sets of rank < n) in canonical order. Throws
/// std::length_error if n exceeds `cap` or the representable limit 5.
std::vector<HFSet> build_v(int n, int cap = kMaxRank);
/// The structure (V_n, ∈); element ids are codes.
Structure v_structure(int n);

/// Worlds V_0..V_N under the full linear order, named V0..VN.
PotentialistSystem build_rank_system(int N, int cap = kMaxRank);

/// Transitive subsets of V_N under inclusion. For N ≤ 3 all of them; for
/// larger N the worlds generated from ∅ by adding the transitive closure of a
/// seed set and by unions, at most `cap` worlds. Worlds are ordered by size,
/// then by elements; the empty world comes first.
PotentialistSystem build_transitive_system(int N, const std::vector<HFSet>& seeds = {}, std::size_t cap = 64);

/// Transitive closure of {h}: h and everything hereditarily below it.
std::vector<HFSet> downward_closure(const HFSet& h);

/// "x is transitive and every member of x is transitive", free in `var`.
FOFormula is_ordinal_formula(const std::string& var);
/// There are at least k ordinals: some ordinal has k−1 distinct members.
FOFormula ordinal_count_at_least(int k);
/// d_j: the number of ordinals is ≡ j (mod m), as a disjunction of exact
/// counts c ≤ N. m = 1 gives {⊤}.
std::vector<FOFormula> height_dial(int m, int N);
/// Long ratchet r_v = ordinal_count_at_least(v), v = 0..N, cut down by
/// long_ratchet_formulas(n, m). Throws std::invalid_argument unless N ≥ m·n+1.
RatchetExtraction rank_ratchet(int n, int m, int N);

/// ∃x χ_h(x) where χ_h(x) says x has exactly the members described by the χ_c.
FOFormula describe_set(const HFSet& h);

struct ButtonFamily {
  std::vector<HFSet> sets;
  std::vector<FOFormula> buttons;  // b_i = describe_set(sets[i])
  Companion companion;
};
/// The first k sets of rank N−1 (pairwise ∈-incomparable, having equal rank),
/// with companion dial {⊤}. Throws std::invalid_argument if there are fewer than k.
ButtonFamily transitive_buttons(int k, int N);

}  // namespace potentia
