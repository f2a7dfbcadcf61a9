#pragma once

#include "potentia/potentialist.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace potentia {

// Control statements over a finite potentialist system, verified at a base
// world w by exhausting the worlds reachable from w.
//
// Universal clauses (exactly-one for dials, implications between ratchet
// stages, ◇□b for buttons) must hold at every reachable world. Adjustment
// clauses ("from here any pattern / value / push is possible") are read with
// representative worlds: for every controlled state there must be a reachable
// world in that state from which every required successor state is reachable,
// and the base world must be such a world for its own state. The literal
// "from every world" reading cannot hold for a dial or switch in a finite
// system, whose maximal worlds can no longer move.

/// Worlds (as a bitmask) where each sentence holds.
std::vector<WorldSet> truth_sets(const PotentialistSystem& s, const std::vector<FOFormula>& sentences);
WorldSet reachable(const PotentialistSystem& s, std::size_t w);

bool verify_switch(const PotentialistSystem& s, std::size_t w, const FOFormula& sw);
bool verify_independent_switches(const PotentialistSystem& s, std::size_t w, const std::vector<FOFormula>& family);
bool verify_dial(const PotentialistSystem& s, const std::vector<FOFormula>& dial, std::size_t w = 0);

bool verify_button(const PotentialistSystem& s, std::size_t w, const FOFormula& b);
bool verify_pure_button(const PotentialistSystem& s, std::size_t w, const FOFormula& b);
/// Pushed at u iff □b holds at u.
bool is_pushed(const PotentialistSystem& s, std::size_t u, const FOFormula& b);

enum class CompanionKind { Dial, Switches };

struct Companion {
  CompanionKind kind = CompanionKind::Dial;
  std::vector<FOFormula> formulas;

  static Companion trivial_dial() { return {CompanionKind::Dial, {FOFormula::top()}}; }
  /// Number of settings: dial values, or 2^k switch patterns.
  std::size_t settings() const;
};

/// Verifies the companion on its own (as a dial, or as independent switches).
bool verify_companion(const PotentialistSystem& s, std::size_t w, const Companion& c);

bool verify_independent_buttons(const PotentialistSystem& s, std::size_t w, const std::vector<FOFormula>& buttons,
                                const Companion& companion);
/// r_1..r_n (r[0] is r_1).
bool verify_ratchet(const PotentialistSystem& s, std::size_t w, const std::vector<FOFormula>& r,
                    const Companion& companion);
/// r_0..r_L: graded, monotone chain of buttons with r_0 true everywhere reachable.
bool verify_long_ratchet(const PotentialistSystem& s, std::size_t w, const std::vector<FOFormula>& r);

/// d_j = ⋀_i (s_i if bit i of j, else ¬s_i), conjuncts listed from s_{m-1} down.
std::vector<FOFormula> switches_dial_formulas(const std::vector<FOFormula>& switches);
/// s_i = ⋁ { d_j : j < n, bit i of j set }. Throws std::invalid_argument unless 2^m ≤ n.
std::vector<FOFormula> dial_switch_formulas(const std::vector<FOFormula>& dial, std::size_t m);

struct RatchetExtraction {
  std::vector<FOFormula> ratchet;  // R_k = r_{m·k}, k = 1..n
  std::vector<FOFormula> dial;     // D_j: volume ≡ j (mod m)
};
/// Throws std::invalid_argument unless m ≥ 1 and m·n ≤ L.
RatchetExtraction long_ratchet_formulas(const std::vector<FOFormula>& r, std::size_t n, std::size_t m);

/// Value index of the companion at each world (dial value, or switch pattern
/// with bit i for s_i); std::nullopt where a dial has no unique value.
std::vector<std::optional<std::size_t>> companion_values(const PotentialistSystem& s, const Companion& c);

/// Per world u, the set of family patterns realized at worlds accessible from u.
/// For a dial the "pattern" is the index of the true sentence (or all
/// sentences' bits if not exactly one holds).
std::vector<std::set<std::uint64_t>> reachable_patterns(const PotentialistSystem& s,
                                                       const std::vector<FOFormula>& family, bool as_dial);

enum class ControlKind { SwitchFamily, Dial, ButtonFamily, Ratchet, LongRatchet };
std::string to_string(ControlKind k);

/// A control family bound to a base world. The verified flag is only set by
/// certify(), which re-runs the matching verifier.
class ControlCertificate {
 public:
  ControlCertificate(ControlKind kind, std::vector<FOFormula> formulas, std::size_t base_world,
                     std::optional<Companion> companion = std::nullopt, std::string system = {});

  ControlKind kind() const { return kind_; }
  const std::vector<FOFormula>& formulas() const { return formulas_; }
  const std::optional<Companion>& companion() const { return companion_; }
  std::size_t base_world() const { return base_; }
  const std::string& system() const { return system_; }
  bool verified() const { return verified_; }

 private:
  friend ControlCertificate certify(const PotentialistSystem&, ControlCertificate);
  ControlKind kind_;
  std::vector<FOFormula> formulas_;
  std::size_t base_;
  std::optional<Companion> companion_;
  std::string system_;
  bool verified_ = false;
};

/// Runs the verifier for the certificate's kind; returns a copy whose
/// verified flag records the outcome.
ControlCertificate certify(const PotentialistSystem& s, ControlCertificate c);

/// Certificate conversions; throw std::invalid_argument on unverified input
/// or a kind mismatch. Outputs are unverified until certified.
ControlCertificate switches_to_dial(const ControlCertificate& switches);
ControlCertificate dial_to_switches(const ControlCertificate& dial, std::size_t m);
std::pair<ControlCertificate, ControlCertificate> long_ratchet_extract(const ControlCertificate& long_ratchet,
                                                                       std::size_t n, std::size_t m);

}  // namespace potentia
