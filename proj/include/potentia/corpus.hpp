#pragma once

#include "potentia/potentialist.hpp"

#include <string>
#include <vector>

namespace potentia {

/// Chain of `worlds` worlds; world k has elements 0..k, the successor
/// relation S(i, i+1) and unary P_b(i) iff bit b of i is set. The last element
/// of world k is k, so the switch "the last element has P_b" reads bit b of k.
PotentialistSystem build_counter_system(std::size_t worlds, std::size_t bits);
/// s_b = ∃x (∀y ¬S(x, y) ∧ P_b(x)), b < bits.
std::vector<FOFormula> counter_switches(std::size_t bits);

/// Product of two counter chains of length `side`: world (i, j) sees (i', j')
/// iff i ≤ i' and j ≤ j'. Convergent but not linear. Elements 2i are the
/// first chain (relation S, unary P), 2j+1 the second (relation T, unary Q).
PotentialistSystem build_grid_system(std::size_t side);
/// Parity of each coordinate: {last S-element has P, last T-element has Q}.
std::vector<FOFormula> grid_switches();

struct CorpusEntry {
  std::string name;
  PotentialistSystem system;
  std::size_t base = 0;
  std::vector<FOFormula> switches;  // verified independent at `base`
  std::vector<std::vector<FOFormula>> dials;  // verified at `base`
};

/// The small systems with known controls used by the tests and the demo.
std::vector<CorpusEntry> test_corpus();

}  // namespace potentia
