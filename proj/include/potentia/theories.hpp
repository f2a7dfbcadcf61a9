#pragma once

#include "potentia/synthesis.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace potentia {

/// K, T, 4, .2, .3, 5 over p0 (and p1). Throws std::invalid_argument.
PropFormula axiom(std::string_view name);
/// "p0, p1 and p2 are not three independent unpushed buttons".
PropFormula three_buttons_formula();

struct ModalTheory {
  Theory theory;
  std::vector<std::string> axioms;  // schemes over K
  FrameClass frames;
};
ModalTheory modal_theory(Theory t);

struct Decision {
  bool theorem = false;
  std::size_t bound = 0;  // largest frame searched
  std::optional<Countermodel> countermodel;
};
/// `THEOREM(bound=k)` or `NONTHEOREM worlds=n class=<tag>`.
std::string to_string(const Decision& d);

/// Theoremhood is only ever bounded: no countermodel in the theory's frame
/// class up to `bound` worlds (S4: up to kMaxPreorderWorlds).
Decision decide(const PropFormula& phi, Theory t, std::size_t bound);
/// Least of S4 ⊆ S4.2 ⊆ S4.3 ⊆ S5 deciding φ a theorem; nullopt if none does.
std::optional<Theory> classify(const PropFormula& phi, std::size_t bound);

struct CorpusFormula {
  std::string name;
  PropFormula formula;
  std::optional<Theory> least;  // least theory proving it
};
/// Curated formulas with known classification.
std::vector<CorpusFormula> formula_corpus();

}  // namespace potentia
