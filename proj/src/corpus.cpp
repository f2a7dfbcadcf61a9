#include "potentia/corpus.hpp"

#include "potentia/control.hpp"
#include "potentia/settheory.hpp"

#include <stdexcept>

namespace potentia {

namespace {

Term tv(const std::string& v) { return Term::variable(v); }

// ∃x (∀y ¬R(x, y) ∧ U(x))
FOFormula last_has(const std::string& rel, const std::string& unary) {
  auto no_succ = FOFormula::forall("y", FOFormula::make_not(FOFormula::atom(rel, {tv("x"), tv("y")})));
  return FOFormula::exists("x", FOFormula::make_and(no_succ, FOFormula::atom(unary, {tv("x")})));
}

}  // namespace

PotentialistSystem build_counter_system(std::size_t worlds, std::size_t bits) {
  if (worlds == 0 || worlds > 64) throw std::invalid_argument("counter system needs 1..64 worlds");
  if (bits > 16) throw std::invalid_argument("counter system supports at most 16 bits");
  std::vector<RelationSymbol> rels{{"S", 2}};
  for (std::size_t b = 0; b < bits; ++b) rels.push_back({"P" + std::to_string(b), 1});
  Signature sig(rels);

  std::vector<Structure> ws;
  for (std::size_t k = 0; k < worlds; ++k) {
    std::vector<ElementId> dom;
    std::vector<std::vector<std::vector<ElementId>>> rel(rels.size());
    for (ElementId i = 0; i <= k; ++i) {
      dom.push_back(i);
      if (i < k) rel[0].push_back({i, i + 1});
      for (std::size_t b = 0; b < bits; ++b)
        if ((i >> b) & 1) rel[b + 1].push_back({i});
    }
    ws.emplace_back(sig, std::move(dom), std::move(rel));
  }
  std::vector<std::string> names;
  for (std::size_t k = 0; k < worlds; ++k) names.push_back("c" + std::to_string(k));
  return check_potentialist(std::move(ws), AccessMode::Substructure, std::move(names));
}

std::vector<FOFormula> counter_switches(std::size_t bits) {
  std::vector<FOFormula> out;
  for (std::size_t b = 0; b < bits; ++b) out.push_back(last_has("S", "P" + std::to_string(b)));
  return out;
}

PotentialistSystem build_grid_system(std::size_t side) {
  if (side == 0 || side * side > 64) throw std::invalid_argument("grid side must be 1..8");
  Signature sig({{"S", 2}, {"P", 1}, {"T", 2}, {"Q", 1}});
  std::vector<Structure> ws;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j) {
      std::vector<ElementId> dom;
      std::vector<std::vector<std::vector<ElementId>>> rel(4);
      for (ElementId a = 0; a <= i; ++a) {
        dom.push_back(2 * a);
        if (a < i) rel[0].push_back({2 * a, 2 * a + 2});
        if (a & 1) rel[1].push_back({2 * a});
      }
      for (ElementId b = 0; b <= j; ++b) {
        dom.push_back(2 * b + 1);
        if (b < j) rel[2].push_back({2 * b + 1, 2 * b + 3});
        if (b & 1) rel[3].push_back({2 * b + 1});
      }
      ws.emplace_back(sig, std::move(dom), std::move(rel));
      names.push_back("g" + std::to_string(i) + "_" + std::to_string(j));
    }
  return check_potentialist(std::move(ws), AccessMode::Substructure, std::move(names));
}

std::vector<FOFormula> grid_switches() { return {last_has("S", "P"), last_has("T", "Q")}; }

std::vector<CorpusEntry> test_corpus() {
  std::vector<CorpusEntry> out;
  {
    auto sw = counter_switches(2);
    out.push_back({"counter8", build_counter_system(8, 2), 0, sw, {switches_dial_formulas(sw)}});
  }
  {
    auto sw = counter_switches(2);
    out.push_back({"counter16", build_counter_system(16, 2), 0, sw, {switches_dial_formulas(sw)}});
  }
  {
    auto sw = grid_switches();
    out.push_back({"grid4", build_grid_system(4), 0, sw, {switches_dial_formulas(sw)}});
  }
  out.push_back({"rank4", build_rank_system(4), 0, {}, {height_dial(2, 4)}});
  return out;
}

}  // namespace potentia
