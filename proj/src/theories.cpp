#include "potentia/theories.hpp"

#include <stdexcept>

namespace potentia {

PropFormula axiom(std::string_view name) {
  if (name == "K") return parse_prop("[](p0 -> p1) -> ([]p0 -> []p1)");
  if (name == "T") return parse_prop("[]p0 -> p0");
  if (name == "4") return parse_prop("[]p0 -> [][]p0");
  if (name == ".2") return parse_prop("<>[]p0 -> []<>p0");
  if (name == ".3") return parse_prop("(<>p0 & <>p1) -> <>((p0 & <>p1) | (p1 & <>p0))");
  if (name == "5") return parse_prop("<>[]p0 -> p0");
  throw std::invalid_argument("unknown axiom '" + std::string(name) + "'");
}

PropFormula three_buttons_formula() {
  return parse_prop(
      "~(~[]p0 & ~[]p1 & ~[]p2"
      " & <>([]p0 & ~[]p1 & ~[]p2) & <>([]p1 & ~[]p0 & ~[]p2) & <>([]p2 & ~[]p0 & ~[]p1))");
}

ModalTheory modal_theory(Theory t) {
  switch (t) {
    case Theory::S4: return {t, {"K", "T", "4"}, frame_class(t)};
    case Theory::S4_2: return {t, {"K", "T", "4", ".2"}, frame_class(t)};
    case Theory::S4_3: return {t, {"K", "T", "4", ".2", ".3"}, frame_class(t)};
    case Theory::S5: return {t, {"K", "T", "4", ".2", ".3", "5"}, frame_class(t)};
  }
  throw std::invalid_argument("unknown theory");
}

std::string to_string(const Decision& d) {
  if (d.theorem) return "THEOREM(bound=" + std::to_string(d.bound) + ")";
  return "NONTHEOREM worlds=" + std::to_string(d.countermodel->model.size()) +
         " class=" + to_string(d.countermodel->cls);
}

Decision decide(const PropFormula& phi, Theory t, std::size_t bound) {
  if (bound == 0) throw std::invalid_argument("bound must be positive");
  Decision d;
  d.bound = t == Theory::S4 ? std::min(bound, kMaxPreorderWorlds) : bound;
  d.countermodel = find_countermodel(phi, t, bound);
  d.theorem = !d.countermodel;
  return d;
}

std::optional<Theory> classify(const PropFormula& phi, std::size_t bound) {
  for (auto t : {Theory::S4, Theory::S4_2, Theory::S4_3, Theory::S5})
    if (decide(phi, t, bound).theorem) return t;
  return std::nullopt;
}

std::vector<CorpusFormula> formula_corpus() {
  std::vector<CorpusFormula> out;
  for (auto name : {"K", "T", "4"}) out.push_back({name, axiom(name), Theory::S4});
  out.push_back({".2", axiom(".2"), Theory::S4_2});
  out.push_back({".3", axiom(".3"), Theory::S4_3});
  out.push_back({"5", axiom("5"), Theory::S5});
  out.push_back({"T-dual", parse_prop("p0 -> <>p0"), Theory::S4});
  out.push_back({"4-dual", parse_prop("<><>p0 -> <>p0"), Theory::S4});
  out.push_back({"box-and", parse_prop("([]p0 & []p1) -> [](p0 & p1)"), Theory::S4});
  out.push_back({"buttons-meet", parse_prop("(<>[]p0 & <>[]p1) -> <>[](p0 & p1)"), Theory::S4_2});
  out.push_back({"pushes-comparable", parse_prop("[]([]p0 -> p1) | []([]p1 -> p0)"), Theory::S4_3});
  out.push_back({"three-buttons", three_buttons_formula(), Theory::S4_3});
  out.push_back({"5-textbook", parse_prop("<>p0 -> []<>p0"), Theory::S5});
  out.push_back({"B", parse_prop("p0 -> []<>p0"), Theory::S5});
  out.push_back({"switch-frozen", parse_prop("<>p0 -> []p0"), std::nullopt});
  out.push_back({"contingent", parse_prop("p0"), std::nullopt});
  out.push_back({"possible", parse_prop("<>p0 -> p0"), std::nullopt});
  return out;
}

}  // namespace potentia
