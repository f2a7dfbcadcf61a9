#include "doctest.h"

#include "frames.hpp"
#include "potentia/theories.hpp"

using namespace potentia;

namespace {

// Frames of a class up to `bound` worlds, built from the generators directly.
std::vector<Frame> class_frames(Theory t, std::size_t bound) {
  std::vector<Frame> out;
  for (std::size_t blocks = 0; blocks <= bound; ++blocks)
    for (std::size_t m = 1; m <= bound; ++m) {
      FrameShape sh;
      if (t == Theory::S5) sh = {FrameClass::Complete, blocks, 1};
      if (t == Theory::S4_3) sh = {FrameClass::Linear, blocks, m};
      if (t == Theory::S4_2) sh = {FrameClass::PreBoolean, blocks, m};
      if (blocks == 0 && sh.cls != FrameClass::PreBoolean) continue;
      if (blocks > 5 || sh.world_count() > bound) continue;
      out.push_back(generate_frame(sh));
    }
  if (t == Theory::S4)
    for (std::size_t n = 1; n <= std::min<std::size_t>(bound, 4); ++n)
      for (auto& f : testing_support::all_preorders(n)) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("axioms") {
  CHECK(to_string(axiom(".2")) == to_string(parse_prop("<>[]p0 -> []<>p0")));
  CHECK(axiom("T") == parse_prop("[]p0 -> p0"));
  CHECK(axiom("5") == parse_prop("<>[]p0 -> p0"));
  CHECK(variables(axiom("K")) == std::set<int>{0, 1});
  CHECK(variables(axiom(".3")) == std::set<int>{0, 1});
  CHECK_THROWS_AS(axiom("B"), std::invalid_argument);
  CHECK(modal_theory(Theory::S4_3).axioms.back() == ".3");
  CHECK(modal_theory(Theory::S5).frames == FrameClass::Complete);
}

TEST_CASE("decide examples") {
  auto d2 = decide(axiom(".2"), Theory::S4_2, 8);
  CHECK(d2.theorem);
  CHECK(to_string(d2) == "THEOREM(bound=8)");
  auto d3 = decide(axiom(".3"), Theory::S4_2, 8);
  REQUIRE_FALSE(d3.theorem);
  CHECK(d3.countermodel->shape == FrameShape{FrameClass::PreBoolean, 2, 1});
  CHECK_FALSE(eval_prop(d3.countermodel->model, d3.countermodel->world, axiom(".3")));
  CHECK(to_string(d3) == "NONTHEOREM worlds=4 class=preboolean");
  auto d5 = decide(axiom("5"), Theory::S4_3, 8);
  REQUIRE_FALSE(d5.theorem);
  CHECK(d5.countermodel->shape == FrameShape{FrameClass::Linear, 2, 1});
  CHECK(decide(axiom("T"), Theory::S4, 8).bound == kMaxPreorderWorlds);
  CHECK_THROWS_AS(decide(axiom("T"), Theory::S4, 0), std::invalid_argument);
}

TEST_CASE("classify examples") {
  CHECK(classify(axiom("4"), 8) == Theory::S4);
  CHECK(classify(axiom(".3"), 8) == Theory::S4_3);
  CHECK(classify(parse_prop("p0"), 8) == std::nullopt);
}

TEST_CASE("corpus classification, monotonicity and re-verified countermodels") {
  for (const auto& c : formula_corpus()) {
    CAPTURE(c.name);
    bool proved = false;
    for (auto t : {Theory::S4, Theory::S4_2, Theory::S4_3, Theory::S5}) {
      auto d = decide(c.formula, t, 8);
      if (proved) CHECK(d.theorem);  // S4 ⊆ S4.2 ⊆ S4.3 ⊆ S5
      proved = proved || d.theorem;
      if (!d.theorem) {
        const auto& M = *d.countermodel;
        CHECK_FALSE(eval_prop(M.model, M.world, c.formula));
        auto p = frame_properties(M.model.frame());
        CHECK(p.reflexive);
        CHECK(p.transitive);
        if (t == Theory::S5) CHECK(p.complete);
        if (t == Theory::S4_3) CHECK(p.linear_preorder);
        if (t == Theory::S4_2) CHECK(is_pre_boolean_algebra(M.model.frame()));
      }
    }
    CHECK(classify(c.formula, 8) == c.least);
  }
}

TEST_CASE("decide agrees with exhaustive frame validity") {
  for (const auto& c : formula_corpus()) {
    if (variables(c.formula).size() > 2) continue;
    CAPTURE(c.name);
    for (auto t : {Theory::S4, Theory::S4_2, Theory::S4_3, Theory::S5}) {
      const std::size_t bound = t == Theory::S4 ? 4 : 6;
      bool valid = true;
      for (const auto& f : class_frames(t, bound)) valid = valid && frame_valid(f, c.formula);
      CHECK(decide(c.formula, t, bound).theorem == valid);
    }
  }
}

TEST_CASE("three buttons separate S4.2 from S4.3") {
  auto f = three_buttons_formula();
  auto d = decide(f, Theory::S4_2, 16);
  REQUIRE_FALSE(d.theorem);
  CHECK(d.countermodel->model.size() <= 16);
  CHECK_FALSE(eval_prop(d.countermodel->model, d.countermodel->world, f));
  CHECK(is_pre_boolean_algebra(d.countermodel->model.frame()));
  CHECK(decide(f, Theory::S4_3, 8).theorem);
}
