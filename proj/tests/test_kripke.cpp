#include "doctest.h"
#include "potentia/kripke.hpp"
#include "frames.hpp"

using namespace potentia;

namespace {

const auto K = parse_prop("[](p0 -> p1) -> ([]p0 -> []p1)");
const auto T = parse_prop("[]p0 -> p0");
const auto FOUR = parse_prop("[]p0 -> [][]p0");
const auto DOT2 = parse_prop("<>[]p0 -> []<>p0");
const auto DOT3 = parse_prop("(<>p0 & <>p1) -> <>((p0 & <>p1) | (p1 & <>p0))");
const auto FIVE = parse_prop("<>[]p0 -> p0");

Frame chain2() {
  Frame f(2);
  f.set_access(0, 0);
  f.set_access(0, 1);
  f.set_access(1, 1);
  return f;
}

Frame fork3() {
  Frame f(3);
  for (std::size_t w = 0; w < 3; ++w) f.set_access(w, w);
  f.set_access(0, 1);
  f.set_access(0, 2);
  return f;
}

}  // namespace

TEST_CASE("eval_prop") {
  KripkeModel m(chain2(), 1);
  m.set(1, 0);
  CHECK(eval_prop(m, 0, PropFormula::top()));
  CHECK(eval_prop(m, 0, parse_prop("<>p0")));
  CHECK_FALSE(eval_prop(m, 0, parse_prop("[]p0")));
  CHECK(eval_prop(m, 1, parse_prop("[]p0")));
  CHECK_THROWS_AS(eval_prop(m, 2, T), std::out_of_range);
  CHECK(m.true_at(1) == std::set<int>{0});
  CHECK_THROWS_AS(m.set(0, 1), std::out_of_range);
}

TEST_CASE("T holds on reflexive models under every valuation") {
  Frame f = fork3();
  for (int code = 0; code < 8; ++code) {
    KripkeModel m(f, 1);
    for (int w = 0; w < 3; ++w) m.set(w, 0, (code >> w) & 1);
    for (std::size_t w = 0; w < 3; ++w) CHECK(eval_prop(m, w, T));
  }
}

TEST_CASE("frame_properties") {
  Frame id(3);
  for (std::size_t w = 0; w < 3; ++w) id.set_access(w, w);
  auto p = frame_properties(id);
  CHECK(p.reflexive);
  CHECK(p.transitive);
  CHECK(p.convergent);
  CHECK_FALSE(p.complete);
  CHECK_FALSE(p.linear_preorder);

  auto q = frame_properties(fork3());
  CHECK_FALSE(q.convergent);

  auto total = frame_properties(generate_frame({FrameClass::Complete, 4, 1}));
  CHECK(total == FrameProperties{true, true, true, true, true});
}

TEST_CASE("frame_valid") {
  CHECK(frame_valid(fork3(), FOUR));
  CHECK_FALSE(frame_valid(fork3(), DOT2));
  // the witnessing valuation: p0 only at w1
  KripkeModel m(fork3(), 1);
  m.set(1, 0);
  CHECK_FALSE(eval_prop(m, 0, DOT2));

  auto lin = generate_frame({FrameClass::Linear, 3, 2});
  CHECK(frame_valid(lin, DOT3));
  CHECK_FALSE(frame_valid(lin, FIVE));
  CHECK(frame_valid(generate_frame({FrameClass::Complete, 3, 1}), FIVE));
}

TEST_CASE("clusters") {
  auto c = clusters(generate_frame({FrameClass::Complete, 4, 1}));
  CHECK(c.count() == 1);

  Frame id(4);
  for (std::size_t w = 0; w < 4; ++w) id.set_access(w, w);
  auto d = clusters(id);
  CHECK(d.count() == 4);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) CHECK(d.order[a][b] == (a == b));
  }

  auto e = clusters(generate_frame({FrameClass::Linear, 2, 2}));
  REQUIRE(e.count() == 2);
  CHECK(e.members[0] == std::vector<std::size_t>{0, 1});
  CHECK(e.members[1] == std::vector<std::size_t>{2, 3});
  CHECK(e.order[0][1]);
  CHECK_FALSE(e.order[1][0]);

  CHECK_THROWS_AS(clusters(Frame(2)), std::invalid_argument);
}

TEST_CASE("is_pre_boolean_algebra") {
  CHECK(is_pre_boolean_algebra(generate_frame({FrameClass::Complete, 3, 1})));
  CHECK(is_pre_boolean_algebra(generate_frame({FrameClass::PreBoolean, 2, 1})));
  CHECK_FALSE(is_pre_boolean_algebra(generate_frame({FrameClass::Linear, 3, 1})));
  CHECK(is_pre_boolean_algebra(generate_frame({FrameClass::Linear, 2, 3})));  // 2 = 2^1
  CHECK_FALSE(is_pre_boolean_algebra(fork3()));  // no top: not a lattice
  for (std::size_t a = 0; a <= 3; ++a) {
    for (std::size_t m = 1; m <= 3; ++m) CHECK(is_pre_boolean_algebra(generate_frame({FrameClass::PreBoolean, a, m})));
  }
}

TEST_CASE("generate_frame") {
  auto c = generate_frame({FrameClass::Complete, 4, 1});
  for (std::size_t w = 0; w < 4; ++w) CHECK(c.successors(w) == 0xF);
  auto l = generate_frame({FrameClass::Linear, 2, 1});
  CHECK(l == chain2());
  auto d = generate_frame({FrameClass::PreBoolean, 2, 1});
  REQUIRE(d.size() == 4);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) CHECK(d.access(a, b) == ((a & ~b) == 0));
  }
  CHECK_THROWS(generate_frame({FrameClass::Complete, 0, 1}));
  CHECK_THROWS(generate_frame({FrameClass::Linear, 2, 0}));
  CHECK(world_label({FrameClass::PreBoolean, 2, 2}, 7) == "w{0,1}_1");
  CHECK(world_label({FrameClass::Linear, 2, 2}, 3) == "w1_1");
}

TEST_CASE("clusters of linear(c, m) are c blocks of size m") {
  for (std::size_t c = 1; c <= 4; ++c) {
    for (std::size_t m = 1; m <= 3; ++m) {
      auto d = clusters(generate_frame({FrameClass::Linear, c, m}));
      REQUIRE(d.count() == c);
      for (const auto& mem : d.members) CHECK(mem.size() == m);
    }
  }
}

TEST_CASE("property: frame validity matches first-order correspondents on all preorders up to 4 worlds") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& f : testing_support::all_preorders(n)) {
      auto p = frame_properties(f);
      REQUIRE(p.reflexive);
      REQUIRE(p.transitive);
      CHECK(frame_valid(f, K));
      CHECK(frame_valid(f, T));
      CHECK(frame_valid(f, FOUR));
      CHECK(frame_valid(f, DOT2) == p.convergent);
      // .3 corresponds to: successors of any world are pairwise comparable
      bool no_branching = true;
      for (std::size_t w = 0; w < n; ++w) {
        for (std::size_t u = 0; u < n; ++u) {
          for (std::size_t v = 0; v < n; ++v) {
            if (f.access(w, u) && f.access(w, v) && !f.access(u, v) && !f.access(v, u)) no_branching = false;
          }
        }
      }
      CHECK(frame_valid(f, DOT3) == no_branching);
      // 5 in the ◇□p→p form corresponds to symmetry
      bool symmetric = true;
      for (std::size_t w = 0; w < n; ++w) {
        for (std::size_t u = 0; u < n; ++u) symmetric = symmetric && (f.access(w, u) == f.access(u, w));
      }
      CHECK(frame_valid(f, FIVE) == symmetric);
      if (p.linear_preorder) CHECK(frame_valid(f, DOT3));
      if (p.complete) CHECK(frame_valid(f, FIVE));
    }
  }
}
