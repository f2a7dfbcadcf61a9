#include "doctest.h"

#include "naive_eval.hpp"
#include "potentia/control.hpp"
#include "potentia/kripke.hpp"
#include "potentia/settheory.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

using namespace potentia;

namespace {

// V_{k+1} = P(V_k) over brace strings with members in arbitrary (string) order.
std::vector<std::string> oracle_v(int n) {
  std::vector<std::string> v;
  for (int k = 0; k < n; ++k) {
    std::vector<std::string> next;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << v.size()); ++mask) {
      std::vector<std::string> members;
      for (std::size_t i = 0; i < v.size(); ++i)
        if ((mask >> i) & 1) members.push_back(v[i]);
      std::sort(members.rbegin(), members.rend());
      std::string s = "{";
      for (std::size_t i = 0; i < members.size(); ++i) s += (i ? "," : "") + members[i];
      next.push_back(s + "}");
    }
    v = std::move(next);
  }
  return v;
}

// von Neumann natural k.
HFSet natural(int k) {
  std::vector<HFSet> members;
  for (int i = 0; i < k; ++i) members.push_back(natural(i));
  return HFSet::from_children(members);
}

bool transitive_domain(const Structure& m) {
  for (auto e : m.domain())
    for (auto c : HFSet::from_code(e).children())
      if (!m.contains(c.code())) return false;
  return true;
}

}  // namespace

TEST_CASE("HFSet basics and text format") {
  HFSet e;
  CHECK(e.code() == 0);
  CHECK(e.rank() == 0);
  CHECK(to_string(e) == "{}");
  auto one = HFSet::from_children({e});
  CHECK(to_string(one) == "{{}}");
  auto two = HFSet::from_children({one, e, e});
  CHECK(to_string(two) == "{{},{{}}}");
  CHECK(two.size() == 2);
  CHECK(two.rank() == 2);
  CHECK(two.is_ordinal());
  CHECK(HFSet::from_children({one}).is_transitive() == false);
  CHECK(parse_hfset("{ {{}} , {} }") == two);
  CHECK(parse_hfset("{{},{}}") == one);
  CHECK_THROWS_AS(parse_hfset("{{}"), std::invalid_argument);
  CHECK_THROWS_AS(parse_hfset("{x}"), std::invalid_argument);
  CHECK_THROWS_AS(HFSet::from_code(65536), std::length_error);
  CHECK(HFSet::from_code(65535).rank() == 4);
}

TEST_CASE("build_v matches powerset iteration") {
  const std::vector<std::uint64_t> sizes{0, 1, 2, 4, 16};
  for (int n = 0; n <= 4; ++n) {
    auto v = build_v(n);
    CHECK(v.size() == sizes[n]);
    CHECK(v_size(n) == sizes[n]);
    CHECK(std::is_sorted(v.begin(), v.end()));
    std::set<std::uint64_t> got, want;
    for (auto& h : v) {
      got.insert(h.code());
      CHECK(h.rank() < n);
    }
    for (auto& s : oracle_v(n)) want.insert(parse_hfset(s).code());
    CHECK(got == want);
  }
  REQUIRE(build_v(1).size() == 1);
  CHECK(to_string(build_v(1)[0]) == "{}");
  std::vector<std::string> v3;
  for (auto& h : build_v(3)) v3.push_back(to_string(h));
  CHECK(v3 == std::vector<std::string>{"{}", "{{}}", "{{{}}}", "{{},{{}}}"});
  CHECK(v_size(5) == 65536);
  CHECK_THROWS_AS(build_v(5, 4), std::length_error);
  CHECK_THROWS_AS(build_v(6), std::length_error);
}

TEST_CASE("rank system") {
  auto s = build_rank_system(2);
  CHECK(s.size() == 3);
  CHECK(s.world(0).domain().empty());
  CHECK(s.world(1).domain().size() == 1);
  CHECK(s.name(2) == "V2");
  auto p = frame_properties(s.frame());
  CHECK(p.linear_preorder);
  CHECK(p.convergent);
  CHECK_THROWS_AS(build_rank_system(3, 2), std::length_error);

  auto s4 = build_rank_system(4);
  std::vector<Structure> ws(s4.worlds().begin(), s4.worlds().end());
  auto rep = coherence(ws);
  REQUIRE(rep.coherent);
  CHECK(*rep.limit == v_structure(4));
  CHECK(*rep.limit == s4.world(4));
  // mem is true membership
  for (auto x : s4.world(4).domain())
    for (auto y : s4.world(4).domain()) {
      std::vector<ElementId> t{x, y};
      CHECK(s4.world(4).holds(0, t) == HFSet::from_code(y).contains(HFSet::from_code(x)));
    }
}

TEST_CASE("transitive system") {
  auto s2 = build_transitive_system(2);
  CHECK(s2.size() == 3);
  CHECK(s2.world(0).domain().empty());
  CHECK(s2.world(2).domain().size() == 2);
  CHECK(frame_properties(s2.frame()).linear_preorder);

  auto s3 = build_transitive_system(3);
  // brute force over the 16 subsets of V_3
  std::size_t want = 0;
  auto v3 = build_v(3);
  for (unsigned mask = 0; mask < 16; ++mask) {
    bool ok = true;
    for (unsigned i = 0; i < 4; ++i)
      if ((mask >> i) & 1)
        for (auto c : v3[i].children()) {
          auto pos = std::find(v3.begin(), v3.end(), c) - v3.begin();
          if (!((mask >> pos) & 1)) ok = false;
        }
    want += ok;
  }
  CHECK(s3.size() == want);
  auto p = frame_properties(s3.frame());
  CHECK(p.convergent);
  CHECK_FALSE(p.linear_preorder);
  for (auto& w : s3.worlds()) CHECK(transitive_domain(w));
  for (std::size_t a = 0; a < s3.size(); ++a)
    for (std::size_t b = 0; b < s3.size(); ++b)
      CHECK(s3.frame().access(a, b) == is_substructure(s3.world(a), s3.world(b)));

  auto s4 = build_transitive_system(4, {HFSet::from_code(8), HFSet::from_code(5)});
  CHECK(s4.size() > 1);
  for (auto& w : s4.worlds()) CHECK(transitive_domain(w));
  CHECK(frame_properties(s4.frame()).convergent);
  CHECK_THROWS_AS(build_transitive_system(4, {HFSet::from_code(8), HFSet::from_code(5)}, 2), std::length_error);
}

TEST_CASE("downward closure") {
  auto d = downward_closure(HFSet::from_code(4));  // {{{}}}
  std::vector<std::uint64_t> codes;
  for (auto& h : d) codes.push_back(h.code());
  std::sort(codes.begin(), codes.end());
  CHECK(codes == std::vector<std::uint64_t>{0, 1, 2, 4});
}

TEST_CASE("ordinal counts") {
  CHECK(ordinal_count_at_least(0) == FOFormula::top());
  auto s = build_rank_system(4);
  CHECK(eval_fo(s, 1, ordinal_count_at_least(1)));
  CHECK_FALSE(eval_fo(s, 2, ordinal_count_at_least(3)));
  // ordinals of V_n are the naturals below n
  for (int n = 0; n <= 4; ++n) {
    int count = 0;
    for (auto& h : build_v(n)) count += h.is_ordinal();
    CHECK(count == n);
    auto v = build_v(n);
    for (int k = 0; k < n; ++k) CHECK(std::find(v.begin(), v.end(), natural(k)) != v.end());
    for (int k = 0; k <= 5; ++k) CHECK(eval_fo(s, n, ordinal_count_at_least(k)) == (n >= k));
  }
  // the formula against the naive evaluator
  auto ord = is_ordinal_formula("x");
  for (std::uint64_t c = 0; c < 16; ++c) {
    bool got = testing_support::naive_eval(s, 4, ord, {{"x", c}});
    CHECK(got == HFSet::from_code(c).is_ordinal());
  }
  // monotone along access: truth persists upward
  auto t = build_transitive_system(3);
  for (const PotentialistSystem* sys : {&s, &t})
    for (int k = 0; k <= 4; ++k) {
      auto f = ordinal_count_at_least(k);
      for (std::size_t a = 0; a < sys->size(); ++a)
        for (std::size_t b = 0; b < sys->size(); ++b)
          if (sys->frame().access(a, b) && eval_fo(*sys, a, f)) CHECK(eval_fo(*sys, b, f));
    }
}

TEST_CASE("height dial") {
  CHECK(height_dial(1, 3).size() == 1);
  auto s1 = build_rank_system(3);
  for (std::size_t w = 0; w < s1.size(); ++w) CHECK(eval_fo(s1, w, height_dial(1, 3)[0]));

  auto s = build_rank_system(4);
  auto d = height_dial(2, 4);
  REQUIRE(d.size() == 2);
  for (std::size_t w = 0; w <= 4; ++w) {
    CHECK(eval_fo(s, w, d[0]) == (w % 2 == 0));
    CHECK(eval_fo(s, w, d[1]) == (w % 2 == 1));
  }
  CHECK(verify_dial(s, d));
  CHECK_FALSE(verify_dial(build_rank_system(3), height_dial(3, 3)));

  // minimal N by exhaustion: the first N where the dial passes, and it keeps passing
  auto minimal = [](int m) {
    int first = -1;
    for (int N = 0; N <= 4; ++N) {
      bool ok = verify_dial(build_rank_system(N), height_dial(m, N));
      if (ok && first < 0) first = N;
      if (!ok) CHECK(first < 0);
    }
    return first;
  };
  CHECK(minimal(1) == 0);
  CHECK(minimal(2) == 2);
  CHECK(minimal(3) == 4);
}

TEST_CASE("rank ratchet") {
  auto r11 = rank_ratchet(1, 1, 2);
  REQUIRE(r11.ratchet.size() == 1);
  CHECK(r11.ratchet[0] == ordinal_count_at_least(1));
  REQUIRE(r11.dial.size() == 1);
  CHECK(r11.dial[0] == FOFormula::top());
  CHECK(verify_ratchet(build_rank_system(2), 0, r11.ratchet, {CompanionKind::Dial, r11.dial}));

  auto s5 = build_rank_system(5);
  auto r = rank_ratchet(2, 2, 5);
  CHECK(r.ratchet.size() == 2);
  CHECK(verify_dial(s5, r.dial));
  CHECK(verify_ratchet(s5, 0, r.ratchet, {CompanionKind::Dial, r.dial}));
  CHECK_THROWS_AS(rank_ratchet(2, 2, 4), std::invalid_argument);

  std::vector<FOFormula> longr;
  for (int v = 0; v <= 5; ++v) longr.push_back(ordinal_count_at_least(v));
  CHECK(verify_long_ratchet(s5, 0, longr));
}

TEST_CASE("describe_set") {
  auto d0 = describe_set(HFSet{});
  CHECK(to_string(d0) == to_string(parse_fo("exists x. forall y. ~mem(y, x)", Signature::membership())));
  auto s = build_rank_system(3);
  auto one = HFSet::from_code(1);
  CHECK(eval_fo(s, 2, describe_set(one)));
  CHECK_FALSE(eval_fo(s, 1, describe_set(one)));

  auto t = build_transitive_system(3);
  for (std::uint64_t c = 0; c < 4; ++c) {
    auto f = describe_set(HFSet::from_code(c));
    for (std::size_t w = 0; w < t.size(); ++w) CHECK(eval_fo(t, w, f) == t.world(w).contains(c));
  }
  auto r4 = build_rank_system(4);
  for (std::uint64_t c = 0; c < 16; ++c) {
    auto f = describe_set(HFSet::from_code(c));
    for (std::size_t w = 0; w < r4.size(); ++w) CHECK(eval_fo(r4, w, f) == r4.world(w).contains(c));
  }
}

TEST_CASE("transitive buttons") {
  auto t = build_transitive_system(3);
  auto b1 = transitive_buttons(1, 3);
  REQUIRE(b1.sets.size() == 1);
  CHECK(to_string(b1.sets[0]) == "{{{}}}");
  CHECK(verify_button(t, 0, b1.buttons[0]));
  for (std::size_t w = 0; w < t.size(); ++w)
    if (t.world(w).domain().size() <= 1) CHECK_FALSE(is_pushed(t, w, b1.buttons[0]));

  auto b2 = transitive_buttons(2, 3);
  REQUIRE(b2.sets.size() == 2);
  CHECK(to_string(b2.sets[1]) == "{{},{{}}}");
  CHECK(verify_independent_buttons(t, 0, b2.buttons, b2.companion));
  // pushing one does not push the other
  for (std::size_t w = 0; w < t.size(); ++w) {
    auto ds = downward_closure(b2.sets[0]);
    if (t.world(w).domain().size() == ds.size() && t.world(w).contains(b2.sets[0].code()))
      CHECK_FALSE(is_pushed(t, w, b2.buttons[1]));
  }
  CHECK_THROWS_AS(transitive_buttons(3, 3), std::invalid_argument);
}
