#include "doctest.h"

#include "potentia/control.hpp"
#include "potentia/corpus.hpp"
#include "potentia/settheory.hpp"

#include <string>
#include <vector>

using namespace potentia;

namespace {

// At least k elements in a counter world: an S-path through k elements.
FOFormula at_least_elements(int k) {
  auto v = [](int i) { return Term::variable("e" + std::to_string(i)); };
  FOFormula body = FOFormula::top();
  for (int i = k - 1; i >= 1; --i) body = FOFormula::exists("e" + std::to_string(i), FOFormula::make_and(FOFormula::atom("S", {v(i - 1), v(i)}), body));
  return FOFormula::exists("e0", body);
}

// Oracle for a dial: exactly one true everywhere reachable, and some reachable
// world per value that itself reaches every value, the base among them.
bool oracle_dial(const PotentialistSystem& s, const std::vector<FOFormula>& d, std::size_t w) {
  const std::size_t n = s.size();
  std::vector<int> val(n, -1);
  for (std::size_t u = 0; u < n; ++u) {
    int count = 0;
    for (std::size_t j = 0; j < d.size(); ++j)
      if (eval_fo(s, u, d[j])) {
        ++count;
        val[u] = static_cast<int>(j);
      }
    if (count != 1 && s.frame().access(w, u)) return false;
  }
  auto sees_all = [&](std::size_t u) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      bool found = false;
      for (std::size_t v = 0; v < n; ++v) found |= s.frame().access(u, v) && val[v] == static_cast<int>(j);
      if (!found) return false;
    }
    return true;
  };
  if (!sees_all(w)) return false;
  for (std::size_t j = 0; j < d.size(); ++j) {
    bool found = false;
    for (std::size_t u = 0; u < n; ++u) found |= s.frame().access(w, u) && val[u] == static_cast<int>(j) && sees_all(u);
    if (!found) return false;
  }
  return true;
}

PotentialistSystem one_world() { return build_counter_system(1, 1); }

}  // namespace

TEST_CASE("switches") {
  auto c = build_counter_system(8, 2);
  auto sw = counter_switches(2);
  CHECK_FALSE(verify_switch(c, 0, FOFormula::top()));
  CHECK(verify_switch(c, 0, sw[0]));
  CHECK(verify_switch(c, 0, sw[1]));
  CHECK_FALSE(verify_switch(one_world(), 0, counter_switches(1)[0]));
  CHECK(verify_independent_switches(c, 0, {sw[0]}) == verify_switch(c, 0, sw[0]));
  CHECK(verify_independent_switches(c, 0, sw));
  CHECK_FALSE(verify_independent_switches(c, 0, {sw[0], sw[0]}));
  CHECK_THROWS_AS(verify_independent_switches(c, 0, {}), std::invalid_argument);
  // bit 2 never changes in an 8-world chain started at world 4
  CHECK_FALSE(verify_switch(build_counter_system(8, 3), 4, counter_switches(3)[2]));
  auto g = build_grid_system(4);
  CHECK(verify_independent_switches(g, 0, grid_switches()));
}

TEST_CASE("dials") {
  auto c = build_counter_system(8, 2);
  CHECK(verify_dial(c, {FOFormula::top()}));
  CHECK(verify_dial(one_world(), {FOFormula::top()}));
  CHECK_FALSE(verify_dial(c, {FOFormula::top(), FOFormula::top()}));
  CHECK_THROWS_AS(verify_dial(c, {}), std::invalid_argument);
  auto d = switches_dial_formulas(counter_switches(2));
  CHECK(verify_dial(c, d));
  for (std::size_t w = 0; w < c.size(); ++w) CHECK(verify_dial(c, d, w) == oracle_dial(c, d, w));
  auto s = build_rank_system(4);
  auto h = height_dial(2, 4);
  for (std::size_t w = 0; w < s.size(); ++w) CHECK(verify_dial(s, h, w) == oracle_dial(s, h, w));
}

TEST_CASE("switch/dial formula shapes") {
  auto sw = counter_switches(2);
  auto d1 = switches_dial_formulas({sw[0]});
  REQUIRE(d1.size() == 2);
  CHECK(d1[0] == FOFormula::make_not(sw[0]));
  CHECK(d1[1] == sw[0]);
  auto d2 = switches_dial_formulas(sw);
  REQUIRE(d2.size() == 4);
  auto n0 = FOFormula::make_not(sw[0]), n1 = FOFormula::make_not(sw[1]);
  CHECK(d2[0] == FOFormula::make_and(n1, n0));
  CHECK(d2[1] == FOFormula::make_and(n1, sw[0]));
  CHECK(d2[2] == FOFormula::make_and(sw[1], n0));
  CHECK(d2[3] == FOFormula::make_and(sw[1], sw[0]));
  auto d0 = switches_dial_formulas({});
  REQUIRE(d0.size() == 1);
  CHECK(d0[0] == FOFormula::top());

  std::vector<FOFormula> dial;
  for (int j = 0; j < 5; ++j) dial.push_back(at_least_elements(j + 1));
  auto s21 = dial_switch_formulas({dial[0], dial[1]}, 1);
  REQUIRE(s21.size() == 1);
  CHECK(s21[0] == dial[1]);
  auto s42 = dial_switch_formulas({dial.begin(), dial.begin() + 4}, 2);
  REQUIRE(s42.size() == 2);
  CHECK(s42[0] == FOFormula::make_or(dial[1], dial[3]));
  CHECK(s42[1] == FOFormula::make_or(dial[2], dial[3]));
  CHECK(dial_switch_formulas(dial, 2) == s42);
  CHECK_THROWS_AS(dial_switch_formulas({dial.begin(), dial.begin() + 3}, 2), std::invalid_argument);
}

TEST_CASE("five-valued dial to two switches") {
  auto c = build_counter_system(16, 3);
  auto d8 = switches_dial_formulas(counter_switches(3));
  std::vector<FOFormula> d5(d8.begin(), d8.begin() + 4);
  d5.push_back(FOFormula::make_or(FOFormula::make_or(d8[4], d8[5]), FOFormula::make_or(d8[6], d8[7])));
  auto dial = certify(c, ControlCertificate(ControlKind::Dial, d5, 0));
  REQUIRE(dial.verified());
  auto sw = certify(c, dial_to_switches(dial, 2));
  CHECK(sw.verified());
  CHECK(sw.formulas()[0] == FOFormula::make_or(d5[1], d5[3]));
}

TEST_CASE("certificates") {
  auto c = build_counter_system(8, 2);
  ControlCertificate raw(ControlKind::SwitchFamily, counter_switches(2), 0, std::nullopt, "counter8");
  CHECK_FALSE(raw.verified());
  CHECK_THROWS_AS(switches_to_dial(raw), std::invalid_argument);
  auto ok = certify(c, raw);
  CHECK(ok.verified());
  CHECK(ok.system() == "counter8");
  CHECK_THROWS_AS(dial_to_switches(ok, 1), std::invalid_argument);
  auto dial = switches_to_dial(ok);
  CHECK(dial.kind() == ControlKind::Dial);
  CHECK_FALSE(dial.verified());
  CHECK(certify(c, dial).verified());
  auto bad = certify(c, ControlCertificate(ControlKind::SwitchFamily, {FOFormula::top()}, 0));
  CHECK_FALSE(bad.verified());
  CHECK_THROWS_AS(certify(c, ControlCertificate(ControlKind::Dial, {FOFormula::top()}, 8)), std::out_of_range);
  CHECK(to_string(ControlKind::LongRatchet) == "long-ratchet");
}

TEST_CASE("corpus conversions preserve reachable patterns") {
  for (auto& e : test_corpus()) {
    CAPTURE(e.name);
    const auto& s = e.system;
    if (!e.switches.empty()) {
      auto sw = certify(s, ControlCertificate(ControlKind::SwitchFamily, e.switches, e.base));
      REQUIRE(sw.verified());
      auto dial = certify(s, switches_to_dial(sw));
      CHECK(dial.verified());
      auto back = certify(s, dial_to_switches(dial, e.switches.size()));
      CHECK(back.verified());
      CHECK(reachable_patterns(s, back.formulas(), false) == reachable_patterns(s, e.switches, false));
    }
    for (auto& d : e.dials) {
      auto dial = certify(s, ControlCertificate(ControlKind::Dial, d, e.base));
      REQUIRE(dial.verified());
      std::size_t m = 0;
      while ((std::size_t{2} << m) <= d.size()) ++m;
      auto sw = certify(s, dial_to_switches(dial, m));
      CHECK(sw.verified());
      if (d.size() == (std::size_t{1} << m)) {
        auto round = certify(s, switches_to_dial(sw));
        CHECK(round.verified());
        CHECK(reachable_patterns(s, round.formulas(), true) == reachable_patterns(s, d, true));
      }
    }
  }
}

TEST_CASE("buttons") {
  auto c = build_counter_system(8, 2);
  CHECK(verify_pure_button(c, 0, FOFormula::top()));
  CHECK(is_pushed(c, 0, FOFormula::top()));
  auto b = at_least_elements(3);
  CHECK(verify_button(c, 0, b));
  CHECK(verify_pure_button(c, 0, b));
  CHECK_FALSE(is_pushed(c, 0, b));
  CHECK(is_pushed(c, 2, b));
  // frozen true at the top of an 8-chain, frozen false at the top of a 7-chain
  CHECK(verify_button(c, 0, counter_switches(2)[0]));
  auto c7 = build_counter_system(7, 1);
  CHECK(verify_switch(c7, 0, counter_switches(1)[0]));
  CHECK_FALSE(verify_button(c7, 0, counter_switches(1)[0]));
  CHECK_FALSE(verify_button(c, 0, FOFormula::bot()));

  auto dial = switches_dial_formulas(counter_switches(2));
  Companion comp{CompanionKind::Dial, dial};
  CHECK(comp.settings() == 4);
  CHECK(Companion{CompanionKind::Switches, counter_switches(2)}.settings() == 4);
  CHECK(verify_companion(c, 0, comp));
  CHECK(verify_independent_buttons(c, 0, {}, comp));
  CHECK_FALSE(verify_independent_buttons(c, 0, {b, FOFormula::make_and(b, FOFormula::top())}, Companion::trivial_dial()));
  // buttons on a chain are never independent: pushing the later one pushes the earlier
  CHECK_FALSE(verify_independent_buttons(c, 0, {at_least_elements(3), at_least_elements(5)}, Companion::trivial_dial()));

  // grid: one button per axis, with the parity switches as companion
  auto g = build_grid_system(4);
  auto axis = [](const char* rel) {
    // at least two steps along `rel`
    auto S = [&](const char* a, const char* b) { return FOFormula::atom(rel, {Term::variable(a), Term::variable(b)}); };
    return FOFormula::exists("x", FOFormula::exists("y", FOFormula::make_and(S("x", "y"), FOFormula::exists("z", S("y", "z")))));
  };
  std::vector<FOFormula> gb{axis("S"), axis("T")};
  CHECK(verify_button(g, 0, gb[0]));
  CHECK(verify_independent_buttons(g, 0, gb, Companion::trivial_dial()));
  CHECK(verify_independent_buttons(g, 0, gb, {CompanionKind::Switches, grid_switches()}));
  // on a 3-grid the pushed S-axis has a single column, so its parity is frozen
  CHECK_FALSE(verify_independent_buttons(build_grid_system(3), 0, gb, {CompanionKind::Switches, grid_switches()}));
}

TEST_CASE("box of an unpushed button is a pure button") {
  // every potentialist system is S4
  std::vector<std::pair<PotentialistSystem, std::vector<FOFormula>>> cases;
  {
    std::vector<FOFormula> fs;
    for (int k = 1; k <= 6; ++k) fs.push_back(at_least_elements(k));
    fs.push_back(counter_switches(2)[0]);
    cases.emplace_back(build_counter_system(6, 2), fs);
  }
  {
    std::vector<FOFormula> fs;
    for (std::uint64_t code = 0; code < 4; ++code) fs.push_back(describe_set(HFSet::from_code(code)));
    for (int k = 0; k <= 3; ++k) fs.push_back(ordinal_count_at_least(k));
    fs.push_back(FOFormula::make_or(describe_set(HFSet::from_code(2)), describe_set(HFSet::from_code(3))));
    fs.push_back(FOFormula::make_not(describe_set(HFSet::from_code(2))));
    cases.emplace_back(build_transitive_system(3), fs);
  }
  int checked = 0;
  for (auto& [s, fs] : cases)
    for (auto& b : fs)
      for (std::size_t w = 0; w < s.size(); ++w)
        if (verify_button(s, w, b) && !is_pushed(s, w, b)) {
          CHECK(verify_pure_button(s, w, FOFormula::box(b)));
          CHECK_FALSE(is_pushed(s, w, FOFormula::box(b)));
          ++checked;
        }
  CHECK(checked > 10);
}

TEST_CASE("ratchets") {
  auto c = build_counter_system(8, 2);
  auto b = at_least_elements(3);
  CHECK(verify_ratchet(c, 0, {b}, Companion::trivial_dial()));
  std::vector<FOFormula> r{at_least_elements(2), at_least_elements(4), at_least_elements(6)};
  CHECK(verify_ratchet(c, 0, r, Companion::trivial_dial()));
  CHECK_FALSE(verify_ratchet(c, 0, {r[2], r[1], r[0]}, Companion::trivial_dial()));
  CHECK_FALSE(verify_ratchet(c, 2, r, Companion::trivial_dial()));  // r_1 already pushed
  CHECK_THROWS_AS(verify_ratchet(c, 0, {}, Companion::trivial_dial()), std::invalid_argument);

  auto s = build_rank_system(5);
  std::vector<FOFormula> rk{ordinal_count_at_least(2), ordinal_count_at_least(4)};
  CHECK(verify_ratchet(s, 0, rk, {CompanionKind::Dial, height_dial(2, 5)}));
}

TEST_CASE("long ratchet extraction") {
  // counter chain with volume v = number of elements − 1
  auto c = build_counter_system(9, 1);
  std::vector<FOFormula> r;
  for (int v = 0; v <= 8; ++v) r.push_back(at_least_elements(v + 1));
  auto lr = certify(c, ControlCertificate(ControlKind::LongRatchet, r, 0));
  REQUIRE(lr.verified());
  CHECK_FALSE(verify_long_ratchet(c, 0, {r[1], r[2]}));  // r_0 must hold everywhere
  CHECK_FALSE(verify_long_ratchet(c, 0, {r[0], r[2], r[1]}));

  auto [rat, dial] = long_ratchet_extract(lr, 2, 3);
  REQUIRE(rat.formulas().size() == 2);
  CHECK(rat.formulas()[0] == r[3]);
  CHECK(rat.formulas()[1] == r[6]);
  REQUIRE(dial.formulas().size() == 3);
  for (std::size_t w = 0; w < c.size(); ++w)
    for (std::size_t j = 0; j < 3; ++j) CHECK(eval_fo(c, w, dial.formulas()[j]) == (w % 3 == j));
  CHECK(certify(c, dial).verified());
  CHECK(certify(c, rat).verified());

  auto [r11, d11] = long_ratchet_extract(lr, 1, 1);
  CHECK(r11.formulas() == std::vector<FOFormula>{r[1]});
  CHECK(d11.formulas() == std::vector<FOFormula>{FOFormula::top()});
  auto ex0 = long_ratchet_formulas(r, 0, 3);
  CHECK(ex0.ratchet.empty());
  CHECK(ex0.dial.size() == 3);
  CHECK_THROWS_AS(long_ratchet_extract(lr, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(long_ratchet_formulas(r, 1, 0), std::invalid_argument);
  ControlCertificate raw(ControlKind::LongRatchet, r, 0);
  CHECK_THROWS_AS(long_ratchet_extract(raw, 1, 1), std::invalid_argument);

  // the top block has a single world with 8 = 2·3+2 volumes, so m = 3 needs L ≥ m·n + m − 1
  auto c7 = build_counter_system(8, 1);
  std::vector<FOFormula> r7(r.begin(), r.end() - 1);
  auto lr7 = certify(c7, ControlCertificate(ControlKind::LongRatchet, r7, 0));
  REQUIRE(lr7.verified());
  CHECK_FALSE(certify(c7, long_ratchet_extract(lr7, 2, 3).first).verified());
}

TEST_CASE("rank ratchet extraction on every small rank system") {
  for (int N = 1; N <= 5; ++N) {
    auto s = build_rank_system(N);
    std::vector<FOFormula> r;
    for (int v = 0; v <= N; ++v) r.push_back(ordinal_count_at_least(v));
    auto lr = certify(s, ControlCertificate(ControlKind::LongRatchet, r, 0));
    REQUIRE(lr.verified());
    for (std::size_t m = 1; m <= 3; ++m)
      for (std::size_t n = 1; m * n + 1 <= static_cast<std::size_t>(N); ++n) {
        CAPTURE(N);
        CAPTURE(m);
        CAPTURE(n);
        auto [rat, dial] = long_ratchet_extract(lr, n, m);
        CHECK(certify(s, dial).verified() == (N + 2 >= 2 * static_cast<int>(m) || m == 1));
        bool expect = m * n + m - 1 <= static_cast<std::size_t>(N);
        CHECK(certify(s, rat).verified() == expect);
      }
  }
}
