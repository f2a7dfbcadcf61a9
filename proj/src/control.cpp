#include "potentia/control.hpp"

#include <bit>
#include <stdexcept>

namespace potentia {

namespace {

template <class F>
void for_each_world(WorldSet set, F&& f) {
  while (set) {
    f(static_cast<std::size_t>(std::countr_zero(set)));
    set &= set - 1;
  }
}

template <class F>
bool all_worlds_in(WorldSet set, F&& f) {
  while (set) {
    if (!f(static_cast<std::size_t>(std::countr_zero(set)))) return false;
    set &= set - 1;
  }
  return true;
}

template <class F>
bool any_world_in(WorldSet set, F&& f) {
  return !all_worlds_in(set, [&](std::size_t u) { return !f(u); });
}

constexpr std::size_t kMaxFamily = 16;

// Per world state index; states[u] is meaningless outside the checked worlds.
// True iff `base` and, for each state in 0..count, some reachable world in that
// state satisfy `good`, which asks for the successor states that must be reachable.
template <class Good>
bool representatives(const PotentialistSystem& s, std::size_t base, const std::vector<std::size_t>& states,
                     std::size_t count, Good&& good) {
  if (!good(base)) return false;
  const WorldSet r = reachable(s, base);
  for (std::size_t st = 0; st < count; ++st) {
    if (!any_world_in(r, [&](std::size_t u) { return states[u] == st && good(u); })) return false;
  }
  return true;
}

// All `count` states occur among the worlds accessible from u.
bool sees_all_states(const PotentialistSystem& s, std::size_t u, const std::vector<std::size_t>& states,
                     std::size_t count) {
  std::vector<bool> seen(count, false);
  std::size_t found = 0;
  for_each_world(s.frame().successors(u), [&](std::size_t v) {
    if (states[v] < count && !seen[states[v]]) {
      seen[states[v]] = true;
      ++found;
    }
  });
  return found == count;
}

std::vector<std::size_t> switch_patterns(const PotentialistSystem& s, const std::vector<FOFormula>& family) {
  auto ts = truth_sets(s, family);
  std::vector<std::size_t> pat(s.size(), 0);
  for (std::size_t u = 0; u < s.size(); ++u) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if ((ts[i] >> u) & 1) pat[u] |= std::size_t{1} << i;
    }
  }
  return pat;
}

constexpr std::size_t kNoValue = static_cast<std::size_t>(-1);

std::vector<std::size_t> companion_states(const PotentialistSystem& s, const Companion& c) {
  std::vector<std::size_t> out;
  for (const auto& v : companion_values(s, c)) out.push_back(v ? *v : kNoValue);
  return out;
}

WorldSet box_set(const PotentialistSystem& s, WorldSet t) {
  WorldSet out = 0;
  for (std::size_t u = 0; u < s.size(); ++u) {
    if ((s.frame().successors(u) & ~t) == 0) out |= world_bit(u);
  }
  return out;
}

WorldSet diamond_set(const PotentialistSystem& s, WorldSet t) {
  WorldSet out = 0;
  for (std::size_t u = 0; u < s.size(); ++u) {
    if (s.frame().successors(u) & t) out |= world_bit(u);
  }
  return out;
}

bool button_truth(const PotentialistSystem& s, std::size_t w, WorldSet t) {
  const WorldSet r = reachable(s, w);
  return (r & ~diamond_set(s, box_set(s, t))) == 0;
}

}  // namespace

std::vector<WorldSet> truth_sets(const PotentialistSystem& s, const std::vector<FOFormula>& sentences) {
  Evaluator ev(s);
  std::vector<WorldSet> out;
  for (const auto& f : sentences) {
    WorldSet t = 0;
    for (std::size_t u = 0; u < s.size(); ++u) {
      if (ev.eval(u, f)) t |= world_bit(u);
    }
    out.push_back(t);
  }
  return out;
}

WorldSet reachable(const PotentialistSystem& s, std::size_t w) { return s.frame().successors(w); }

bool verify_switch(const PotentialistSystem& s, std::size_t w, const FOFormula& sw) {
  return verify_independent_switches(s, w, {sw});
}

bool verify_independent_switches(const PotentialistSystem& s, std::size_t w, const std::vector<FOFormula>& family) {
  if (family.empty()) throw std::invalid_argument("switch family must be nonempty");
  if (family.size() > kMaxFamily) throw std::length_error("switch family too large");
  const auto pat = switch_patterns(s, family);
  const std::size_t count = std::size_t{1} << family.size();
  return representatives(s, w, pat, count, [&](std::size_t u) { return sees_all_states(s, u, pat, count); });
}

bool verify_dial(const PotentialistSystem& s, const std::vector<FOFormula>& dial, std::size_t w) {
  if (dial.empty()) throw std::invalid_argument("a dial needs at least one value");
  const Companion c{CompanionKind::Dial, dial};
  const auto val = companion_states(s, c);
  if (!all_worlds_in(reachable(s, w), [&](std::size_t u) { return val[u] != kNoValue; })) return false;
  return representatives(s, w, val, dial.size(), [&](std::size_t u) { return sees_all_states(s, u, val, dial.size()); });
}

bool verify_button(const PotentialistSystem& s, std::size_t w, const FOFormula& b) {
  return button_truth(s, w, truth_sets(s, {b})[0]);
}

bool verify_pure_button(const PotentialistSystem& s, std::size_t w, const FOFormula& b) {
  const WorldSet t = truth_sets(s, {b})[0];
  if (!button_truth(s, w, t)) return false;
  return all_worlds_in(reachable(s, w), [&](std::size_t u) { return !((t >> u) & 1) || (s.frame().successors(u) & ~t) == 0; });
}

bool is_pushed(const PotentialistSystem& s, std::size_t u, const FOFormula& b) {
  const WorldSet t = truth_sets(s, {b})[0];
  return (s.frame().successors(u) & ~t) == 0;
}

std::size_t Companion::settings() const {
  if (kind == CompanionKind::Dial) return formulas.size();
  if (formulas.size() > kMaxFamily) throw std::length_error("switch family too large");
  return std::size_t{1} << formulas.size();
}

std::vector<std::optional<std::size_t>> companion_values(const PotentialistSystem& s, const Companion& c) {
  std::vector<std::optional<std::size_t>> out(s.size());
  if (c.kind == CompanionKind::Switches) {
    auto pat = switch_patterns(s, c.formulas);
    for (std::size_t u = 0; u < s.size(); ++u) out[u] = pat[u];
    return out;
  }
  auto ts = truth_sets(s, c.formulas);
  for (std::size_t u = 0; u < s.size(); ++u) {
    std::size_t hits = 0, which = 0;
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if ((ts[j] >> u) & 1) {
        ++hits;
        which = j;
      }
    }
    if (hits == 1) out[u] = which;
  }
  return out;
}

bool verify_companion(const PotentialistSystem& s, std::size_t w, const Companion& c) {
  return c.kind == CompanionKind::Dial ? verify_dial(s, c.formulas, w) : verify_independent_switches(s, w, c.formulas);
}

bool verify_independent_buttons(const PotentialistSystem& s, std::size_t w, const std::vector<FOFormula>& buttons,
                                const Companion& companion) {
  if (buttons.size() > kMaxFamily) throw std::length_error("button family too large");
  if (!verify_companion(s, w, companion)) return false;
  const auto ts = truth_sets(s, buttons);
  for (WorldSet t : ts) {
    if (!button_truth(s, w, t)) return false;
  }
  const std::size_t k = buttons.size();
  std::vector<WorldSet> pushed_at;
  for (WorldSet t : ts) pushed_at.push_back(box_set(s, t));
  std::vector<std::size_t> pushed(s.size(), 0);
  for (std::size_t u = 0; u < s.size(); ++u) {
    for (std::size_t i = 0; i < k; ++i) {
      if ((pushed_at[i] >> u) & 1) pushed[u] |= std::size_t{1} << i;
    }
  }
  const auto cval = companion_states(s, companion);
  const std::size_t settings = companion.settings();
  // from u: every setting with nothing new pushed, and with each unpushed button pushed alone
  auto good = [&](std::size_t u) {
    const WorldSet succ = s.frame().successors(u);
    for (std::size_t i = 0; i <= k; ++i) {
      if (i < k && ((pushed[u] >> i) & 1)) continue;
      const std::size_t target = i < k ? (pushed[u] | (std::size_t{1} << i)) : pushed[u];
      for (std::size_t c = 0; c < settings; ++c) {
        if (!any_world_in(succ, [&](std::size_t v) { return pushed[v] == target && cval[v] == c; })) return false;
      }
    }
    return true;
  };
  return representatives(s, w, pushed, std::size_t{1} << k, good);
}

bool verify_ratchet(const PotentialistSystem& s, std::size_t w, const std::vector<FOFormula>& r,
                    const Companion& companion) {
  if (r.empty()) throw std::invalid_argument("a ratchet needs at least one stage");
  if (!verify_companion(s, w, companion)) return false;
  const auto ts = truth_sets(s, r);
  const std::size_t n = r.size();
  const WorldSet reach = reachable(s, w);
  for (WorldSet t : ts) {
    if (!button_truth(s, w, t)) return false;
    if ((s.frame().successors(w) & ~t) == 0) return false;  // already pushed at the base
  }
  for (std::size_t i = 1; i < n; ++i) {
    if ((reach & ts[i] & ~ts[i - 1]) != 0) return false;  // r_{i+1} without r_i
  }
  // from any world with ¬r_i, some accessible world has r_i ∧ ¬r_{i+1}
  for (std::size_t i = 0; i < n; ++i) {
    const WorldSet exact = ts[i] & (i + 1 < n ? ~ts[i + 1] : ~WorldSet{0});
    const bool ok = all_worlds_in(reach & ~ts[i], [&](std::size_t u) { return (s.frame().successors(u) & exact) != 0; });
    if (!ok) return false;
  }
  std::vector<std::size_t> volume(s.size(), 0);
  for (std::size_t u = 0; u < s.size(); ++u) {
    for (std::size_t i = 0; i < n; ++i) {
      if ((ts[i] >> u) & 1) volume[u] = i + 1;
    }
  }
  const auto cval = companion_states(s, companion);
  const std::size_t settings = companion.settings();
  auto good = [&](std::size_t u) {
    const WorldSet succ = s.frame().successors(u);
    for (std::size_t v = volume[u]; v <= n; ++v) {
      for (std::size_t c = 0; c < settings; ++c) {
        if (!any_world_in(succ, [&](std::size_t x) { return volume[x] == v && cval[x] == c; })) return false;
      }
    }
    return true;
  };
  return representatives(s, w, volume, n + 1, good);
}

bool verify_long_ratchet(const PotentialistSystem& s, std::size_t w, const std::vector<FOFormula>& r) {
  if (r.empty()) throw std::invalid_argument("a long ratchet needs at least r_0");
  const auto ts = truth_sets(s, r);
  const WorldSet reach = reachable(s, w);
  if ((reach & ~ts[0]) != 0) return false;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!button_truth(s, w, ts[i])) return false;
    if (i > 0 && (reach & ts[i] & ~ts[i - 1]) != 0) return false;
  }
  return true;
}

std::vector<FOFormula> switches_dial_formulas(const std::vector<FOFormula>& switches) {
  const std::size_t m = switches.size();
  if (m > kMaxFamily) throw std::length_error("switch family too large");
  std::vector<FOFormula> out;
  for (std::size_t j = 0; j < (std::size_t{1} << m); ++j) {
    std::vector<FOFormula> parts;
    for (std::size_t i = m; i-- > 0;) parts.push_back((j >> i) & 1 ? switches[i] : FOFormula::make_not(switches[i]));
    out.push_back(conjunction(parts));
  }
  return out;
}

std::vector<FOFormula> dial_switch_formulas(const std::vector<FOFormula>& dial, std::size_t m) {
  if (m >= 63 || (std::size_t{1} << m) > dial.size()) throw std::invalid_argument("need 2^m ≤ dial size");
  std::vector<FOFormula> out;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<FOFormula> parts;
    for (std::size_t j = 0; j < dial.size(); ++j) {
      if ((j >> i) & 1) parts.push_back(dial[j]);
    }
    out.push_back(disjunction(parts));
  }
  return out;
}

RatchetExtraction long_ratchet_formulas(const std::vector<FOFormula>& r, std::size_t n, std::size_t m) {
  if (r.empty()) throw std::invalid_argument("a long ratchet needs at least r_0");
  const std::size_t L = r.size() - 1;
  if (m == 0) throw std::invalid_argument("dial size must be positive");
  if (m * n > L) throw std::invalid_argument("long ratchet too short: need m·n ≤ L");
  RatchetExtraction out;
  for (std::size_t k = 1; k <= n; ++k) out.ratchet.push_back(r[m * k]);
  if (m == 1) {
    out.dial.push_back(FOFormula::top());
    return out;
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<FOFormula> parts;
    for (std::size_t v = j; v <= L; v += m) {
      parts.push_back(v < L ? FOFormula::make_and(r[v], FOFormula::make_not(r[v + 1])) : r[v]);
    }
    out.dial.push_back(disjunction(parts));
  }
  return out;
}

std::vector<std::set<std::uint64_t>> reachable_patterns(const PotentialistSystem& s,
                                                       const std::vector<FOFormula>& family, bool as_dial) {
  if (family.size() > 62) throw std::length_error("family too large");
  const auto ts = truth_sets(s, family);
  std::vector<std::uint64_t> pat(s.size(), 0);
  for (std::size_t u = 0; u < s.size(); ++u) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if ((ts[i] >> u) & 1) bits |= std::uint64_t{1} << i;
    }
    if (as_dial && std::popcount(bits) == 1) pat[u] = static_cast<std::uint64_t>(std::countr_zero(bits));
    else if (as_dial) pat[u] = (std::uint64_t{1} << 63) | bits;
    else pat[u] = bits;
  }
  std::vector<std::set<std::uint64_t>> out(s.size());
  for (std::size_t u = 0; u < s.size(); ++u) {
    for_each_world(s.frame().successors(u), [&](std::size_t v) { out[u].insert(pat[v]); });
  }
  return out;
}

std::string to_string(ControlKind k) {
  switch (k) {
    case ControlKind::SwitchFamily: return "switches";
    case ControlKind::Dial: return "dial";
    case ControlKind::ButtonFamily: return "buttons";
    case ControlKind::Ratchet: return "ratchet";
    case ControlKind::LongRatchet: return "long-ratchet";
  }
  return "?";
}

ControlCertificate::ControlCertificate(ControlKind kind, std::vector<FOFormula> formulas, std::size_t base_world,
                                       std::optional<Companion> companion, std::string system)
    : kind_(kind), formulas_(std::move(formulas)), base_(base_world), companion_(std::move(companion)),
      system_(std::move(system)) {}

ControlCertificate certify(const PotentialistSystem& s, ControlCertificate c) {
  if (c.base_ >= s.size()) throw std::out_of_range("base world out of range");
  const Companion comp = c.companion_ ? *c.companion_ : Companion::trivial_dial();
  switch (c.kind_) {
    case ControlKind::SwitchFamily: c.verified_ = verify_independent_switches(s, c.base_, c.formulas_); break;
    case ControlKind::Dial: c.verified_ = verify_dial(s, c.formulas_, c.base_); break;
    case ControlKind::ButtonFamily: c.verified_ = verify_independent_buttons(s, c.base_, c.formulas_, comp); break;
    case ControlKind::Ratchet: c.verified_ = verify_ratchet(s, c.base_, c.formulas_, comp); break;
    case ControlKind::LongRatchet: c.verified_ = verify_long_ratchet(s, c.base_, c.formulas_); break;
  }
  return c;
}

namespace {

void require(const ControlCertificate& c, ControlKind kind) {
  if (c.kind() != kind) throw std::invalid_argument("expected a " + to_string(kind) + " certificate");
  if (!c.verified()) throw std::invalid_argument("certificate is not verified");
}

}  // namespace

ControlCertificate switches_to_dial(const ControlCertificate& switches) {
  require(switches, ControlKind::SwitchFamily);
  return {ControlKind::Dial, switches_dial_formulas(switches.formulas()), switches.base_world(), std::nullopt,
          switches.system()};
}

ControlCertificate dial_to_switches(const ControlCertificate& dial, std::size_t m) {
  require(dial, ControlKind::Dial);
  return {ControlKind::SwitchFamily, dial_switch_formulas(dial.formulas(), m), dial.base_world(), std::nullopt,
          dial.system()};
}

std::pair<ControlCertificate, ControlCertificate> long_ratchet_extract(const ControlCertificate& long_ratchet,
                                                                       std::size_t n, std::size_t m) {
  require(long_ratchet, ControlKind::LongRatchet);
  auto ex = long_ratchet_formulas(long_ratchet.formulas(), n, m);
  ControlCertificate dial(ControlKind::Dial, ex.dial, long_ratchet.base_world(), std::nullopt, long_ratchet.system());
  ControlCertificate ratchet(ControlKind::Ratchet, ex.ratchet, long_ratchet.base_world(),
                             Companion{CompanionKind::Dial, ex.dial}, long_ratchet.system());
  return {ratchet, dial};
}

}  // namespace potentia
