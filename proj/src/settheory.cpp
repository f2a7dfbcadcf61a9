#include "potentia/settheory.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace potentia {

namespace {

constexpr std::uint64_t kTower[] = {0, 1, 2, 4, 16, 65536};
constexpr std::uint64_t kCodeLimit = 65536;  // rank ≤ 4

}  // namespace

HFSet HFSet::from_code(std::uint64_t code) {
  if (code >= kCodeLimit) throw std::length_error("only sets of rank at most 4 are representable");
  return HFSet(code);
}

HFSet HFSet::from_children(const std::vector<HFSet>& children) {
  std::uint64_t code = 0;
  for (const auto& c : children) {
    if (c.code_ >= kTower[4]) throw std::length_error("only sets of rank at most 4 are representable");
    code |= std::uint64_t{1} << c.code_;
  }
  return HFSet(code);
}

std::vector<HFSet> HFSet::children() const {
  std::vector<HFSet> out;
  for (std::uint64_t bits = code_; bits; bits &= bits - 1) out.push_back(HFSet(std::countr_zero(bits)));
  return out;
}

std::size_t HFSet::size() const { return static_cast<std::size_t>(std::popcount(code_)); }

int HFSet::rank() const {
  int n = 0;
  while (code_ >= kTower[n + 1]) ++n;
  return n;
}

bool HFSet::contains(const HFSet& y) const { return y.code_ < 64 && ((code_ >> y.code_) & 1); }

bool HFSet::is_transitive() const {
  for (const auto& y : children()) {
    if ((y.code_ & ~code_) != 0) return false;
  }
  return true;
}

bool HFSet::is_ordinal() const {
  if (!is_transitive()) return false;
  for (const auto& y : children()) {
    if (!y.is_transitive()) return false;
  }
  return true;
}

std::string to_string(const HFSet& h) {
  std::string s = "{";
  bool first = true;
  for (const auto& c : h.children()) {
    if (!first) s += ",";
    s += to_string(c);
    first = false;
  }
  return s + "}";
}

namespace {

HFSet parse_set(std::string_view text, std::size_t& pos) {
  auto skip = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n')) ++pos;
  };
  skip();
  if (pos >= text.size() || text[pos] != '{') throw std::invalid_argument("expected '{' at offset " + std::to_string(pos));
  ++pos;
  std::vector<HFSet> children;
  skip();
  if (pos < text.size() && text[pos] == '}') {
    ++pos;
    return HFSet();
  }
  while (true) {
    children.push_back(parse_set(text, pos));
    skip();
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      continue;
    }
    if (pos < text.size() && text[pos] == '}') {
      ++pos;
      break;
    }
    throw std::invalid_argument("expected ',' or '}' at offset " + std::to_string(pos));
  }
  return HFSet::from_children(children);
}

}  // namespace

HFSet parse_hfset(std::string_view text) {
  std::size_t pos = 0;
  HFSet h = parse_set(text, pos);
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\n')) ++pos;
  if (pos != text.size()) throw std::invalid_argument("trailing input at offset " + std::to_string(pos));
  return h;
}

std::uint64_t v_size(int n) {
  if (n < 0 || n > kMaxRank) throw std::length_error("V_n is only available for n ≤ 5");
  return kTower[n];
}

std::vector<HFSet> build_v(int n, int cap) {
  if (n < 0) throw std::invalid_argument("negative rank");
  if (n > cap || n > kMaxRank) throw std::length_error("rank cap exceeded");
  std::vector<HFSet> out;
  for (std::uint64_t c = 0; c < kTower[n]; ++c) out.push_back(HFSet::from_code(c));
  return out;
}

Structure v_structure(int n) {
  const std::uint64_t size = v_size(n);
  std::vector<ElementId> dom(size);
  std::vector<std::vector<std::vector<ElementId>>> rel(1);
  for (std::uint64_t x = 0; x < size; ++x) {
    dom[x] = x;
    for (std::uint64_t bits = x; bits; bits &= bits - 1) {
      rel[0].push_back({static_cast<ElementId>(std::countr_zero(bits)), x});
    }
  }
  return Structure(Signature::membership(), std::move(dom), std::move(rel));
}

PotentialistSystem build_rank_system(int N, int cap) {
  if (N < 0) throw std::invalid_argument("negative rank");
  if (N > cap || N > kMaxRank) throw std::length_error("rank cap exceeded");
  std::vector<Structure> worlds;
  std::vector<std::string> names;
  for (int k = 0; k <= N; ++k) {
    worlds.push_back(v_structure(k));
    names.push_back("V" + std::to_string(k));
  }
  Frame chain(worlds.size());
  for (std::size_t a = 0; a < worlds.size(); ++a) {
    for (std::size_t b = a; b < worlds.size(); ++b) chain.set_access(a, b);
  }
  return check_potentialist(std::move(worlds), chain, std::move(names));
}

std::vector<HFSet> downward_closure(const HFSet& h) {
  std::set<HFSet> seen{h};
  std::vector<HFSet> todo{h};
  while (!todo.empty()) {
    HFSet x = todo.back();
    todo.pop_back();
    for (const auto& c : x.children()) {
      if (seen.insert(c).second) todo.push_back(c);
    }
  }
  return {seen.begin(), seen.end()};
}

namespace {

Structure transitive_world(const std::vector<ElementId>& dom) {
  std::vector<std::vector<std::vector<ElementId>>> rel(1);
  for (ElementId x : dom) {
    for (ElementId y : dom) {
      if (y < 64 && ((x >> y) & 1)) rel[0].push_back({y, x});
    }
  }
  return Structure(Signature::membership(), dom, std::move(rel));
}

std::string world_name(const std::vector<ElementId>& dom) {
  std::string s = "T{";
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dom[i]);
  }
  return s + "}";
}

}  // namespace

PotentialistSystem build_transitive_system(int N, const std::vector<HFSet>& seeds, std::size_t cap) {
  if (N < 0) throw std::invalid_argument("negative rank");
  if (N > kMaxRank) throw std::length_error("rank cap exceeded");
  if (cap > kMaxFrameWorlds) throw std::length_error("at most 64 worlds are supported");
  std::set<std::vector<ElementId>> family;
  if (N <= 3) {
    const std::uint64_t n = v_size(N);
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << n); ++sub) {
      // sub is itself the code of a subset of V_N; keep it if transitive
      if (HFSet::from_code(sub).is_transitive()) {
        std::vector<ElementId> dom;
        for (std::uint64_t bits = sub; bits; bits &= bits - 1) dom.push_back(static_cast<ElementId>(std::countr_zero(bits)));
        family.insert(dom);
      }
    }
  } else {
    std::vector<std::vector<ElementId>> closures;
    for (const auto& s : seeds) {
      if (s.rank() >= N) throw std::invalid_argument("seed " + to_string(s) + " is not in V_" + std::to_string(N));
      std::vector<ElementId> c;
      for (const auto& x : downward_closure(s)) c.push_back(x.code());
      closures.push_back(c);
    }
    std::vector<std::vector<ElementId>> todo{{}};
    family.insert({});
    while (!todo.empty()) {
      auto w = todo.back();
      todo.pop_back();
      std::vector<std::vector<ElementId>> next;
      for (const auto& c : closures) {
        std::vector<ElementId> u;
        std::set_union(w.begin(), w.end(), c.begin(), c.end(), std::back_inserter(u));
        next.push_back(u);
      }
      for (const auto& other : family) {
        std::vector<ElementId> u;
        std::set_union(w.begin(), w.end(), other.begin(), other.end(), std::back_inserter(u));
        next.push_back(u);
      }
      for (auto& u : next) {
        if (family.insert(u).second) {
          if (family.size() > cap) throw std::length_error("transitive system exceeds the world cap");
          todo.push_back(std::move(u));
        }
      }
    }
  }
  std::vector<std::vector<ElementId>> doms(family.begin(), family.end());
  std::stable_sort(doms.begin(), doms.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  if (doms.size() > cap) throw std::length_error("transitive system exceeds the world cap");
  std::vector<Structure> worlds;
  std::vector<std::string> names;
  for (const auto& d : doms) {
    worlds.push_back(transitive_world(d));
    names.push_back(world_name(d));
  }
  Frame incl(doms.size());
  for (std::size_t a = 0; a < doms.size(); ++a) {
    for (std::size_t b = 0; b < doms.size(); ++b) {
      if (std::includes(doms[b].begin(), doms[b].end(), doms[a].begin(), doms[a].end())) incl.set_access(a, b);
    }
  }
  return check_potentialist(std::move(worlds), incl, std::move(names));
}

namespace {

Term var(const std::string& v) { return Term::variable(v); }
FOFormula mem(const std::string& a, const std::string& b) { return FOFormula::atom("mem", {var(a), var(b)}); }

}  // namespace

FOFormula is_ordinal_formula(const std::string& x) {
  std::vector<std::string> names;
  for (const char* n : {"y", "z", "u", "v"}) {
    if (n != x) names.push_back(n);
  }
  const std::string &y = names[0], &z = names[1], &u = names[2];
  auto inner = FOFormula::make_and(mem(z, x), FOFormula::forall(u, FOFormula::make_implies(mem(u, z), mem(u, y))));
  return FOFormula::forall(y, FOFormula::make_implies(mem(y, x), FOFormula::forall(z, FOFormula::make_implies(mem(z, y), inner))));
}

FOFormula ordinal_count_at_least(int k) {
  if (k < 0) throw std::invalid_argument("negative count");
  if (k == 0) return FOFormula::top();
  // innermost first: ∃y_{k-1} (mem(y_{k-1}, x) ∧ distinct from y_1..y_{k-2})
  FOFormula body = FOFormula::top();
  for (int i = k - 1; i >= 1; --i) {
    std::vector<FOFormula> parts{mem("y" + std::to_string(i), "x")};
    for (int j = 1; j < i; ++j) {
      parts.push_back(FOFormula::make_not(FOFormula::eq(var("y" + std::to_string(i)), var("y" + std::to_string(j)))));
    }
    parts.push_back(body);
    body = FOFormula::exists("y" + std::to_string(i), conjunction(parts));
  }
  return FOFormula::exists("x", conjunction({is_ordinal_formula("x"), body}));
}

std::vector<FOFormula> height_dial(int m, int N) {
  if (m < 1) throw std::invalid_argument("dial size must be positive");
  if (N < 0) throw std::invalid_argument("negative rank");
  if (m == 1) return {FOFormula::top()};
  std::vector<FOFormula> out;
  for (int j = 0; j < m; ++j) {
    std::vector<FOFormula> exact;
    for (int c = j; c <= N; c += m) {
      exact.push_back(FOFormula::make_and(ordinal_count_at_least(c), FOFormula::make_not(ordinal_count_at_least(c + 1))));
    }
    out.push_back(disjunction(exact));
  }
  return out;
}

RatchetExtraction rank_ratchet(int n, int m, int N) {
  if (n < 0 || m < 1) throw std::invalid_argument("need n ≥ 0 and m ≥ 1");
  if (N < m * n + 1) throw std::invalid_argument("rank ratchet needs N ≥ m·n+1");
  std::vector<FOFormula> r;
  for (int v = 0; v <= N; ++v) r.push_back(ordinal_count_at_least(v));
  return long_ratchet_formulas(r, static_cast<std::size_t>(n), static_cast<std::size_t>(m));
}

namespace {

std::string depth_name(int d) {
  if (d < 3) return std::string(1, "xyz"[d]);
  return "x" + std::to_string(d);
}

FOFormula describe(const HFSet& h, int depth) {
  const std::string self = depth_name(depth);
  const std::string m = depth_name(depth + 1);
  const auto kids = h.children();
  if (kids.empty()) return FOFormula::forall(m, FOFormula::make_not(mem(m, self)));
  std::vector<FOFormula> parts, options;
  for (const auto& c : kids) {
    const FOFormula chi = describe(c, depth + 1);
    parts.push_back(FOFormula::exists(m, FOFormula::make_and(mem(m, self), chi)));
    options.push_back(chi);
  }
  parts.push_back(FOFormula::forall(m, FOFormula::make_implies(mem(m, self), disjunction(options))));
  return conjunction(parts);
}

}  // namespace

FOFormula describe_set(const HFSet& h) { return FOFormula::exists("x", describe(h, 0)); }

ButtonFamily transitive_buttons(int k, int N) {
  if (k < 0) throw std::invalid_argument("negative button count");
  if (N < 1 || N > kMaxRank) throw std::invalid_argument("need 1 ≤ N ≤ 5");
  ButtonFamily out;
  out.companion = Companion::trivial_dial();
  for (std::uint64_t c = v_size(N - 1); c < v_size(N) && out.sets.size() < static_cast<std::size_t>(k); ++c) {
    out.sets.push_back(HFSet::from_code(c));
  }
  if (out.sets.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("only " + std::to_string(out.sets.size()) + " sets of rank " + std::to_string(N - 1) +
                                " available");
  }
  for (const auto& s : out.sets) out.buttons.push_back(describe_set(s));
  return out;
}

}  // namespace potentia
