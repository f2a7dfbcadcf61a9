#include "potentia/potentialist.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <random>

namespace potentia {

ElementId parameter_element(const std::string& name) {
  ElementId e = 0;
  auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), e);
  if (name.empty() || ec != std::errc() || ptr != name.data() + name.size()) {
    throw std::invalid_argument("parameter '#" + name + "' is not an element id");
  }
  return e;
}

std::string parameter_name(ElementId e) { return std::to_string(e); }

// ---------------------------------------------------------------------------
// Structure

namespace {

std::size_t arity_of(const Signature& sig, std::size_t rel) {
  return static_cast<std::size_t>(sig.relations().at(rel).arity);
}

}  // namespace

Structure::Structure(Signature sig, std::vector<ElementId> domain) : sig_(std::move(sig)), domain_(std::move(domain)) {
  std::sort(domain_.begin(), domain_.end());
  domain_.erase(std::unique(domain_.begin(), domain_.end()), domain_.end());
  for (const auto& r : sig_.relations()) {
    if (r.arity <= 0) throw std::invalid_argument("relation '" + r.name + "' must have positive arity");
  }
  flat_.resize(sig_.relations().size());
}

Structure::Structure(Signature sig, std::vector<ElementId> domain,
                     std::vector<std::vector<std::vector<ElementId>>> relations)
    : Structure(std::move(sig), std::move(domain)) {
  if (relations.size() != flat_.size()) throw std::invalid_argument("one tuple list per relation expected");
  for (std::size_t r = 0; r < relations.size(); ++r) {
    auto& ts = relations[r];
    for (const auto& t : ts) check_tuple(r, t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    flat_[r].reserve(ts.size() * arity_of(sig_, r));
    for (const auto& t : ts) flat_[r].insert(flat_[r].end(), t.begin(), t.end());
  }
}

bool Structure::contains(ElementId e) const { return std::binary_search(domain_.begin(), domain_.end(), e); }

void Structure::check_tuple(std::size_t relation, std::span<const ElementId> tuple) const {
  if (relation >= flat_.size()) throw std::out_of_range("relation index out of range");
  if (tuple.size() != arity_of(sig_, relation)) {
    throw std::invalid_argument("tuple arity does not match relation '" + sig_.relations()[relation].name + "'");
  }
  for (ElementId e : tuple) {
    if (!contains(e)) throw std::invalid_argument("tuple element " + std::to_string(e) + " is outside the domain");
  }
}

namespace {

// Index of the first stored tuple not less than `t`.
std::size_t lower_tuple(const std::vector<ElementId>& flat, std::size_t arity, std::span<const ElementId> t) {
  std::size_t lo = 0, hi = flat.size() / arity;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto b = flat.begin() + static_cast<std::ptrdiff_t>(mid * arity);
    if (std::lexicographical_compare(b, b + static_cast<std::ptrdiff_t>(arity), t.begin(), t.end())) lo = mid + 1;
    else hi = mid;
  }
  return lo;
}

}  // namespace

void Structure::add_tuple(std::string_view relation, const std::vector<ElementId>& tuple) {
  auto r = sig_.find(relation);
  if (!r) throw ParseError(ParseError::Kind::UnknownRelation, 0, {}, "unknown relation '" + std::string(relation) + "'");
  check_tuple(*r, tuple);
  if (holds(*r, tuple)) return;
  std::size_t a = arity_of(sig_, *r);
  std::size_t k = lower_tuple(flat_[*r], a, tuple);
  flat_[*r].insert(flat_[*r].begin() + static_cast<std::ptrdiff_t>(k * a), tuple.begin(), tuple.end());
}

bool Structure::holds(std::size_t relation, std::span<const ElementId> tuple) const {
  std::size_t a = arity_of(sig_, relation);
  if (tuple.size() != a) return false;
  const auto& flat = flat_[relation];
  std::size_t k = lower_tuple(flat, a, tuple);
  if (k * a >= flat.size()) return false;
  return std::equal(tuple.begin(), tuple.end(), flat.begin() + static_cast<std::ptrdiff_t>(k * a));
}

std::size_t Structure::tuple_count(std::size_t relation) const {
  return flat_.at(relation).size() / arity_of(sig_, relation);
}

std::vector<ElementId> Structure::tuple(std::size_t relation, std::size_t k) const {
  std::size_t a = arity_of(sig_, relation);
  auto b = flat_.at(relation).begin() + static_cast<std::ptrdiff_t>(k * a);
  return {b, b + static_cast<std::ptrdiff_t>(a)};
}

std::vector<std::vector<ElementId>> Structure::tuples(std::size_t relation) const {
  std::vector<std::vector<ElementId>> out;
  for (std::size_t k = 0; k < tuple_count(relation); ++k) out.push_back(tuple(relation, k));
  return out;
}

namespace {

bool domain_included(const Structure& a, const Structure& b) {
  return std::includes(b.domain().begin(), b.domain().end(), a.domain().begin(), a.domain().end());
}

// Atomic facts of `sup` over domain(sub) are exactly those of `sub`.
bool atoms_agree(const Structure& sub, const Structure& sup) {
  for (std::size_t r = 0; r < sub.signature().relations().size(); ++r) {
    std::size_t inside = 0;
    for (std::size_t k = 0; k < sup.tuple_count(r); ++k) {
      auto t = sup.tuple(r, k);
      if (std::all_of(t.begin(), t.end(), [&](ElementId e) { return sub.contains(e); })) {
        if (!sub.holds(r, t)) return false;
        ++inside;
      }
    }
    if (inside != sub.tuple_count(r)) return false;
  }
  return true;
}

}  // namespace

bool is_substructure(const Structure& sub, const Structure& sup) {
  return sub.signature() == sup.signature() && domain_included(sub, sup) && atoms_agree(sub, sup);
}

// ---------------------------------------------------------------------------
// Systems

namespace {

using PE = PotentialistError;

void check_shapes(const std::vector<Structure>& worlds, std::vector<std::string>& names) {
  if (worlds.empty()) throw PE(PE::Kind::Shape, {}, "a potentialist system needs at least one world");
  if (worlds.size() > kMaxFrameWorlds) throw PE(PE::Kind::Shape, {}, "at most 64 worlds are supported");
  if (names.empty()) {
    for (std::size_t w = 0; w < worlds.size(); ++w) names.push_back("w" + std::to_string(w));
  }
  if (names.size() != worlds.size()) throw PE(PE::Kind::Shape, {}, "world name count does not match world count");
  for (std::size_t w = 1; w < worlds.size(); ++w) {
    if (!(worlds[w].signature() == worlds[0].signature())) {
      throw PE(PE::Kind::Signature, {0, w}, "world " + names[w] + " has a different signature");
    }
  }
}

}  // namespace

PotentialistSystem check_potentialist(std::vector<Structure> worlds, const Frame& access,
                                      std::vector<std::string> names) {
  check_shapes(worlds, names);
  const std::size_t n = worlds.size();
  if (access.size() != n) throw PE(PE::Kind::Shape, {}, "access matrix size does not match world count");
  for (std::size_t w = 0; w < n; ++w) {
    if (!access.access(w, w)) throw PE(PE::Kind::NotReflexive, {w}, "access is not reflexive at " + names[w]);
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!access.access(a, b)) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (access.access(b, c) && !access.access(a, c)) {
          throw PE(PE::Kind::NotTransitive, {a, b, c},
                   "access is not transitive: " + names[a] + " -> " + names[b] + " -> " + names[c]);
        }
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !access.access(a, b)) continue;
      if (!domain_included(worlds[a], worlds[b])) {
        throw PE(PE::Kind::ShrinkingDomain, {a, b}, "domain shrinks from " + names[a] + " to " + names[b]);
      }
      if (!atoms_agree(worlds[a], worlds[b])) {
        throw PE(PE::Kind::AtomicDisagreement, {a, b},
                 names[a] + " and " + names[b] + " disagree on atomic facts over " + names[a]);
      }
    }
  }
  PotentialistSystem s;
  s.sig_ = worlds[0].signature();
  s.worlds_ = std::move(worlds);
  s.names_ = std::move(names);
  s.frame_ = access;
  s.mode_ = AccessMode::Explicit;
  s.build_index();
  return s;
}

PotentialistSystem check_potentialist(std::vector<Structure> worlds, AccessMode mode, std::vector<std::string> names) {
  if (mode != AccessMode::Substructure) throw std::invalid_argument("explicit mode needs an access relation");
  check_shapes(worlds, names);
  const std::size_t n = worlds.size();
  Frame f(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || is_substructure(worlds[a], worlds[b])) f.set_access(a, b);
    }
  }
  PotentialistSystem s = check_potentialist(std::move(worlds), f, std::move(names));
  s.mode_ = AccessMode::Substructure;
  return s;
}

void PotentialistSystem::build_index() {
  auto idx = std::make_shared<std::vector<std::vector<Adjacency>>>(worlds_.size());
  for (std::size_t w = 0; w < worlds_.size(); ++w) {
    (*idx)[w].resize(sig_.relations().size());
    for (std::size_t r = 0; r < sig_.relations().size(); ++r) {
      if (sig_.relations()[r].arity != 2) continue;
      auto& adj = (*idx)[w][r];
      for (std::size_t k = 0; k < worlds_[w].tuple_count(r); ++k) {
        auto t = worlds_[w].tuple(r, k);
        adj.out[t[0]].push_back(t[1]);
        adj.in[t[1]].push_back(t[0]);
      }
    }
  }
  index_ = std::move(idx);
}

std::span<const ElementId> PotentialistSystem::predecessors(std::size_t w, std::size_t relation, ElementId x) const {
  const auto& m = index_->at(w).at(relation).in;
  auto it = m.find(x);
  if (it == m.end()) return {};
  return it->second;
}

std::span<const ElementId> PotentialistSystem::successors(std::size_t w, std::size_t relation, ElementId x) const {
  const auto& m = index_->at(w).at(relation).out;
  auto it = m.find(x);
  if (it == m.end()) return {};
  return it->second;
}

bool eval_fo(const PotentialistSystem& s, std::size_t world, const FOFormula& f, const Env& env) {
  Evaluator ev(s);
  return ev.eval(world, f, env);
}

PotentialistSystem single_world(const Structure& m) {
  Frame f(1);
  f.set_access(0, 0);
  return check_potentialist({m}, f, {"M"});
}

bool eval_structure(const Structure& m, const FOFormula& f, const Env& env) {
  if (has_modal(f)) throw std::invalid_argument("eval_structure takes nonmodal formulas");
  return eval_fo(single_world(m), 0, f, env);
}

// ---------------------------------------------------------------------------
// Coherence and the translation

CoherenceReport coherence(const std::vector<Structure>& worlds) {
  CoherenceReport rep;
  const std::size_t n = worlds.size();
  for (std::size_t a = 1; a < n; ++a) {
    if (!(worlds[a].signature() == worlds[0].signature())) throw std::invalid_argument("worlds must share a signature");
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      std::vector<ElementId> shared;
      std::set_intersection(worlds[a].domain().begin(), worlds[a].domain().end(), worlds[b].domain().begin(),
                            worlds[b].domain().end(), std::back_inserter(shared));
      auto restrict_to_shared = [&](const Structure& from) {
        const Structure frame(from.signature(), shared);
        std::vector<std::vector<std::vector<ElementId>>> rels(from.signature().relations().size());
        for (std::size_t r = 0; r < rels.size(); ++r) {
          for (std::size_t k = 0; k < from.tuple_count(r); ++k) {
            auto t = from.tuple(r, k);
            if (std::all_of(t.begin(), t.end(), [&](ElementId e) { return frame.contains(e); })) rels[r].push_back(t);
          }
        }
        return Structure(from.signature(), shared, std::move(rels));
      };
      const Structure ra = restrict_to_shared(worlds[a]);
      const Structure rb = restrict_to_shared(worlds[b]);
      if (!(ra == rb)) {
        rep.failure = CoherenceReport::Failure::AtomicDisagreement;
        rep.world_a = a;
        rep.world_b = b;
        rep.message = "worlds " + std::to_string(a) + " and " + std::to_string(b) + " disagree on shared elements";
        return rep;
      }
    }
  }
  std::vector<ElementId> all;
  for (const auto& w : worlds) all.insert(all.end(), w.domain().begin(), w.domain().end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<std::size_t> above;
    for (std::size_t b = 0; b < n; ++b) {
      if (domain_included(worlds[a], worlds[b])) above.push_back(b);
    }
    for (ElementId e : all) {
      bool ok = std::any_of(above.begin(), above.end(), [&](std::size_t b) { return worlds[b].contains(e); });
      if (!ok) {
        rep.failure = CoherenceReport::Failure::Unaccommodated;
        rep.world_a = a;
        rep.element = e;
        rep.message = "no world extends world " + std::to_string(a) + " by element " + std::to_string(e);
        return rep;
      }
    }
  }
  if (n == 0) {
    rep.coherent = true;
    return rep;
  }
  const Signature& sig = worlds[0].signature();
  std::vector<std::vector<std::vector<ElementId>>> rels(sig.relations().size());
  for (const auto& w : worlds) {
    for (std::size_t r = 0; r < rels.size(); ++r) {
      for (std::size_t k = 0; k < w.tuple_count(r); ++k) rels[r].push_back(w.tuple(r, k));
    }
  }
  rep.coherent = true;
  rep.limit = Structure(sig, all, std::move(rels));
  return rep;
}

TranslationChecker::TranslationChecker(const PotentialistSystem& s) : sys_(s) {
  auto rep = coherence(s.worlds());
  if (!rep.coherent) throw std::invalid_argument("incoherent system: " + rep.message);
  limit_ = *rep.limit;
  limit_sys_ = std::make_unique<PotentialistSystem>(single_world(limit_));
  world_eval_ = std::make_unique<Evaluator>(sys_);
  limit_eval_ = std::make_unique<Evaluator>(*limit_sys_);
}

TranslationChecker::~TranslationChecker() = default;

bool TranslationChecker::check(const FOFormula& psi) {
  if (has_modal(psi)) throw std::invalid_argument("check_translation takes nonmodal sentences");
  if (!is_sentence(psi)) throw std::invalid_argument("check_translation takes sentences");
  std::vector<ElementId> params;
  for (const auto& p : parameters(psi)) params.push_back(parameter_element(p));
  bool in_limit = std::all_of(params.begin(), params.end(), [&](ElementId e) { return limit_.contains(e); });
  if (!in_limit) throw std::invalid_argument("parameters lie outside every world");
  const bool truth = limit_eval_->eval(0, psi);
  const FOFormula translated = potentialist_translation(psi);
  for (std::size_t w = 0; w < sys_.size(); ++w) {
    const auto& s = sys_.world(w);
    if (!std::all_of(params.begin(), params.end(), [&](ElementId e) { return s.contains(e); })) continue;
    if (world_eval_->eval(w, translated) != truth) return false;
  }
  return true;
}

bool check_translation(const PotentialistSystem& s, const FOFormula& psi) {
  TranslationChecker c(s);
  return c.check(psi);
}

// ---------------------------------------------------------------------------
// Validity checks

std::string to_string(Verdict v) { return v == Verdict::Holds ? "holds" : "fails"; }

Verdict refute_validity(const PotentialistSystem& s, std::size_t world, const PropFormula& phi,
                        const Substitution& sigma) {
  return eval_fo(s, world, substitute(phi, sigma)) ? Verdict::Holds : Verdict::Fails;
}

namespace {

bool params_present(const Structure& w, const FOFormula& f) {
  for (const auto& p : parameters(f)) {
    if (!w.contains(parameter_element(p))) return false;
  }
  return true;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

SchemeReport scheme_check(const PotentialistSystem& s, const PropFormula& phi, const std::vector<FOFormula>& pool,
                          std::size_t trials, std::uint64_t seed) {
  if (pool.empty()) throw std::invalid_argument("empty sentence pool");
  for (const auto& f : pool) {
    if (!is_sentence(f)) throw std::invalid_argument("pool entries must be sentences: " + to_string(f));
    check_signature(f, s.signature());
  }
  const auto vars = variables(phi);
  SchemeReport rep;
  Evaluator ev(s);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, t);
    Substitution sigma;
    for (int v : vars) sigma.set(v, pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
    FOFormula inst = substitute(phi, sigma);
    ++rep.trials;
    for (std::size_t w = 0; w < s.size(); ++w) {
      if (!params_present(s.world(w), inst)) continue;
      ++rep.evaluations;
      if (!ev.eval(w, inst)) rep.failures.push_back({t, w, sigma, inst});
    }
  }
  return rep;
}

FOFormula converse_barcan(const std::string& var, const FOFormula& psi) {
  return FOFormula::make_implies(FOFormula::box(FOFormula::forall(var, psi)),
                                 FOFormula::forall(var, FOFormula::box(psi)));
}

SchemeReport barcan_check(const PotentialistSystem& s, const std::string& var, const std::vector<FOFormula>& bodies,
                          std::size_t trials, std::uint64_t seed) {
  if (bodies.empty()) throw std::invalid_argument("empty body pool");
  for (const auto& b : bodies) {
    auto fv = free_variables(b);
    if (fv.size() > 1 || (fv.size() == 1 && *fv.begin() != var)) {
      throw std::invalid_argument("body has free variables other than " + var + ": " + to_string(b));
    }
  }
  SchemeReport rep;
  Evaluator ev(s);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, t);
    const FOFormula inst = converse_barcan(var, bodies[std::uniform_int_distribution<std::size_t>(0, bodies.size() - 1)(rng)]);
    ++rep.trials;
    for (std::size_t w = 0; w < s.size(); ++w) {
      if (!params_present(s.world(w), inst)) continue;
      ++rep.evaluations;
      if (!ev.eval(w, inst)) rep.failures.push_back({t, w, Substitution{}, inst});
    }
  }
  return rep;
}

}  // namespace potentia
