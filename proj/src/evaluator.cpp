// Compiled evaluation of first-order modal formulas over potentialist systems.
//
// A formula is compiled per call: bound variables become slots indexed by
// binding depth, parameters and env values become constants. Quantifiers whose
// body starts with a binary atom linking the bound variable to an outer term
// iterate only over that term's relation partners. Closed subformulas are
// cached per world under their source node, which stays alive in `keep`.

#include "potentia/potentialist.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

namespace potentia {

namespace {

struct CTerm {
  int slot = -1;  // ≥ 0: bound variable
  ElementId value = 0;
};

struct CNode {
  FOKind kind = FOKind::Top;
  std::size_t rel = 0;
  std::vector<CTerm> terms;
  int slot = -1;
  const CNode* a = nullptr;
  const CNode* b = nullptr;
  const void* key = nullptr;  // set for closed, env-free nodes
  bool guarded = false;
  std::size_t guard_rel = 0;
  bool bound_first = false;  // guard atom is R(v, other) rather than R(other, v)
  CTerm guard_other;
};

constexpr std::uint64_t kEnvBit = std::uint64_t{1} << 63;
constexpr std::size_t kCacheLimit = 1u << 20;

}  // namespace

struct Evaluator::Impl {
  const PotentialistSystem& sys;
  std::vector<std::unique_ptr<CNode>> arena;
  std::vector<FOFormula> keep;
  std::unordered_map<const void*, std::vector<signed char>> cache;
  std::vector<ElementId> slots;
  std::vector<ElementId> constants;  // gathered during compilation

  explicit Impl(const PotentialistSystem& s) : sys(s) {}

  struct Scope {
    std::vector<std::string> bound;  // index = slot
    const Env* env;
  };

  CTerm compile_term(const Term& t, const Scope& sc, std::uint64_t& uses) {
    if (!t.is_variable()) {
      CTerm c{-1, parameter_element(t.name)};
      constants.push_back(c.value);
      return c;
    }
    for (std::size_t i = sc.bound.size(); i-- > 0;) {
      if (sc.bound[i] == t.name) {
        uses |= std::uint64_t{1} << i;
        return {static_cast<int>(i), 0};
      }
    }
    auto it = sc.env->find(t.name);
    if (it == sc.env->end()) throw std::invalid_argument("unbound variable '" + t.name + "'");
    uses |= kEnvBit;
    constants.push_back(it->second);
    return {-1, it->second};
  }

  // Looks for a binary atom among the conjuncts of `f` linking slot `v` to a
  // term other than v itself.
  bool find_guard(const CNode* f, int v, CNode& q) {
    if (f->kind == FOKind::And) return find_guard(f->a, v, q) || find_guard(f->b, v, q);
    if (f->kind != FOKind::Atom || f->terms.size() != 2) return false;
    const CTerm& t0 = f->terms[0];
    const CTerm& t1 = f->terms[1];
    if (t0.slot == v && t1.slot != v) {
      q.bound_first = true;
      q.guard_other = t1;
    } else if (t1.slot == v && t0.slot != v) {
      q.bound_first = false;
      q.guard_other = t0;
    } else {
      return false;
    }
    q.guarded = true;
    q.guard_rel = f->rel;
    return true;
  }

  const CNode* compile(const FOFormula& f, Scope& sc, std::uint64_t& uses) {
    auto node = std::make_unique<CNode>();
    CNode& n = *node;
    n.kind = f.kind();
    std::uint64_t mine = 0;
    switch (f.kind()) {
      case FOKind::Atom: {
        auto r = sys.signature().find(f.relation());
        if (!r) throw ParseError(ParseError::Kind::UnknownRelation, 0, {}, "unknown relation '" + f.relation() + "'");
        if (static_cast<int>(f.terms().size()) != sys.signature().relations()[*r].arity) {
          throw ParseError(ParseError::Kind::ArityMismatch, 0, {}, "arity mismatch for '" + f.relation() + "'");
        }
        n.rel = *r;
        for (const auto& t : f.terms()) n.terms.push_back(compile_term(t, sc, mine));
        break;
      }
      case FOKind::Eq:
        for (const auto& t : f.terms()) n.terms.push_back(compile_term(t, sc, mine));
        break;
      case FOKind::Top:
      case FOKind::Bot: break;
      case FOKind::Not:
      case FOKind::Diamond:
      case FOKind::Box: n.a = compile(f.lhs(), sc, mine); break;
      case FOKind::And:
      case FOKind::Or:
      case FOKind::Implies:
      case FOKind::Iff:
        n.a = compile(f.lhs(), sc, mine);
        n.b = compile(f.rhs(), sc, mine);
        break;
      case FOKind::Exists:
      case FOKind::Forall: {
        if (sc.bound.size() >= 63) throw std::length_error("quantifiers nested too deeply");
        n.slot = static_cast<int>(sc.bound.size());
        sc.bound.push_back(f.variable());
        std::uint64_t inner = 0;
        n.a = compile(f.lhs(), sc, inner);
        sc.bound.pop_back();
        mine |= inner & ~(std::uint64_t{1} << n.slot);
        if (n.kind == FOKind::Exists) find_guard(n.a, n.slot, n);
        else if (n.a->kind == FOKind::Implies) find_guard(n.a->a, n.slot, n);
        break;
      }
    }
    // leaves are cheaper to recompute than to look up
    const bool leaf = n.kind == FOKind::Atom || n.kind == FOKind::Eq || n.kind == FOKind::Top || n.kind == FOKind::Bot;
    if (mine == 0 && !leaf) n.key = f.id();
    uses |= mine;
    arena.push_back(std::move(node));
    return arena.back().get();
  }

  ElementId value(const CTerm& t) const { return t.slot >= 0 ? slots[t.slot] : t.value; }

  bool eval(const CNode* n, std::size_t w) {
    if (!n->key) return eval_uncached(n, w);
    auto& v = cache[n->key];
    if (v.empty()) v.assign(sys.size(), -1);
    if (v[w] >= 0) return v[w] != 0;
    const bool r = eval_uncached(n, w);
    cache[n->key][w] = r ? 1 : 0;  // the map may have rehashed meanwhile
    return r;
  }

  bool eval_uncached(const CNode* n, std::size_t w) {
    switch (n->kind) {
      case FOKind::Atom: {
        ElementId buf[8];
        std::vector<ElementId> big;
        ElementId* t = buf;
        if (n->terms.size() > 8) {
          big.resize(n->terms.size());
          t = big.data();
        }
        for (std::size_t i = 0; i < n->terms.size(); ++i) t[i] = value(n->terms[i]);
        return sys.world(w).holds(n->rel, std::span<const ElementId>(t, n->terms.size()));
      }
      case FOKind::Eq: return value(n->terms[0]) == value(n->terms[1]);
      case FOKind::Top: return true;
      case FOKind::Bot: return false;
      case FOKind::Not: return !eval(n->a, w);
      case FOKind::And: return eval(n->a, w) && eval(n->b, w);
      case FOKind::Or: return eval(n->a, w) || eval(n->b, w);
      case FOKind::Implies: return !eval(n->a, w) || eval(n->b, w);
      case FOKind::Iff: return eval(n->a, w) == eval(n->b, w);
      case FOKind::Diamond:
      case FOKind::Box: {
        const bool want = n->kind == FOKind::Diamond;
        WorldSet succ = sys.frame().successors(w);
        while (succ) {
          std::size_t u = static_cast<std::size_t>(std::countr_zero(succ));
          succ &= succ - 1;
          if (eval(n->a, u) == want) return want;
        }
        return !want;
      }
      case FOKind::Exists:
      case FOKind::Forall: {
        const bool want = n->kind == FOKind::Exists;
        std::span<const ElementId> range;
        if (n->guarded) {
          ElementId other = value(n->guard_other);
          range = n->bound_first ? sys.predecessors(w, n->guard_rel, other) : sys.successors(w, n->guard_rel, other);
        } else {
          range = sys.world(w).domain();
        }
        if (slots.size() <= static_cast<std::size_t>(n->slot)) slots.resize(n->slot + 1);
        const ElementId saved = slots[n->slot];
        for (ElementId e : range) {
          slots[n->slot] = e;
          if (eval(n->a, w) == want) {
            slots[n->slot] = saved;
            return want;
          }
        }
        slots[n->slot] = saved;
        return !want;
      }
    }
    throw std::logic_error("unreachable");
  }
};

Evaluator::Evaluator(const PotentialistSystem& system) : sys_(system), impl_(std::make_unique<Impl>(system)) {}
Evaluator::~Evaluator() = default;

void Evaluator::clear_cache() {
  impl_->cache.clear();
  impl_->arena.clear();
  impl_->keep.clear();
}

bool Evaluator::eval(std::size_t world, const FOFormula& f, const Env& env) {
  if (world >= sys_.size()) throw std::out_of_range("world index out of range");
  Impl& im = *impl_;
  if (im.cache.size() > kCacheLimit) clear_cache();
  im.constants.clear();
  Impl::Scope sc{{}, &env};
  std::uint64_t uses = 0;
  const std::size_t mark = im.arena.size();
  const CNode* root = im.compile(f, sc, uses);
  for (ElementId e : im.constants) {
    if (!sys_.world(world).contains(e)) {
      im.arena.resize(mark);
      throw std::invalid_argument("element " + std::to_string(e) + " is not in the domain of world " +
                                  sys_.name(world));
    }
  }
  im.keep.push_back(f);
  const bool r = im.eval(root, world);
  // the compiled tree is only needed again through cache keys
  im.arena.resize(mark);
  return r;
}

}  // namespace potentia
