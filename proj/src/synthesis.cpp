#include "potentia/synthesis.hpp"

#include "potentia/sat.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace potentia {

std::string to_string(Theory t) {
  switch (t) {
    case Theory::S4: return "S4";
    case Theory::S4_2: return "S4.2";
    case Theory::S4_3: return "S4.3";
    case Theory::S5: return "S5";
  }
  return "?";
}

Theory parse_theory(std::string_view name) {
  if (name == "S4") return Theory::S4;
  if (name == "S4.2") return Theory::S4_2;
  if (name == "S4.3") return Theory::S4_3;
  if (name == "S5") return Theory::S5;
  throw std::invalid_argument("unknown theory '" + std::string(name) + "'");
}

FrameClass frame_class(Theory t) {
  switch (t) {
    case Theory::S4: return FrameClass::Preorder;
    case Theory::S4_2: return FrameClass::PreBoolean;
    case Theory::S4_3: return FrameClass::Linear;
    case Theory::S5: return FrameClass::Complete;
  }
  return FrameClass::Preorder;
}

namespace {

// Off-diagonal adjacency bits, row-major.
std::uint64_t frame_code(const Frame& f) {
  std::uint64_t code = 0;
  int bit = 0;
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b) {
      if (a == b) continue;
      if (f.access(a, b)) code |= std::uint64_t{1} << bit;
      ++bit;
    }
  return code;
}

Frame frame_from_code(std::size_t n, std::uint64_t code) {
  Frame f(n);
  int bit = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) {
        f.set_access(a, a);
        continue;
      }
      if ((code >> bit) & 1) f.set_access(a, b);
      ++bit;
    }
  return f;
}

bool transitive(const Frame& f) {
  for (std::size_t a = 0; a < f.size(); ++a) {
    WorldSet reach = 0;
    WorldSet succ = f.successors(a);
    for (std::size_t b = 0; b < f.size(); ++b)
      if ((succ >> b) & 1) reach |= f.successors(b);
    if (reach != succ) return false;
  }
  return true;
}

bool rooted(const Frame& f) {
  for (std::size_t a = 0; a < f.size(); ++a)
    if (f.successors(a) == all_worlds(f.size())) return true;
  return false;
}

std::uint64_t canonical_code(const Frame& f) {
  const std::size_t n = f.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = ~std::uint64_t{0};
  do {
    Frame g(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (f.access(a, b)) g.set_access(perm[a], perm[b]);
    best = std::min(best, frame_code(g));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Rooted preorders on n worlds up to isomorphism, by canonical code.
const std::vector<Frame>& rooted_preorders(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::vector<Frame>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::uint64_t> codes;
  const int bits = static_cast<int>(n * (n - 1));
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    Frame f = frame_from_code(n, code);
    if (!transitive(f) || !rooted(f)) continue;
    if (canonical_code(f) == code) codes.push_back(code);
  }
  std::vector<Frame> out;
  for (auto c : codes) out.push_back(frame_from_code(n, c));
  return cache.emplace(n, std::move(out)).first->second;
}

// Tseitin encoding of "φ fails somewhere" on a fixed frame. Valuation
// variables come first, ordered by (variable, world).
struct Encoding {
  SatSolver solver;
  std::vector<int> vars;                 // propositional indices in φ
  std::vector<std::vector<int>> val;     // val[k][u]: SAT var for p_{vars[k]} at u
};

void encode(Encoding& e, const Frame& frame, const PropFormula& phi) {
  const std::size_t n = frame.size();
  const auto var_set = variables(phi);
  e.vars.assign(var_set.begin(), var_set.end());
  std::map<int, std::size_t> var_pos;
  for (std::size_t k = 0; k < e.vars.size(); ++k) {
    var_pos[e.vars[k]] = k;
    std::vector<int> row;
    for (std::size_t u = 0; u < n; ++u) row.push_back(e.solver.new_var());
    e.val.push_back(std::move(row));
  }
  std::map<PropFormula, std::vector<int>> lit;
  auto& s = e.solver;
  for (const auto& f : subformulas(phi)) {
    std::vector<int> x(n);
    if (f.kind() == PropKind::Var) {
      x = e.val[var_pos.at(f.index())];
      lit.emplace(f, std::move(x));
      continue;
    }
    for (std::size_t u = 0; u < n; ++u) x[u] = s.new_var();
    for (std::size_t u = 0; u < n; ++u) {
      const int o = x[u];
      switch (f.kind()) {
        case PropKind::Top: s.add_clause({o}); break;
        case PropKind::Bot: s.add_clause({-o}); break;
        case PropKind::Not: {
          const int a = lit.at(f.lhs())[u];
          s.add_clause({-o, -a});
          s.add_clause({o, a});
          break;
        }
        case PropKind::And: {
          const int a = lit.at(f.lhs())[u], b = lit.at(f.rhs())[u];
          s.add_clause({-o, a});
          s.add_clause({-o, b});
          s.add_clause({o, -a, -b});
          break;
        }
        case PropKind::Or: {
          const int a = lit.at(f.lhs())[u], b = lit.at(f.rhs())[u];
          s.add_clause({o, -a});
          s.add_clause({o, -b});
          s.add_clause({-o, a, b});
          break;
        }
        case PropKind::Implies: {
          const int a = lit.at(f.lhs())[u], b = lit.at(f.rhs())[u];
          s.add_clause({o, a});
          s.add_clause({o, -b});
          s.add_clause({-o, -a, b});
          break;
        }
        case PropKind::Iff: {
          const int a = lit.at(f.lhs())[u], b = lit.at(f.rhs())[u];
          s.add_clause({-o, -a, b});
          s.add_clause({-o, a, -b});
          s.add_clause({o, a, b});
          s.add_clause({o, -a, -b});
          break;
        }
        case PropKind::Diamond:
        case PropKind::Box: {
          const auto& a = lit.at(f.lhs());
          const bool dia = f.kind() == PropKind::Diamond;
          std::vector<int> big{dia ? -o : o};
          for (std::size_t v = 0; v < n; ++v) {
            if (!frame.access(u, v)) continue;
            // ◇: a_v → o, o → ⋁ a_v.   □: o → a_v, ⋀ a_v → o.
            if (dia) {
              s.add_clause({o, -a[v]});
              big.push_back(a[v]);
            } else {
              s.add_clause({-o, a[v]});
              big.push_back(-a[v]);
            }
          }
          s.add_clause(big);
          break;
        }
        case PropKind::Var: break;
      }
    }
    lit.emplace(f, std::move(x));
  }
  std::vector<int> fails;
  for (int o : lit.at(phi)) fails.push_back(-o);
  s.add_clause(fails);
}

std::optional<Countermodel> search_frame(const Frame& frame, const PropFormula& phi) {
  Encoding e;
  encode(e, frame, phi);
  if (!e.solver.solve()) return std::nullopt;
  // Fix valuation bits false-first in order; the last model stays consistent
  // with every decision made so far.
  std::vector<int> fixed;
  std::vector<bool> model;
  for (auto& row : e.val)
    for (int v : row) model.push_back(e.solver.model_value(v));
  std::size_t k = 0;
  for (auto& row : e.val)
    for (int v : row) {
      if (!model[k]) {
        fixed.push_back(-v);
      } else {
        auto trial = fixed;
        trial.push_back(-v);
        if (e.solver.solve(trial)) {
          fixed = std::move(trial);
          std::size_t j = 0;
          for (auto& r2 : e.val)
            for (int v2 : r2) model[j++] = e.solver.model_value(v2);
        } else {
          fixed.push_back(v);
        }
      }
      ++k;
    }
  const int max_var = e.vars.empty() ? -1 : e.vars.back();
  KripkeModel m(frame, static_cast<std::size_t>(max_var + 1));
  k = 0;
  for (std::size_t i = 0; i < e.vars.size(); ++i)
    for (std::size_t u = 0; u < frame.size(); ++u)
      if (model[k++]) m.set(u, e.vars[i]);
  const WorldSet truth = truth_set(m, phi);
  const WorldSet fail = all_worlds(frame.size()) & ~truth;
  if (fail == 0) throw std::logic_error("countermodel search: decoded model does not refute the formula");
  Countermodel out;
  out.model = std::move(m);
  out.world = static_cast<std::size_t>(std::countr_zero(fail));
  return out;
}

WorldSet generated(const Frame& f, std::size_t w) { return f.successors(w); }

}  // namespace

std::vector<std::pair<Frame, std::optional<FrameShape>>> candidate_frames(Theory t, std::size_t max_worlds,
                                                                          std::size_t max_cluster) {
  std::vector<std::pair<Frame, std::optional<FrameShape>>> out;
  max_worlds = std::min<std::size_t>(max_worlds, 64);
  max_cluster = std::max<std::size_t>(max_cluster, 1);
  auto add = [&](FrameShape shape) { out.emplace_back(generate_frame(shape), shape); };
  switch (t) {
    case Theory::S5:
      for (std::size_t n = 1; n <= std::min(max_worlds, max_cluster); ++n) add({FrameClass::Complete, n, 1});
      break;
    case Theory::S4_3:
      for (std::size_t c = 1; c <= max_worlds; ++c)
        for (std::size_t m = 1; m <= max_cluster && c * m <= max_worlds; ++m) add({FrameClass::Linear, c, m});
      break;
    case Theory::S4_2:
      for (std::size_t a = 0; a < 6 && (std::size_t{1} << a) <= max_worlds; ++a)
        for (std::size_t m = 1; m <= max_cluster && (std::size_t{1} << a) * m <= max_worlds; ++m)
          add({FrameClass::PreBoolean, a, m});
      break;
    case Theory::S4:
      for (std::size_t n = 1; n <= std::min(max_worlds, kMaxPreorderWorlds); ++n)
        for (const auto& f : rooted_preorders(n)) out.emplace_back(f, std::nullopt);
      break;
  }
  return out;
}

std::optional<Countermodel> find_countermodel(const PropFormula& phi, Theory t, std::size_t max_worlds) {
  if (max_worlds == 0) throw std::invalid_argument("max_worlds must be positive");
  const std::size_t nvars = variables(phi).size();
  const std::size_t max_cluster = nvars >= 6 ? 64 : std::size_t{1} << nvars;
  for (auto& [frame, shape] : candidate_frames(t, max_worlds, max_cluster)) {
    if (auto m = search_frame(frame, phi)) {
      m->cls = frame_class(t);
      m->shape = shape;
      return m;
    }
  }
  return std::nullopt;
}

std::size_t default_bound(const PropFormula& phi, std::size_t cap) {
  const std::size_t k = subformulas(phi).size();
  return k >= 63 ? cap : std::min(cap, std::size_t{1} << k);
}

Countermodel uniformize(const Countermodel& M, std::size_t m) {
  const auto cl = clusters(M.model.frame());
  for (const auto& members : cl.members)
    if (members.size() > m) throw std::invalid_argument("uniformize: a cluster is larger than the target size");
  // new world -> original world
  std::vector<std::size_t> origin;
  std::vector<std::size_t> image(M.model.size());
  for (const auto& members : cl.members) {
    for (auto u : members) {
      image[u] = origin.size();
      origin.push_back(u);
    }
    for (std::size_t k = members.size(); k < m; ++k) origin.push_back(members.front());
  }
  const std::size_t n = origin.size();
  if (n > 64) throw std::length_error("uniformize: more than 64 worlds");
  Frame f(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (M.model.frame().access(origin[a], origin[b])) f.set_access(a, b);
  KripkeModel km(f, M.model.var_count());
  for (std::size_t a = 0; a < n; ++a)
    for (int v : M.model.true_at(origin[a])) km.set(a, v);
  Countermodel out{std::move(km), image[M.world], M.cls, M.shape};
  if (out.shape) {
    if (out.shape->cls == FrameClass::Complete) out.shape->blocks = m;
    else out.shape->cluster_size = m;
  }
  return out;
}

Countermodel generated_submodel(const Countermodel& M) {
  const Frame& f = M.model.frame();
  const WorldSet keep = generated(f, M.world);
  std::vector<std::size_t> origin;
  for (std::size_t u = 0; u < f.size(); ++u)
    if ((keep >> u) & 1) origin.push_back(u);
  const std::size_t n = origin.size();
  Frame g(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (f.access(origin[a], origin[b])) g.set_access(a, b);
  KripkeModel km(g, M.model.var_count());
  std::size_t world = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (int v : M.model.true_at(origin[a])) km.set(a, v);
    if (origin[a] == M.world) world = a;
  }
  Countermodel out{std::move(km), world, M.cls, M.shape};
  if (out.shape) {
    auto& sh = *out.shape;
    if (sh.cls == FrameClass::Linear) sh.blocks -= M.world / sh.cluster_size;
    if (sh.cls == FrameClass::PreBoolean)
      sh.blocks -= static_cast<std::size_t>(std::popcount(M.world / sh.cluster_size));
  }
  return out;
}

Substitution substitution_from_labels(const KripkeModel& M, const std::vector<FOFormula>& labels) {
  if (labels.size() != M.size()) throw std::invalid_argument("one label per world required");
  Substitution sigma;
  for (std::size_t i = 0; i < M.var_count(); ++i) {
    std::vector<FOFormula> parts;
    for (std::size_t u = 0; u < M.size(); ++u)
      if (M.holds(u, static_cast<int>(i))) parts.push_back(labels[u]);
    sigma.set(static_cast<int>(i), disjunction(parts));
  }
  return sigma;
}

namespace {

void require_cert(const ControlCertificate& c, ControlKind kind, std::size_t w) {
  if (c.kind() != kind) throw std::invalid_argument("expected a " + to_string(kind) + " certificate");
  if (!c.verified()) throw std::invalid_argument("certificate is not verified");
  if (c.base_world() != w) throw std::invalid_argument("certificate was verified at a different base world");
}

std::vector<FOFormula> companion_dial(const ControlCertificate& c) {
  const Companion comp = c.companion() ? *c.companion() : Companion::trivial_dial();
  return comp.kind == CompanionKind::Dial ? comp.formulas : switches_dial_formulas(comp.formulas);
}

bool shape_is(const Countermodel& M, FrameClass cls, std::size_t blocks, std::size_t cluster) {
  return M.shape && M.shape->cls == cls && M.shape->blocks == blocks && M.shape->cluster_size == cluster &&
         M.model.frame() == generate_frame(*M.shape);
}

Association s5_labels(const std::vector<FOFormula>& switches, const Countermodel& M) {
  const std::size_t worlds = std::size_t{1} << switches.size();
  if (M.model.size() != worlds || M.model.frame() != generate_frame({FrameClass::Complete, worlds, 1}))
    throw std::invalid_argument("simulate_s5: countermodel must be complete with 2^m worlds");
  Association a;
  a.labels = switches_dial_formulas(switches);
  a.sigma = substitution_from_labels(M.model, a.labels);
  return a;
}

Association s42_labels(const std::vector<FOFormula>& buttons, const std::vector<FOFormula>& dial,
                       const Countermodel& M) {
  const std::size_t n = buttons.size(), m = dial.size();
  if (!shape_is(M, FrameClass::PreBoolean, n, m))
    throw std::invalid_argument("simulate_s42: countermodel must be preboolean(buttons, dial size)");
  Association a;
  for (std::size_t set = 0; set < (std::size_t{1} << n); ++set)
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<FOFormula> parts;
      for (std::size_t i = 0; i < n; ++i)
        if ((set >> i) & 1) parts.push_back(buttons[i]);
      for (std::size_t i = 0; i < n; ++i)
        if (!((set >> i) & 1)) parts.push_back(FOFormula::make_not(buttons[i]));
      parts.push_back(dial[j]);
      a.labels.push_back(conjunction(parts));
    }
  a.sigma = substitution_from_labels(M.model, a.labels);
  return a;
}

Association s43_labels(const std::vector<FOFormula>& r, const std::vector<FOFormula>& dial, const Countermodel& M) {
  const std::size_t n = r.size(), m = dial.size();
  if (!shape_is(M, FrameClass::Linear, n + 1, m))
    throw std::invalid_argument("simulate_s43: countermodel must be linear(ratchet length + 1, dial size)");
  Association a;
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<FOFormula> parts;
      if (i > 0) parts.push_back(r[i - 1]);
      if (i < n) parts.push_back(FOFormula::make_not(r[i]));
      parts.push_back(dial[j]);
      a.labels.push_back(conjunction(parts));
    }
  a.sigma = substitution_from_labels(M.model, a.labels);
  return a;
}

}  // namespace

Association simulate_s5(const PotentialistSystem& s, std::size_t w, const ControlCertificate& switches,
                        const Countermodel& M) {
  (void)s;
  require_cert(switches, ControlKind::SwitchFamily, w);
  return s5_labels(switches.formulas(), M);
}

Association simulate_s42(const PotentialistSystem& s, std::size_t w, const ControlCertificate& buttons,
                         const Countermodel& M) {
  require_cert(buttons, ControlKind::ButtonFamily, w);
  for (const auto& b : buttons.formulas())
    if (is_pushed(s, w, b)) throw std::invalid_argument("simulate_s42: a button is already pushed at the base");
  return s42_labels(buttons.formulas(), companion_dial(buttons), M);
}

Association simulate_s43(const PotentialistSystem& s, std::size_t w, const ControlCertificate& ratchet,
                         const Countermodel& M) {
  require_cert(ratchet, ControlKind::Ratchet, w);
  if (!ratchet.formulas().empty() && eval_fo(s, w, ratchet.formulas()[0]))
    throw std::invalid_argument("simulate_s43: ratchet volume is not zero at the base");
  return s43_labels(ratchet.formulas(), companion_dial(ratchet), M);
}

BisimulationReport verify_bisimulation(const PotentialistSystem& s, std::size_t base, const Countermodel& M,
                                       const Association& assoc, const PropFormula& phi) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  BisimulationReport rep;
  rep.label_of.assign(s.size(), kNone);
  if (assoc.labels.size() != M.model.size()) {
    rep.message = "association has the wrong number of labels";
    return rep;
  }
  Evaluator ev(s);
  const WorldSet reach = s.frame().successors(base);
  for (std::size_t u = 0; u < s.size(); ++u) {
    if (!((reach >> u) & 1)) continue;
    std::size_t count = 0;
    for (std::size_t l = 0; l < assoc.labels.size(); ++l)
      if (ev.eval(u, assoc.labels[l])) {
        ++count;
        rep.label_of[u] = l;
      }
    if (count != 1) {
      rep.witness_world = u;
      rep.message = "world " + s.name(u) + (count == 0 ? " satisfies no label" : " satisfies several labels");
      rep.label_of[u] = kNone;
      return rep;
    }
  }
  for (std::size_t u = 0; u < s.size(); ++u) {
    if (!((reach >> u) & 1)) continue;
    WorldSet seen = 0;
    const WorldSet succ = s.frame().successors(u);
    for (std::size_t v = 0; v < s.size(); ++v)
      if ((succ >> v) & 1) seen |= world_bit(rep.label_of[v]);
    (seen == M.model.frame().successors(rep.label_of[u]) ? rep.live : rep.frontier).push_back(u);
  }
  if (std::find(rep.live.begin(), rep.live.end(), base) == rep.live.end()) {
    rep.witness_world = base;
    rep.message = "the base world does not realize its label's successors";
    return rep;
  }
  const auto subs = subformulas(phi);
  std::vector<FOFormula> images;
  for (const auto& chi : subs) images.push_back(substitute(chi, assoc.sigma));
  for (auto u : rep.live) {
    for (std::size_t k = 0; k < subs.size(); ++k) {
      if (ev.eval(u, images[k]) != eval_prop(M.model, rep.label_of[u], subs[k])) {
        rep.witness_world = u;
        rep.witness_formula = subs[k];
        rep.message = "world " + s.name(u) + " disagrees with its label on " + to_string(subs[k]);
        return rep;
      }
    }
  }
  rep.ok = true;
  return rep;
}

std::vector<FOFormula> collapse_dial(const std::vector<FOFormula>& dial, std::size_t size) {
  if (size == 0 || size > dial.size()) throw std::invalid_argument("collapse_dial: bad target size");
  if (size == 1) return {FOFormula::top()};
  if (size == dial.size()) return dial;
  std::vector<FOFormula> out(dial.begin(), dial.begin() + static_cast<std::ptrdiff_t>(size - 1));
  out.push_back(FOFormula::make_not(disjunction(out)));
  return out;
}

SynthesisResult synthesize(const PotentialistSystem& s, std::size_t base, const PropFormula& phi,
                           const ControlCertificate& controls, std::size_t max_worlds) {
  SynthesisResult res;
  switch (controls.kind()) {
    case ControlKind::SwitchFamily: res.theory = Theory::S5; break;
    case ControlKind::ButtonFamily: res.theory = Theory::S4_2; break;
    case ControlKind::Ratchet: res.theory = Theory::S4_3; break;
    default: throw std::invalid_argument("synthesize needs switches, buttons or a ratchet");
  }
  require_cert(controls, controls.kind(), base);

  auto found = find_countermodel(phi, res.theory, max_worlds);
  if (!found) {
    res.message = "no countermodel in " + to_string(frame_class(res.theory)) + " frames up to " +
                  std::to_string(max_worlds) + " worlds";
    return res;
  }
  Countermodel M = generated_submodel(*found);
  const auto& shape = *M.shape;
  const auto& fs = controls.formulas();

  // Adapt the controls to the countermodel's shape and build the labels.
  Association assoc;
  std::optional<ControlCertificate> used;
  if (res.theory == Theory::S5) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < M.model.size()) ++k;
    if (k > fs.size()) {
      res.message = "countermodel needs " + std::to_string(k) + " switches, only " + std::to_string(fs.size()) +
                    " available";
      return res;
    }
    M = uniformize(M, std::size_t{1} << k);
    std::vector<FOFormula> prefix(fs.begin(), fs.begin() + static_cast<std::ptrdiff_t>(k));
    if (k > 0) used = certify(s, ControlCertificate(ControlKind::SwitchFamily, prefix, base));
    assoc = s5_labels(prefix, M);
  } else {
    const std::size_t need = res.theory == Theory::S4_2 ? shape.blocks : shape.blocks - 1;
    const auto dial = companion_dial(controls);
    if (need > fs.size() || shape.cluster_size > dial.size()) {
      res.message = "countermodel shape " + to_string(shape.cls) + "(" + std::to_string(shape.blocks) + "," +
                    std::to_string(shape.cluster_size) + ") exceeds the available controls";
      return res;
    }
    std::vector<FOFormula> prefix(fs.begin(), fs.begin() + static_cast<std::ptrdiff_t>(need));
    const auto d = collapse_dial(dial, shape.cluster_size);
    const Companion comp{CompanionKind::Dial, d};
    if (res.theory == Theory::S4_2) {
      used = certify(s, ControlCertificate(ControlKind::ButtonFamily, prefix, base, comp));
      for (const auto& b : prefix)
        if (is_pushed(s, base, b)) {
          res.message = "a button is already pushed at the base world";
          return res;
        }
      assoc = s42_labels(prefix, d, M);
    } else if (need > 0) {
      used = certify(s, ControlCertificate(ControlKind::Ratchet, prefix, base, comp));
      if (eval_fo(s, base, prefix[0])) {
        res.message = "ratchet volume is not zero at the base world";
        return res;
      }
      assoc = s43_labels(prefix, d, M);
    } else {
      if (!verify_dial(s, d, base)) {
        res.message = "collapsed dial does not verify";
        return res;
      }
      assoc = s43_labels(prefix, d, M);
    }
  }
  if (used && !used->verified()) {
    res.message = "adapted " + to_string(used->kind()) + " certificate does not verify";
    return res;
  }

  // Move the failing world onto the base world's label; worlds of one
  // cluster are interchangeable.
  std::vector<std::size_t> base_labels;
  for (std::size_t l = 0; l < assoc.labels.size(); ++l)
    if (eval_fo(s, base, assoc.labels[l])) base_labels.push_back(l);
  const auto cl = clusters(M.model.frame());
  if (base_labels.size() != 1 || cl.cluster_of[base_labels[0]] != cl.cluster_of[M.world]) {
    res.message = "the base world is not labelled by the countermodel's bottom cluster";
    return res;
  }
  const std::size_t target = base_labels[0];
  if (target != M.world) {
    KripkeModel km(M.model.frame(), M.model.var_count());
    for (std::size_t u = 0; u < km.size(); ++u) {
      const std::size_t from = u == target ? M.world : u == M.world ? target : u;
      for (int v : M.model.true_at(from)) km.set(u, v);
    }
    M.model = std::move(km);
    M.world = target;
    assoc.sigma = substitution_from_labels(M.model, assoc.labels);
  }

  res.countermodel = M;
  res.verdict = refute_validity(s, base, phi, assoc.sigma);
  res.bisimulation = verify_bisimulation(s, base, M, assoc, phi);
  res.association = std::move(assoc);
  return res;
}

}  // namespace potentia
