#include "potentia/kripke.hpp"

#include <bit>
#include <functional>
#include <stdexcept>

namespace potentia {

Frame::Frame(std::size_t worlds) : succ_(worlds, 0) {
  if (worlds > kMaxFrameWorlds) throw std::length_error("frames are limited to 64 worlds");
}

Frame Frame::from_matrix(const std::vector<std::vector<bool>>& access) {
  Frame f(access.size());
  for (std::size_t i = 0; i < access.size(); ++i) {
    if (access[i].size() != access.size()) throw std::invalid_argument("access matrix is not square");
    for (std::size_t j = 0; j < access.size(); ++j) {
      if (access[i][j]) f.set_access(i, j);
    }
  }
  return f;
}

void Frame::set_access(std::size_t from, std::size_t to, bool value) {
  if (from >= size() || to >= size()) throw std::out_of_range("world index out of range");
  if (value) succ_[from] |= world_bit(to);
  else succ_[from] &= ~world_bit(to);
}

KripkeModel::KripkeModel(Frame frame, std::size_t var_count)
    : frame_(std::move(frame)), extension_(var_count, 0) {}

KripkeModel::KripkeModel(Frame frame, std::size_t var_count, const std::vector<std::set<int>>& valuation)
    : KripkeModel(std::move(frame), var_count) {
  if (valuation.size() != frame_.size()) throw std::invalid_argument("valuation size does not match frame");
  for (std::size_t w = 0; w < valuation.size(); ++w) {
    for (int v : valuation[w]) set(w, v);
  }
}

bool KripkeModel::holds(std::size_t world, int var) const {
  if (world >= size()) throw std::out_of_range("world index out of range");
  return (extension(var) >> world) & 1;
}

void KripkeModel::set(std::size_t world, int var, bool value) {
  if (world >= size()) throw std::out_of_range("world index out of range");
  if (var < 0 || static_cast<std::size_t>(var) >= extension_.size()) {
    throw std::out_of_range("variable index exceeds the declared variable count");
  }
  if (value) extension_[var] |= world_bit(world);
  else extension_[var] &= ~world_bit(world);
}

WorldSet KripkeModel::extension(int var) const {
  if (var < 0 || static_cast<std::size_t>(var) >= extension_.size()) return 0;
  return extension_[var];
}

std::set<int> KripkeModel::true_at(std::size_t world) const {
  std::set<int> out;
  for (std::size_t v = 0; v < extension_.size(); ++v) {
    if ((extension_[v] >> world) & 1) out.insert(static_cast<int>(v));
  }
  return out;
}

namespace {

template <class Ext>
WorldSet truth_set_with(const Frame& frame, const PropFormula& f, const Ext& ext) {
  const std::size_t n = frame.size();
  const WorldSet all = all_worlds(n);
  switch (f.kind()) {
    case PropKind::Var: return ext(f.index()) & all;
    case PropKind::Top: return all;
    case PropKind::Bot: return 0;
    case PropKind::Not: return ~truth_set_with(frame, f.lhs(), ext) & all;
    case PropKind::And: return truth_set_with(frame, f.lhs(), ext) & truth_set_with(frame, f.rhs(), ext);
    case PropKind::Or: return truth_set_with(frame, f.lhs(), ext) | truth_set_with(frame, f.rhs(), ext);
    case PropKind::Implies:
      return (~truth_set_with(frame, f.lhs(), ext) | truth_set_with(frame, f.rhs(), ext)) & all;
    case PropKind::Iff:
      return ~(truth_set_with(frame, f.lhs(), ext) ^ truth_set_with(frame, f.rhs(), ext)) & all;
    case PropKind::Diamond: {
      WorldSet inner = truth_set_with(frame, f.lhs(), ext);
      WorldSet out = 0;
      for (std::size_t w = 0; w < n; ++w) {
        if (frame.successors(w) & inner) out |= world_bit(w);
      }
      return out;
    }
    case PropKind::Box: {
      WorldSet inner = truth_set_with(frame, f.lhs(), ext);
      WorldSet out = 0;
      for (std::size_t w = 0; w < n; ++w) {
        if ((frame.successors(w) & ~inner) == 0) out |= world_bit(w);
      }
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

WorldSet truth_set(const KripkeModel& m, const PropFormula& f) {
  return truth_set_with(m.frame(), f, [&](int v) { return m.extension(v); });
}

bool eval_prop(const KripkeModel& m, std::size_t world, const PropFormula& f) {
  if (world >= m.size()) throw std::out_of_range("world index out of range");
  return (truth_set(m, f) >> world) & 1;
}

bool is_preorder(const Frame& f) {
  auto p = frame_properties(f);
  return p.reflexive && p.transitive;
}

FrameProperties frame_properties(const Frame& f) {
  const std::size_t n = f.size();
  FrameProperties p;
  p.reflexive = true;
  p.transitive = true;
  p.complete = true;
  bool connected = true;
  for (std::size_t w = 0; w < n; ++w) {
    WorldSet s = f.successors(w);
    if (!((s >> w) & 1)) p.reflexive = false;
    if (s != all_worlds(n)) p.complete = false;
    for (std::size_t u = 0; u < n; ++u) {
      if (!((s >> u) & 1)) {
        if (!f.access(u, w)) connected = false;
        continue;
      }
      if ((f.successors(u) & ~s) != 0) p.transitive = false;
    }
  }
  p.convergent = true;
  for (std::size_t w = 0; w < n && p.convergent; ++w) {
    WorldSet s = f.successors(w);
    for (std::size_t u = 0; u < n && p.convergent; ++u) {
      if (!((s >> u) & 1)) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (((s >> v) & 1) && (f.successors(u) & f.successors(v)) == 0) {
          p.convergent = false;
          break;
        }
      }
    }
  }
  p.linear_preorder = p.reflexive && p.transitive && connected;
  return p;
}

bool frame_valid(const Frame& f, const PropFormula& phi) {
  const auto var_set = variables(phi);
  std::vector<int> vars(var_set.begin(), var_set.end());
  const std::size_t n = f.size();
  const std::size_t bits = vars.size() * n;
  if (bits > 40) throw std::length_error("too many valuations to exhaust");
  const WorldSet all = all_worlds(n);
  std::vector<WorldSet> ext(vars.empty() ? 0 : vars.back() + 1, 0);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    for (std::size_t i = 0; i < vars.size(); ++i) ext[vars[i]] = (code >> (i * n)) & all;
    auto lookup = [&](int v) -> WorldSet {
      return static_cast<std::size_t>(v) < ext.size() ? ext[v] : 0;
    };
    if (truth_set_with(f, phi, lookup) != all) return false;
  }
  return true;
}

ClusterDecomposition clusters(const Frame& f) {
  if (!is_preorder(f)) throw std::invalid_argument("cluster decomposition needs a reflexive transitive frame");
  const std::size_t n = f.size();
  ClusterDecomposition d;
  d.cluster_of.assign(n, SIZE_MAX);
  for (std::size_t w = 0; w < n; ++w) {
    if (d.cluster_of[w] != SIZE_MAX) continue;
    std::size_t id = d.members.size();
    d.members.emplace_back();
    for (std::size_t u = w; u < n; ++u) {
      if (f.access(w, u) && f.access(u, w)) {
        d.cluster_of[u] = id;
        d.members[id].push_back(u);
      }
    }
  }
  const std::size_t c = d.members.size();
  d.order.assign(c, std::vector<bool>(c, false));
  for (std::size_t a = 0; a < c; ++a) {
    for (std::size_t b = 0; b < c; ++b) d.order[a][b] = f.access(d.members[a][0], d.members[b][0]);
  }
  return d;
}

bool is_pre_boolean_algebra(const Frame& f) {
  auto d = clusters(f);
  const std::size_t c = d.count();
  // bottom: a cluster below every cluster
  std::size_t bottom = SIZE_MAX;
  for (std::size_t a = 0; a < c && bottom == SIZE_MAX; ++a) {
    bool below_all = true;
    for (std::size_t b = 0; b < c; ++b) below_all = below_all && d.order[a][b];
    if (below_all) bottom = a;
  }
  if (bottom == SIZE_MAX) return false;
  std::vector<std::size_t> atoms;
  for (std::size_t a = 0; a < c; ++a) {
    if (a == bottom) continue;
    bool minimal = true;
    for (std::size_t b = 0; b < c; ++b) {
      if (b != a && b != bottom && d.order[b][a]) minimal = false;
    }
    if (minimal) atoms.push_back(a);
  }
  if (atoms.size() >= 63 || c != (std::size_t{1} << atoms.size())) return false;
  std::vector<std::uint64_t> code(c, 0);
  std::vector<bool> used(c, false);
  for (std::size_t a = 0; a < c; ++a) {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (d.order[atoms[i]][a]) code[a] |= std::uint64_t{1} << i;
    }
    if (used[code[a]]) return false;
    used[code[a]] = true;
  }
  for (std::size_t a = 0; a < c; ++a) {
    for (std::size_t b = 0; b < c; ++b) {
      bool subset = (code[a] & ~code[b]) == 0;
      if (subset != d.order[a][b]) return false;
    }
  }
  return true;
}

std::size_t FrameShape::world_count() const {
  switch (cls) {
    case FrameClass::Complete:
    case FrameClass::Preorder: return blocks;
    case FrameClass::Linear: return blocks * cluster_size;
    case FrameClass::PreBoolean: return (std::size_t{1} << blocks) * cluster_size;
  }
  return 0;
}

Frame generate_frame(const FrameShape& shape) {
  if (shape.blocks == 0 && shape.cls != FrameClass::PreBoolean) throw std::invalid_argument("frame size must be positive");
  if (shape.cluster_size == 0) throw std::invalid_argument("cluster size must be positive");
  if (shape.cls == FrameClass::PreBoolean && shape.blocks >= 7) throw std::length_error("too many atoms");
  const std::size_t n = shape.world_count();
  Frame f(n);
  const std::size_t m = shape.cluster_size;
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t u = 0; u < n; ++u) {
      bool edge = false;
      switch (shape.cls) {
        case FrameClass::Complete: edge = true; break;
        case FrameClass::Linear: edge = w / m <= u / m; break;
        case FrameClass::PreBoolean: edge = ((w / m) & ~(u / m)) == 0; break;
        case FrameClass::Preorder: throw std::invalid_argument("no canonical frame for the preorder class");
      }
      if (edge) f.set_access(w, u);
    }
  }
  return f;
}

std::string world_label(const FrameShape& shape, std::size_t world) {
  const std::size_t m = shape.cluster_size;
  switch (shape.cls) {
    case FrameClass::Complete:
    case FrameClass::Preorder: return "w" + std::to_string(world);
    case FrameClass::Linear: return "w" + std::to_string(world / m) + "_" + std::to_string(world % m);
    case FrameClass::PreBoolean: {
      std::string s = "w{";
      std::size_t set = world / m;
      bool first = true;
      for (std::size_t i = 0; i < shape.blocks; ++i) {
        if ((set >> i) & 1) {
          if (!first) s += ",";
          s += std::to_string(i);
          first = false;
        }
      }
      return s + "}_" + std::to_string(world % m);
    }
  }
  return "?";
}

std::string to_string(FrameClass c) {
  switch (c) {
    case FrameClass::Complete: return "complete";
    case FrameClass::Linear: return "linear";
    case FrameClass::PreBoolean: return "preboolean";
    case FrameClass::Preorder: return "preorder";
  }
  return "?";
}

}  // namespace potentia
