#pragma once

#include "potentia/formula.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace potentia {

/// Bitmask over the worlds of a frame; frames hold at most 64 worlds.
using WorldSet = std::uint64_t;
inline constexpr std::size_t kMaxFrameWorlds = 64;

inline WorldSet world_bit(std::size_t w) { return WorldSet{1} << w; }
inline WorldSet all_worlds(std::size_t n) { return n >= 64 ? ~WorldSet{0} : (WorldSet{1} << n) - 1; }

class Frame {
 public:
  Frame() = default;
  /// Frame with `worlds` worlds and an empty accessibility relation.
  explicit Frame(std::size_t worlds);
  static Frame from_matrix(const std::vector<std::vector<bool>>& access);

  std::size_t size() const { return succ_.size(); }
  bool access(std::size_t from, std::size_t to) const { return (succ_.at(from) >> to) & 1; }
  void set_access(std::size_t from, std::size_t to, bool value = true);
  WorldSet successors(std::size_t w) const { return succ_.at(w); }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::vector<WorldSet> succ_;
};

class KripkeModel {
 public:
  KripkeModel() = default;
  KripkeModel(Frame frame, std::size_t var_count);
  KripkeModel(Frame frame, std::size_t var_count, const std::vector<std::set<int>>& valuation);

  const Frame& frame() const { return frame_; }
  std::size_t var_count() const { return extension_.size(); }
  std::size_t size() const { return frame_.size(); }

  bool holds(std::size_t world, int var) const;
  void set(std::size_t world, int var, bool value = true);
  /// Worlds where p_var is true (empty for variables beyond var_count).
  WorldSet extension(int var) const;
  std::set<int> true_at(std::size_t world) const;

  friend bool operator==(const KripkeModel&, const KripkeModel&) = default;

 private:
  Frame frame_;
  std::vector<WorldSet> extension_;
};

/// Set of worlds of `m` where `f` is true.
WorldSet truth_set(const KripkeModel& m, const PropFormula& f);
bool eval_prop(const KripkeModel& m, std::size_t world, const PropFormula& f);

struct FrameProperties {
  bool reflexive = false;
  bool transitive = false;
  /// wRu ∧ wRv ⇒ ∃z (uRz ∧ vRz)
  bool convergent = false;
  bool linear_preorder = false;
  bool complete = false;
  friend bool operator==(const FrameProperties&, const FrameProperties&) = default;
};

FrameProperties frame_properties(const Frame& f);
bool is_preorder(const Frame& f);

/// True iff `phi` holds at every world under every valuation of its variables.
/// Decided by exhausting all 2^(vars·worlds) valuations.
bool frame_valid(const Frame& f, const PropFormula& phi);

struct ClusterDecomposition {
  std::vector<std::size_t> cluster_of;     // per world
  std::vector<std::vector<std::size_t>> members;  // per cluster, ascending
  /// order[c][d]: cluster c reaches cluster d (reflexive partial order)
  std::vector<std::vector<bool>> order;
  std::size_t count() const { return members.size(); }
};

/// Mutual-access classes, numbered by their least world. Throws
/// std::invalid_argument unless the frame is a preorder.
ClusterDecomposition clusters(const Frame& f);

bool is_pre_boolean_algebra(const Frame& f);

enum class FrameClass { Complete, Linear, PreBoolean, Preorder };

/// Canonical frame shapes. `blocks` is the world count (Complete), the
/// number of clusters (Linear) or the number of atoms (PreBoolean).
struct FrameShape {
  FrameClass cls = FrameClass::Complete;
  std::size_t blocks = 1;
  std::size_t cluster_size = 1;

  std::size_t world_count() const;
  friend bool operator==(const FrameShape&, const FrameShape&) = default;
};

/// complete(n): all worlds see all worlds. linear(c, m): world i·m+j is w^i_j
/// and sees w^i'_j' iff i ≤ i'. preboolean(a, m): world s·m+j is w^s_j for the
/// subset s of the a atoms (as a bitmask) and sees w^t_k iff s ⊆ t.
Frame generate_frame(const FrameShape& shape);
std::string world_label(const FrameShape& shape, std::size_t world);
std::string to_string(FrameClass c);

}  // namespace potentia
