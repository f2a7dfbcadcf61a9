#pragma once

#include "potentia/control.hpp"
#include "potentia/kripke.hpp"
#include "potentia/potentialist.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace potentia {

enum class Theory { S4, S4_2, S4_3, S5 };
std::string to_string(Theory t);
/// "S4", "S4.2", "S4.3", "S5"; throws std::invalid_argument.
Theory parse_theory(std::string_view name);
/// Complete frame class: preorders, pre-Boolean algebras, linear preorders, complete frames.
FrameClass frame_class(Theory t);

struct Countermodel {
  KripkeModel model;
  std::size_t world = 0;  // where the formula fails
  FrameClass cls = FrameClass::Complete;
  std::optional<FrameShape> shape;  // set for the canonical classes, not for S4
};

/// Largest S4 frame searched: rooted preorders are enumerated up to isomorphism.
inline constexpr std::size_t kMaxPreorderWorlds = 5;

/// Frames of the theory's class with at most `max_worlds` worlds, in search
/// order: complete by size; linear by (clusters, cluster size); pre-Boolean by
/// (atoms, cluster size); rooted preorders by size, then adjacency code.
/// Cluster sizes are capped at `max_cluster` (larger clusters only duplicate
/// valuations).
std::vector<std::pair<Frame, std::optional<FrameShape>>> candidate_frames(Theory t, std::size_t max_worlds,
                                                                          std::size_t max_cluster);

/// First frame in search order admitting a valuation under which φ fails,
/// with the lexicographically least such valuation (p_i at world u is bit
/// (i, u), false before true) and the least failing world under it.
std::optional<Countermodel> find_countermodel(const PropFormula& phi, Theory t, std::size_t max_worlds);
/// min(2^|subformulas(φ)|, cap).
std::size_t default_bound(const PropFormula& phi, std::size_t cap = 8);

/// Pads every cluster to `m` worlds by copying its first member. Throws
/// std::invalid_argument if some cluster is larger than m.
Countermodel uniformize(const Countermodel& M, std::size_t m);
/// The submodel generated by the failing world (canonical shapes only).
Countermodel generated_submodel(const Countermodel& M);

struct Association {
  std::vector<FOFormula> labels;  // Φ_u per world u of the countermodel
  Substitution sigma;             // p_i ↦ ⋁ { Φ_u : p_i true at u }
};

/// σ(p) = disjunction of the labels of the worlds where p holds, by world index.
Substitution substitution_from_labels(const KripkeModel& M, const std::vector<FOFormula>& labels);

/// Switch patterns label a complete model with 2^m worlds.
Association simulate_s5(const PotentialistSystem& s, std::size_t w, const ControlCertificate& switches,
                        const Countermodel& M);
/// Pushed-button set and dial value label preboolean(n, m). The companion
/// must be a dial of m values or switches with 2^k = m.
Association simulate_s42(const PotentialistSystem& s, std::size_t w, const ControlCertificate& buttons,
                         const Countermodel& M);
/// Ratchet volume and dial value label linear(n+1, m).
Association simulate_s43(const PotentialistSystem& s, std::size_t w, const ControlCertificate& ratchet,
                         const Countermodel& M);

struct BisimulationReport {
  bool ok = false;
  /// Worlds reachable from the base whose label's successors are all
  /// realized by reachable worlds, and vice versa; the equivalence is checked there.
  std::vector<std::size_t> live;
  /// Reachable worlds too close to the top of the system to realize every
  /// successor label; not checked.
  std::vector<std::size_t> frontier;
  std::vector<std::size_t> label_of;  // per world of S; SIZE_MAX if no label holds
  std::optional<std::size_t> witness_world;
  std::optional<PropFormula> witness_formula;
  std::string message;
};

/// For every live world U and subformula χ of φ: U ⊨ σ(χ) iff (M, label(U)) ⊨ χ.
/// Fails if a reachable world satisfies no label or several.
BisimulationReport verify_bisimulation(const PotentialistSystem& s, std::size_t base, const Countermodel& M,
                                       const Association& assoc, const PropFormula& phi);

/// Drops all but the first `size` dial values, merging the rest into the last:
/// d'_{size-1} = ¬(d_0 ∨ … ∨ d_{size-2}).
std::vector<FOFormula> collapse_dial(const std::vector<FOFormula>& dial, std::size_t size);

struct SynthesisResult {
  Theory theory = Theory::S5;
  std::optional<Countermodel> countermodel;  // as used for the labelling
  std::optional<Association> association;
  std::optional<BisimulationReport> bisimulation;
  std::optional<Verdict> verdict;  // refute_validity at the base world
  std::string message;             // why no instance was produced
  bool refuted() const { return verdict == Verdict::Fails && bisimulation && bisimulation->ok; }
};

/// The upper-bound pipeline: find a countermodel for φ in the frame class
/// matching the controls (switches → S5, buttons → S4.2, ratchet → S4.3),
/// adapt the controls to its shape, label, and verify. The certificate must
/// be verified at `base`.
SynthesisResult synthesize(const PotentialistSystem& s, std::size_t base, const PropFormula& phi,
                           const ControlCertificate& controls, std::size_t max_worlds = 8);

}  // namespace potentia
