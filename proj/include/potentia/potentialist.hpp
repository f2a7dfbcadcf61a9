#pragma once

#include "potentia/formula.hpp"
#include "potentia/kripke.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace potentia {

/// Individuals are opaque numeric ids shared across worlds; a formula refers
/// to element 12 as the parameter `#12`.
using ElementId = std::uint64_t;
using Env = std::map<std::string, ElementId>;

ElementId parameter_element(const std::string& name);
std::string parameter_name(ElementId e);

/// Finite relational structure. Tuples of each relation are kept sorted.
class Structure {
 public:
  Structure() = default;
  Structure(Signature sig, std::vector<ElementId> domain);
  /// `relations[i]` holds the tuples of the i-th relation of `sig`.
  Structure(Signature sig, std::vector<ElementId> domain, std::vector<std::vector<std::vector<ElementId>>> relations);

  const Signature& signature() const { return sig_; }
  const std::vector<ElementId>& domain() const { return domain_; }
  bool contains(ElementId e) const;

  void add_tuple(std::string_view relation, const std::vector<ElementId>& tuple);
  bool holds(std::size_t relation, std::span<const ElementId> tuple) const;
  std::size_t tuple_count(std::size_t relation) const;
  std::vector<ElementId> tuple(std::size_t relation, std::size_t k) const;
  std::vector<std::vector<ElementId>> tuples(std::size_t relation) const;

  friend bool operator==(const Structure&, const Structure&) = default;

 private:
  void check_tuple(std::size_t relation, std::span<const ElementId> tuple) const;

  Signature sig_;
  std::vector<ElementId> domain_;
  std::vector<std::vector<ElementId>> flat_;  // per relation, tuples back to back in sorted order
};

/// `sub` is a substructure of `sup`: domain inclusion and identical atomic
/// facts over domain(sub).
bool is_substructure(const Structure& sub, const Structure& sup);

enum class AccessMode { Explicit, Substructure };

class PotentialistError : public std::runtime_error {
 public:
  enum class Kind {
    Shape, Signature, NotReflexive, NotTransitive, ShrinkingDomain, AtomicDisagreement
  };
  PotentialistError(Kind kind, std::vector<std::size_t> worlds, const std::string& msg)
      : std::runtime_error(msg), kind_(kind), worlds_(std::move(worlds)) {}
  Kind kind() const { return kind_; }
  const std::vector<std::size_t>& worlds() const { return worlds_; }

 private:
  Kind kind_;
  std::vector<std::size_t> worlds_;
};

/// Validated reflexive, transitive, inflationary Kripke model of structures.
/// Immutable; build with check_potentialist.
class PotentialistSystem {
 public:
  const Signature& signature() const { return sig_; }
  std::size_t size() const { return worlds_.size(); }
  const Structure& world(std::size_t w) const { return worlds_.at(w); }
  const std::vector<Structure>& worlds() const { return worlds_; }
  const std::string& name(std::size_t w) const { return names_.at(w); }
  const std::vector<std::string>& names() const { return names_; }
  const Frame& frame() const { return frame_; }
  bool access(std::size_t from, std::size_t to) const { return frame_.access(from, to); }
  AccessMode mode() const { return mode_; }

  /// Elements e with R(e, x) / R(x, e) for a binary relation R at world w.
  std::span<const ElementId> predecessors(std::size_t w, std::size_t relation, ElementId x) const;
  std::span<const ElementId> successors(std::size_t w, std::size_t relation, ElementId x) const;

 private:
  friend PotentialistSystem check_potentialist(std::vector<Structure>, const Frame&, std::vector<std::string>);
  friend PotentialistSystem check_potentialist(std::vector<Structure>, AccessMode, std::vector<std::string>);
  void build_index();

  struct Adjacency {
    std::unordered_map<ElementId, std::vector<ElementId>> in, out;
  };

  Signature sig_;
  std::vector<Structure> worlds_;
  std::vector<std::string> names_;
  Frame frame_;
  AccessMode mode_ = AccessMode::Explicit;
  std::shared_ptr<const std::vector<std::vector<Adjacency>>> index_;  // [world][relation]
};

/// Validates an explicit accessibility relation. World names default to w0, w1, ...
PotentialistSystem check_potentialist(std::vector<Structure> worlds, const Frame& access,
                                      std::vector<std::string> names = {});
/// Substructure mode derives access from the substructure relation;
/// AccessMode::Explicit is rejected here.
PotentialistSystem check_potentialist(std::vector<Structure> worlds, AccessMode mode,
                                      std::vector<std::string> names = {});

/// Evaluates formulas of the modal language at worlds of a system. Results for
/// closed subformulas are cached per world, keyed by formula node, so reusing
/// one evaluator across related formulas (substitution instances, say) is cheap.
/// Not thread-safe; use one evaluator per thread.
class Evaluator {
 public:
  explicit Evaluator(const PotentialistSystem& system);
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  /// Throws std::invalid_argument if a parameter or env value is outside
  /// domain(w) or a variable is unbound; ParseError on a signature mismatch.
  bool eval(std::size_t world, const FOFormula& f, const Env& env = {});
  void clear_cache();

  const PotentialistSystem& system() const { return sys_; }

 private:
  struct Impl;
  const PotentialistSystem& sys_;
  std::unique_ptr<Impl> impl_;
};

bool eval_fo(const PotentialistSystem& s, std::size_t world, const FOFormula& f, const Env& env = {});

/// One-world system over a single structure; truth there is Tarskian truth.
PotentialistSystem single_world(const Structure& m);
bool eval_structure(const Structure& m, const FOFormula& f, const Env& env = {});

struct CoherenceReport {
  enum class Failure { None, AtomicDisagreement, Unaccommodated };
  bool coherent = false;
  std::optional<Structure> limit;
  Failure failure = Failure::None;
  std::size_t world_a = 0, world_b = 0;  // disagreeing pair, or world_a alone
  ElementId element = 0;                 // unaccommodated element
  std::string message;
};

CoherenceReport coherence(const std::vector<Structure>& worlds);

/// Compares limit truth of nonmodal sentences with potentialist truth of their
/// translations. Construct once per system; throws std::invalid_argument if
/// the system is incoherent.
class TranslationChecker {
 public:
  explicit TranslationChecker(const PotentialistSystem& s);
  ~TranslationChecker();
  /// True iff M ⊨ ψ ⇔ W ⊨ ψ^◇ at every world W containing the parameters of ψ.
  bool check(const FOFormula& psi);
  const Structure& limit() const { return limit_; }

 private:
  const PotentialistSystem& sys_;
  Structure limit_;
  std::unique_ptr<PotentialistSystem> limit_sys_;
  std::unique_ptr<Evaluator> world_eval_, limit_eval_;
};

bool check_translation(const PotentialistSystem& s, const FOFormula& psi);

enum class Verdict { Holds, Fails };
std::string to_string(Verdict v);

Verdict refute_validity(const PotentialistSystem& s, std::size_t world, const PropFormula& phi,
                        const Substitution& sigma);

struct SchemeFailure {
  std::size_t trial = 0;
  std::size_t world = 0;
  Substitution sigma;
  FOFormula instance;
};

struct SchemeReport {
  std::size_t trials = 0;
  std::size_t evaluations = 0;
  std::vector<SchemeFailure> failures;
  bool ok() const { return failures.empty(); }
};

/// Evaluates `trials` random substitution instances of φ (images drawn from
/// `pool`) at every world containing the instance's parameters. Trial t draws
/// from a generator seeded with (seed, t), so reports are reproducible.
SchemeReport scheme_check(const PotentialistSystem& s, const PropFormula& phi, const std::vector<FOFormula>& pool,
                          std::size_t trials, std::uint64_t seed = 0);

/// □∀x ψ → ∀x □ψ.
FOFormula converse_barcan(const std::string& var, const FOFormula& psi);

/// Checks converse Barcan instances for `trials` bodies drawn from `bodies`
/// (formulas whose free variables are at most `var`), at every world.
SchemeReport barcan_check(const PotentialistSystem& s, const std::string& var, const std::vector<FOFormula>& bodies,
                          std::size_t trials, std::uint64_t seed = 0);

struct EnumerationOptions {
  int max_quantifier_depth = 2;
  std::size_t max_size = 6;
  bool modal = false;
  std::vector<std::string> free_vars;   // may occur free
  std::vector<std::string> parameters;  // parameter names usable in atoms
};

/// All formulas within the bounds, up to renaming of bound variables and the
/// order of ∧/∨/↔ operands. Bound variables are named by binding depth (x, y, z, x3, ...),
/// skipping names in `free_vars`. Formulas whose free variables are not all
/// among `free_vars` never appear.
std::vector<FOFormula> enumerate_formulas(const Signature& sig, const EnumerationOptions& opts);

/// Sentences of size ≤ max_size with up to `max_quantifier_depth` nested quantifiers,
/// plus `extras` (control statements, say). Default pool for scheme_check.
std::vector<FOFormula> sentence_pool(const Signature& sig, std::size_t max_size, int max_quantifier_depth,
                                     const std::vector<FOFormula>& extras = {}, bool modal = false);

}  // namespace potentia
