#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace potentia {

/// Raised by the formula parsers. Carries the byte offset of the offending
/// token and the set of tokens that would have been accepted there.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownRelation, ArityMismatch };

  ParseError(Kind kind, std::size_t offset, std::vector<std::string> expected,
             const std::string& message);

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Kind kind_;
  std::size_t offset_;
  std::vector<std::string> expected_;
};

// ---------------------------------------------------------------------------
// Propositional modal formulas

enum class PropKind { Var, Top, Bot, Not, And, Or, Implies, Iff, Diamond, Box };

/// Immutable propositional modal formula. Copies share structure.
class PropFormula {
 public:
  static PropFormula var(int index);
  static PropFormula top();
  static PropFormula bot();
  static PropFormula make_not(PropFormula f);
  static PropFormula make_and(PropFormula a, PropFormula b);
  static PropFormula make_or(PropFormula a, PropFormula b);
  static PropFormula make_implies(PropFormula a, PropFormula b);
  static PropFormula make_iff(PropFormula a, PropFormula b);
  static PropFormula diamond(PropFormula f);
  static PropFormula box(PropFormula f);

  PropKind kind() const;
  int index() const;  // Var only
  /// Operand of a unary node, or the left operand of a binary one.
  const PropFormula& lhs() const;
  const PropFormula& rhs() const;
  bool is_unary() const;
  bool is_binary() const;

  /// Node identity; equal ids imply structural equality.
  const void* id() const { return node_.get(); }

  friend bool operator==(const PropFormula& a, const PropFormula& b);
  friend std::strong_ordering operator<=>(const PropFormula& a, const PropFormula& b);

 private:
  struct Node;
  explicit PropFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

PropFormula operator!(PropFormula f);
PropFormula operator&&(PropFormula a, PropFormula b);
PropFormula operator||(PropFormula a, PropFormula b);

PropFormula parse_prop(std::string_view text);
std::string to_string(const PropFormula& f);

/// Distinct subtrees in postorder (children before parents, first occurrence wins).
std::vector<PropFormula> subformulas(const PropFormula& f);
std::set<int> variables(const PropFormula& f);
std::size_t size(const PropFormula& f);
int modal_depth(const PropFormula& f);

// ---------------------------------------------------------------------------
// First-order modal formulas

struct RelationSymbol {
  std::string name;
  int arity = 0;
  friend bool operator==(const RelationSymbol&, const RelationSymbol&) = default;
};

class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<RelationSymbol> relations);

  /// The signature of set theory: a single binary relation `mem`.
  static Signature membership();

  const std::vector<RelationSymbol>& relations() const { return relations_; }
  std::optional<std::size_t> find(std::string_view name) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<RelationSymbol> relations_;
};

struct Term {
  enum class Kind { Variable, Parameter };
  Kind kind = Kind::Variable;
  std::string name;

  static Term variable(std::string name) { return {Kind::Variable, std::move(name)}; }
  static Term parameter(std::string name) { return {Kind::Parameter, std::move(name)}; }
  bool is_variable() const { return kind == Kind::Variable; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

enum class FOKind {
  Atom, Eq, Top, Bot, Not, And, Or, Implies, Iff, Exists, Forall, Diamond, Box
};

/// Immutable formula of the first-order modal language with parameters.
class FOFormula {
 public:
  static FOFormula atom(std::string relation, std::vector<Term> terms);
  static FOFormula eq(Term a, Term b);
  static FOFormula top();
  static FOFormula bot();
  static FOFormula make_not(FOFormula f);
  static FOFormula make_and(FOFormula a, FOFormula b);
  static FOFormula make_or(FOFormula a, FOFormula b);
  static FOFormula make_implies(FOFormula a, FOFormula b);
  static FOFormula make_iff(FOFormula a, FOFormula b);
  static FOFormula exists(std::string var, FOFormula body);
  static FOFormula forall(std::string var, FOFormula body);
  static FOFormula diamond(FOFormula f);
  static FOFormula box(FOFormula f);

  FOKind kind() const;
  const std::string& relation() const;   // Atom
  const std::vector<Term>& terms() const;  // Atom, Eq
  const std::string& variable() const;   // Exists, Forall
  const FOFormula& lhs() const;  // unary operand / quantifier body / left operand
  const FOFormula& rhs() const;
  bool is_unary() const;  // Not, Diamond, Box, Exists, Forall
  bool is_binary() const;

  const void* id() const { return node_.get(); }

  friend bool operator==(const FOFormula& a, const FOFormula& b);
  friend std::strong_ordering operator<=>(const FOFormula& a, const FOFormula& b);

 private:
  struct Node;
  explicit FOFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

FOFormula operator!(FOFormula f);
FOFormula operator&&(FOFormula a, FOFormula b);
FOFormula operator||(FOFormula a, FOFormula b);

/// Conjunction/disjunction of a list, left-associated. Literal ⊤ conjuncts and
/// ⊥ disjuncts are dropped; the empty conjunction is ⊤, the empty disjunction ⊥.
FOFormula conjunction(const std::vector<FOFormula>& parts);
FOFormula disjunction(const std::vector<FOFormula>& parts);

FOFormula parse_fo(std::string_view text, const Signature& sig);
std::string to_string(const FOFormula& f);

std::set<std::string> free_variables(const FOFormula& f);
std::set<std::string> parameters(const FOFormula& f);
bool is_sentence(const FOFormula& f);
bool has_modal(const FOFormula& f);
int quantifier_depth(const FOFormula& f);
std::size_t size(const FOFormula& f);

/// Checks relation names and arities against `sig`; throws ParseError.
void check_signature(const FOFormula& f, const Signature& sig);

/// ψ ↦ ψ^◇: every ∃x becomes ◇∃x and every ∀x becomes □∀x.
/// Throws std::invalid_argument if ψ already contains a modal operator.
FOFormula potentialist_translation(const FOFormula& f);

/// Total map from propositional variable indices to sentences.
class Substitution {
 public:
  Substitution() = default;
  explicit Substitution(std::map<int, FOFormula> images);

  void set(int index, FOFormula sentence);
  const FOFormula* find(int index) const;
  const std::map<int, FOFormula>& images() const { return images_; }

 private:
  std::map<int, FOFormula> images_;
};

/// Homomorphic replacement of each p_i by σ(i). Throws std::out_of_range on
/// an unmapped variable.
FOFormula substitute(const PropFormula& f, const Substitution& sigma);

}  // namespace potentia
