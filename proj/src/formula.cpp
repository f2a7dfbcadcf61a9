#include "potentia/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace potentia {

ParseError::ParseError(Kind kind, std::size_t offset, std::vector<std::string> expected,
                       const std::string& message)
    : std::runtime_error(message), kind_(kind), offset_(offset), expected_(std::move(expected)) {}

// ---------------------------------------------------------------------------
// Nodes

struct PropFormula::Node {
  PropKind kind;
  int index = 0;
  std::vector<PropFormula> children;
};

struct FOFormula::Node {
  FOKind kind;
  std::string name;  // relation or bound variable
  std::vector<Term> terms;
  std::vector<FOFormula> children;
};

namespace {

bool prop_unary(PropKind k) { return k == PropKind::Not || k == PropKind::Diamond || k == PropKind::Box; }
bool prop_binary(PropKind k) {
  return k == PropKind::And || k == PropKind::Or || k == PropKind::Implies || k == PropKind::Iff;
}
bool fo_unary(FOKind k) {
  return k == FOKind::Not || k == FOKind::Diamond || k == FOKind::Box || k == FOKind::Exists ||
         k == FOKind::Forall;
}
bool fo_binary(FOKind k) {
  return k == FOKind::And || k == FOKind::Or || k == FOKind::Implies || k == FOKind::Iff;
}

}  // namespace

PropFormula PropFormula::var(int index) {
  if (index < 0) throw std::invalid_argument("negative variable index");
  return PropFormula(std::make_shared<const Node>(Node{PropKind::Var, index, {}}));
}
PropFormula PropFormula::top() { return PropFormula(std::make_shared<const Node>(Node{PropKind::Top, 0, {}})); }
PropFormula PropFormula::bot() { return PropFormula(std::make_shared<const Node>(Node{PropKind::Bot, 0, {}})); }
PropFormula PropFormula::make_not(PropFormula f) {
  return PropFormula(std::make_shared<const Node>(Node{PropKind::Not, 0, {std::move(f)}}));
}
PropFormula PropFormula::make_and(PropFormula a, PropFormula b) {
  return PropFormula(std::make_shared<const Node>(Node{PropKind::And, 0, {std::move(a), std::move(b)}}));
}
PropFormula PropFormula::make_or(PropFormula a, PropFormula b) {
  return PropFormula(std::make_shared<const Node>(Node{PropKind::Or, 0, {std::move(a), std::move(b)}}));
}
PropFormula PropFormula::make_implies(PropFormula a, PropFormula b) {
  return PropFormula(std::make_shared<const Node>(Node{PropKind::Implies, 0, {std::move(a), std::move(b)}}));
}
PropFormula PropFormula::make_iff(PropFormula a, PropFormula b) {
  return PropFormula(std::make_shared<const Node>(Node{PropKind::Iff, 0, {std::move(a), std::move(b)}}));
}
PropFormula PropFormula::diamond(PropFormula f) {
  return PropFormula(std::make_shared<const Node>(Node{PropKind::Diamond, 0, {std::move(f)}}));
}
PropFormula PropFormula::box(PropFormula f) {
  return PropFormula(std::make_shared<const Node>(Node{PropKind::Box, 0, {std::move(f)}}));
}

PropKind PropFormula::kind() const { return node_->kind; }
int PropFormula::index() const { return node_->index; }
const PropFormula& PropFormula::lhs() const { return node_->children.at(0); }
const PropFormula& PropFormula::rhs() const { return node_->children.at(1); }
bool PropFormula::is_unary() const { return prop_unary(node_->kind); }
bool PropFormula::is_binary() const { return prop_binary(node_->kind); }

std::strong_ordering operator<=>(const PropFormula& a, const PropFormula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.index() <=> b.index(); c != 0) return c;
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (auto c = ca[i] <=> cb[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}
bool operator==(const PropFormula& a, const PropFormula& b) { return (a <=> b) == 0; }

PropFormula operator!(PropFormula f) { return PropFormula::make_not(std::move(f)); }
PropFormula operator&&(PropFormula a, PropFormula b) { return PropFormula::make_and(std::move(a), std::move(b)); }
PropFormula operator||(PropFormula a, PropFormula b) { return PropFormula::make_or(std::move(a), std::move(b)); }

FOFormula FOFormula::atom(std::string relation, std::vector<Term> terms) {
  return FOFormula(std::make_shared<const Node>(Node{FOKind::Atom, std::move(relation), std::move(terms), {}}));
}
FOFormula FOFormula::eq(Term a, Term b) {
  return FOFormula(std::make_shared<const Node>(Node{FOKind::Eq, {}, {std::move(a), std::move(b)}, {}}));
}
FOFormula FOFormula::top() { return FOFormula(std::make_shared<const Node>(Node{FOKind::Top, {}, {}, {}})); }
FOFormula FOFormula::bot() { return FOFormula(std::make_shared<const Node>(Node{FOKind::Bot, {}, {}, {}})); }
FOFormula FOFormula::make_not(FOFormula f) {
  return FOFormula(std::make_shared<const Node>(Node{FOKind::Not, {}, {}, {std::move(f)}}));
}
FOFormula FOFormula::make_and(FOFormula a, FOFormula b) {
  return FOFormula(std::make_shared<const Node>(Node{FOKind::And, {}, {}, {std::move(a), std::move(b)}}));
}
FOFormula FOFormula::make_or(FOFormula a, FOFormula b) {
  return FOFormula(std::make_shared<const Node>(Node{FOKind::Or, {}, {}, {std::move(a), std::move(b)}}));
}
FOFormula FOFormula::make_implies(FOFormula a, FOFormula b) {
  return FOFormula(std::make_shared<const Node>(Node{FOKind::Implies, {}, {}, {std::move(a), std::move(b)}}));
}
FOFormula FOFormula::make_iff(FOFormula a, FOFormula b) {
  return FOFormula(std::make_shared<const Node>(Node{FOKind::Iff, {}, {}, {std::move(a), std::move(b)}}));
}
FOFormula FOFormula::exists(std::string var, FOFormula body) {
  return FOFormula(std::make_shared<const Node>(Node{FOKind::Exists, std::move(var), {}, {std::move(body)}}));
}
FOFormula FOFormula::forall(std::string var, FOFormula body) {
  return FOFormula(std::make_shared<const Node>(Node{FOKind::Forall, std::move(var), {}, {std::move(body)}}));
}
FOFormula FOFormula::diamond(FOFormula f) {
  return FOFormula(std::make_shared<const Node>(Node{FOKind::Diamond, {}, {}, {std::move(f)}}));
}
FOFormula FOFormula::box(FOFormula f) {
  return FOFormula(std::make_shared<const Node>(Node{FOKind::Box, {}, {}, {std::move(f)}}));
}

FOKind FOFormula::kind() const { return node_->kind; }
const std::string& FOFormula::relation() const { return node_->name; }
const std::vector<Term>& FOFormula::terms() const { return node_->terms; }
const std::string& FOFormula::variable() const { return node_->name; }
const FOFormula& FOFormula::lhs() const { return node_->children.at(0); }
const FOFormula& FOFormula::rhs() const { return node_->children.at(1); }
bool FOFormula::is_unary() const { return fo_unary(node_->kind); }
bool FOFormula::is_binary() const { return fo_binary(node_->kind); }

std::strong_ordering operator<=>(const FOFormula& a, const FOFormula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.node_->name.compare(b.node_->name) <=> 0; c != 0) return c;
  if (auto c = a.node_->terms <=> b.node_->terms; c != 0) return c;
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (auto c = ca[i] <=> cb[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}
bool operator==(const FOFormula& a, const FOFormula& b) { return (a <=> b) == 0; }

FOFormula operator!(FOFormula f) { return FOFormula::make_not(std::move(f)); }
FOFormula operator&&(FOFormula a, FOFormula b) { return FOFormula::make_and(std::move(a), std::move(b)); }
FOFormula operator||(FOFormula a, FOFormula b) { return FOFormula::make_or(std::move(a), std::move(b)); }

FOFormula conjunction(const std::vector<FOFormula>& parts) {
  std::optional<FOFormula> acc;
  for (const auto& p : parts) {
    if (p.kind() == FOKind::Top) continue;
    acc = acc ? FOFormula::make_and(*acc, p) : p;
  }
  return acc ? *acc : FOFormula::top();
}

FOFormula disjunction(const std::vector<FOFormula>& parts) {
  std::optional<FOFormula> acc;
  for (const auto& p : parts) {
    if (p.kind() == FOKind::Bot) continue;
    acc = acc ? FOFormula::make_or(*acc, p) : p;
  }
  return acc ? *acc : FOFormula::bot();
}

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::vector<RelationSymbol> relations) : relations_(std::move(relations)) {
  std::set<std::string> seen;
  for (const auto& r : relations_) {
    if (r.arity <= 0) throw std::invalid_argument("relation '" + r.name + "' must have positive arity");
    if (!seen.insert(r.name).second) throw std::invalid_argument("duplicate relation '" + r.name + "'");
  }
}

Signature Signature::membership() { return Signature({{"mem", 2}}); }

std::optional<std::size_t> Signature::find(std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (relations_[i].name == name) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  Ident, Param, LParen, RParen, Comma, Dot, Not, Dia, Box, And, Or, Imp, Iff, Eq, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::string describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Param: return "parameter";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Not: return "'~'";
    case Tok::Dia: return "'<>'";
    case Tok::Box: return "'[]'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Imp: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::Eq: return "'='";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError(ParseError::Kind::Syntax, i, {}, "offset " + std::to_string(i) + ": " + msg);
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    std::size_t start = i;
    auto simple = [&](Tok k, std::size_t len) {
      out.push_back({k, std::string(text.substr(start, len)), start});
      i += len;
    };
    if (text.substr(i, 3) == "<->") simple(Tok::Iff, 3);
    else if (text.substr(i, 2) == "<>") simple(Tok::Dia, 2);
    else if (text.substr(i, 2) == "[]") simple(Tok::Box, 2);
    else if (text.substr(i, 2) == "->") simple(Tok::Imp, 2);
    else if (c == '(') simple(Tok::LParen, 1);
    else if (c == ')') simple(Tok::RParen, 1);
    else if (c == ',') simple(Tok::Comma, 1);
    else if (c == '.') simple(Tok::Dot, 1);
    else if (c == '~') simple(Tok::Not, 1);
    else if (c == '&') simple(Tok::And, 1);
    else if (c == '|') simple(Tok::Or, 1);
    else if (c == '=') simple(Tok::Eq, 1);
    else if (c == '#') {
      ++i;
      while (i < text.size() && ident_char(text[i])) ++i;
      if (i == start + 1) fail("empty parameter name");
      out.push_back({Tok::Param, std::string(text.substr(start + 1, i - start - 1)), start});
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < text.size() && ident_char(text[i])) ++i;
      out.push_back({Tok::Ident, std::string(text.substr(start, i - start)), start});
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

bool is_prop_var(const std::string& s) {
  return s.size() >= 2 && s[0] == 'p' &&
         std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_keyword(const std::string& s) {
  return s == "true" || s == "false" || s == "exists" || s == "forall";
}

// Shared precedence-climbing skeleton: iff < implies (right) < or < and < unary.
template <class F, class Derived>
class ParserBase {
 public:
  explicit ParserBase(std::string_view text) : toks_(lex(text)) {}

  F parse_all() {
    F f = parse_iff();
    if (peek().kind != Tok::End) error({describe(Tok::End), "binary operator"});
    return f;
  }

 protected:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind == k) { ++pos_; return true; }
    return false;
  }
  const Token& expect(Tok k) {
    if (peek().kind != k) error({describe(k)});
    return next();
  }
  [[noreturn]] void error(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::ostringstream msg;
    msg << "syntax error at offset " << t.offset << ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) msg << (i ? ", " : "") << expected[i];
    msg << " but found " << (t.kind == Tok::End ? "end of input" : "'" + t.text + "'");
    throw ParseError(ParseError::Kind::Syntax, t.offset, std::move(expected), msg.str());
  }

  F parse_iff() {
    F f = parse_implies();
    while (accept(Tok::Iff)) f = F::make_iff(f, parse_implies());
    return f;
  }
  F parse_implies() {
    F f = parse_or();
    if (accept(Tok::Imp)) return F::make_implies(f, parse_implies());
    return f;
  }
  F parse_or() {
    F f = parse_and();
    while (accept(Tok::Or)) f = F::make_or(f, parse_and());
    return f;
  }
  F parse_and() {
    F f = self().parse_unary();
    while (accept(Tok::And)) f = F::make_and(f, self().parse_unary());
    return f;
  }

  Derived& self() { return static_cast<Derived&>(*this); }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

class PropParser : public ParserBase<PropFormula, PropParser> {
 public:
  using ParserBase::ParserBase;

  PropFormula parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not: next(); return PropFormula::make_not(parse_unary());
      case Tok::Dia: next(); return PropFormula::diamond(parse_unary());
      case Tok::Box: next(); return PropFormula::box(parse_unary());
      case Tok::LParen: {
        next();
        PropFormula f = parse_iff();
        expect(Tok::RParen);
        return f;
      }
      case Tok::Ident:
        if (t.text == "true") { next(); return PropFormula::top(); }
        if (t.text == "false") { next(); return PropFormula::bot(); }
        if (is_prop_var(t.text)) {
          next();
          try {
            return PropFormula::var(std::stoi(t.text.substr(1)));
          } catch (const std::out_of_range&) {
            throw ParseError(ParseError::Kind::Syntax, t.offset, {"variable"}, "variable index too large");
          }
        }
        break;
      default:
        break;
    }
    error({"p<digits>", "true", "false", "'('", "'~'", "'<>'", "'[]'"});
  }
};

class FOParser : public ParserBase<FOFormula, FOParser> {
 public:
  FOParser(std::string_view text, const Signature& sig) : ParserBase(text), sig_(sig) {}

  FOFormula parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not: next(); return FOFormula::make_not(parse_unary());
      case Tok::Dia: next(); return FOFormula::diamond(parse_unary());
      case Tok::Box: next(); return FOFormula::box(parse_unary());
      case Tok::LParen: {
        next();
        FOFormula f = parse_iff();
        expect(Tok::RParen);
        return f;
      }
      case Tok::Param: {
        Term a = parse_term();
        return equality_tail(std::move(a));
      }
      case Tok::Ident: {
        if (t.text == "true") { next(); return FOFormula::top(); }
        if (t.text == "false") { next(); return FOFormula::bot(); }
        if (t.text == "exists" || t.text == "forall") {
          bool ex = t.text == "exists";
          next();
          const Token& v = peek();
          if (v.kind != Tok::Ident || is_keyword(v.text)) error({"variable name"});
          std::string name = next().text;
          expect(Tok::Dot);
          FOFormula body = parse_iff();
          return ex ? FOFormula::exists(name, body) : FOFormula::forall(name, body);
        }
        if (toks_[pos_ + 1].kind == Tok::LParen) return parse_atom();
        Term a = parse_term();
        return equality_tail(std::move(a));
      }
      default:
        break;
    }
    error({"atom", "term", "true", "false", "exists", "forall", "'('", "'~'", "'<>'", "'[]'"});
  }

 private:
  Term parse_term() {
    const Token& t = peek();
    if (t.kind == Tok::Param) { next(); return Term::parameter(t.text); }
    if (t.kind == Tok::Ident && !is_keyword(t.text)) { next(); return Term::variable(t.text); }
    error({"variable", "parameter"});
  }

  FOFormula equality_tail(Term a) {
    expect(Tok::Eq);
    Term b = parse_term();
    return FOFormula::eq(std::move(a), std::move(b));
  }

  FOFormula parse_atom() {
    const Token name = next();
    auto idx = sig_.find(name.text);
    if (!idx) {
      throw ParseError(ParseError::Kind::UnknownRelation, name.offset, {},
                       "unknown relation '" + name.text + "' at offset " + std::to_string(name.offset));
    }
    expect(Tok::LParen);
    std::vector<Term> terms;
    terms.push_back(parse_term());
    while (accept(Tok::Comma)) terms.push_back(parse_term());
    expect(Tok::RParen);
    int arity = sig_.relations()[*idx].arity;
    if (static_cast<int>(terms.size()) != arity) {
      throw ParseError(ParseError::Kind::ArityMismatch, name.offset, {},
                       "relation '" + name.text + "' has arity " + std::to_string(arity) + " but got " +
                           std::to_string(terms.size()) + " arguments");
    }
    return FOFormula::atom(name.text, std::move(terms));
  }

  const Signature& sig_;
};

// ---------------------------------------------------------------------------
// Printing. Precedence: iff 1, implies 2, or 3, and 4, unary/atoms 5.
// A quantifier body extends as far right as possible, so a quantifier is
// parenthesized unless nothing follows it.

template <class F, class K>
int prec_of(K k) {
  if constexpr (std::is_same_v<K, PropKind>) {
    switch (k) {
      case PropKind::Iff: return 1;
      case PropKind::Implies: return 2;
      case PropKind::Or: return 3;
      case PropKind::And: return 4;
      default: return 5;
    }
  } else {
    switch (k) {
      case FOKind::Iff: return 1;
      case FOKind::Implies: return 2;
      case FOKind::Or: return 3;
      case FOKind::And: return 4;
      default: return 5;
    }
  }
}

const char* prop_op(PropKind k) {
  switch (k) {
    case PropKind::Iff: return " <-> ";
    case PropKind::Implies: return " -> ";
    case PropKind::Or: return " | ";
    case PropKind::And: return " & ";
    case PropKind::Not: return "~ ";
    case PropKind::Diamond: return "<> ";
    case PropKind::Box: return "[] ";
    default: return "";
  }
}

const char* fo_op(FOKind k) {
  switch (k) {
    case FOKind::Iff: return " <-> ";
    case FOKind::Implies: return " -> ";
    case FOKind::Or: return " | ";
    case FOKind::And: return " & ";
    case FOKind::Not: return "~ ";
    case FOKind::Diamond: return "<> ";
    case FOKind::Box: return "[] ";
    default: return "";
  }
}

void print_prop(const PropFormula& f, bool tail, std::string& out);

void print_prop_child(const PropFormula& c, bool paren, bool tail, std::string& out) {
  if (paren) {
    out += '(';
    print_prop(c, true, out);
    out += ')';
  } else {
    print_prop(c, tail, out);
  }
}

void print_prop(const PropFormula& f, bool tail, std::string& out) {
  switch (f.kind()) {
    case PropKind::Var: out += 'p'; out += std::to_string(f.index()); return;
    case PropKind::Top: out += "true"; return;
    case PropKind::Bot: out += "false"; return;
    case PropKind::Not:
    case PropKind::Diamond:
    case PropKind::Box:
      out += prop_op(f.kind());
      print_prop_child(f.lhs(), f.lhs().is_binary(), tail, out);
      return;
    default: {
      int p = prec_of<PropFormula>(f.kind());
      bool right_assoc = f.kind() == PropKind::Implies;
      int lp = prec_of<PropFormula>(f.lhs().kind());
      int rp = prec_of<PropFormula>(f.rhs().kind());
      print_prop_child(f.lhs(), lp < p || (lp == p && right_assoc), false, out);
      out += prop_op(f.kind());
      print_prop_child(f.rhs(), rp < p || (rp == p && !right_assoc), tail, out);
    }
  }
}

void print_fo(const FOFormula& f, bool tail, std::string& out);

void print_fo_child(const FOFormula& c, bool paren, bool tail, std::string& out) {
  if (paren) {
    out += '(';
    print_fo(c, true, out);
    out += ')';
  } else {
    print_fo(c, tail, out);
  }
}

void print_term(const Term& t, std::string& out) {
  if (!t.is_variable()) out += '#';
  out += t.name;
}

void print_fo(const FOFormula& f, bool tail, std::string& out) {
  switch (f.kind()) {
    case FOKind::Top: out += "true"; return;
    case FOKind::Bot: out += "false"; return;
    case FOKind::Atom:
      out += f.relation();
      out += '(';
      for (std::size_t i = 0; i < f.terms().size(); ++i) {
        if (i) out += ", ";
        print_term(f.terms()[i], out);
      }
      out += ')';
      return;
    case FOKind::Eq:
      print_term(f.terms()[0], out);
      out += " = ";
      print_term(f.terms()[1], out);
      return;
    case FOKind::Exists:
    case FOKind::Forall:
      if (!tail) out += '(';
      out += f.kind() == FOKind::Exists ? "exists " : "forall ";
      out += f.variable();
      out += " . ";
      print_fo(f.lhs(), true, out);
      if (!tail) out += ')';
      return;
    case FOKind::Not:
    case FOKind::Diamond:
    case FOKind::Box:
      out += fo_op(f.kind());
      print_fo_child(f.lhs(), f.lhs().is_binary(), tail, out);
      return;
    default: {
      int p = prec_of<FOFormula>(f.kind());
      bool right_assoc = f.kind() == FOKind::Implies;
      int lp = prec_of<FOFormula>(f.lhs().kind());
      int rp = prec_of<FOFormula>(f.rhs().kind());
      print_fo_child(f.lhs(), lp < p || (lp == p && right_assoc), false, out);
      out += fo_op(f.kind());
      print_fo_child(f.rhs(), rp < p || (rp == p && !right_assoc), tail, out);
    }
  }
}

}  // namespace

PropFormula parse_prop(std::string_view text) { return PropParser(text).parse_all(); }

FOFormula parse_fo(std::string_view text, const Signature& sig) { return FOParser(text, sig).parse_all(); }

std::string to_string(const PropFormula& f) {
  std::string out;
  print_prop(f, true, out);
  return out;
}

std::string to_string(const FOFormula& f) {
  std::string out;
  print_fo(f, true, out);
  return out;
}

// ---------------------------------------------------------------------------
// Propositional utilities

std::vector<PropFormula> subformulas(const PropFormula& f) {
  std::vector<PropFormula> out;
  std::set<PropFormula> seen;
  std::function<void(const PropFormula&)> walk = [&](const PropFormula& g) {
    if (g.is_unary()) walk(g.lhs());
    if (g.is_binary()) {
      walk(g.lhs());
      walk(g.rhs());
    }
    if (seen.insert(g).second) out.push_back(g);
  };
  walk(f);
  return out;
}

std::set<int> variables(const PropFormula& f) {
  std::set<int> out;
  for (const auto& g : subformulas(f)) {
    if (g.kind() == PropKind::Var) out.insert(g.index());
  }
  return out;
}

std::size_t size(const PropFormula& f) {
  if (f.is_unary()) return 1 + size(f.lhs());
  if (f.is_binary()) return 1 + size(f.lhs()) + size(f.rhs());
  return 1;
}

int modal_depth(const PropFormula& f) {
  if (f.is_binary()) return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
  if (f.is_unary()) {
    int inner = modal_depth(f.lhs());
    return f.kind() == PropKind::Not ? inner : inner + 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// First-order utilities

namespace {

void collect_free(const FOFormula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case FOKind::Atom:
    case FOKind::Eq:
      for (const auto& t : f.terms()) {
        if (t.is_variable() && std::find(bound.begin(), bound.end(), t.name) == bound.end()) out.insert(t.name);
      }
      return;
    case FOKind::Exists:
    case FOKind::Forall:
      bound.push_back(f.variable());
      collect_free(f.lhs(), bound, out);
      bound.pop_back();
      return;
    default:
      if (f.is_unary()) collect_free(f.lhs(), bound, out);
      if (f.is_binary()) {
        collect_free(f.lhs(), bound, out);
        collect_free(f.rhs(), bound, out);
      }
  }
}

}  // namespace

std::set<std::string> free_variables(const FOFormula& f) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> parameters(const FOFormula& f) {
  std::set<std::string> out;
  std::function<void(const FOFormula&)> walk = [&](const FOFormula& g) {
    for (const auto& t : g.terms()) {
      if (!t.is_variable()) out.insert(t.name);
    }
    if (g.is_unary()) walk(g.lhs());
    if (g.is_binary()) {
      walk(g.lhs());
      walk(g.rhs());
    }
  };
  walk(f);
  return out;
}

bool is_sentence(const FOFormula& f) { return free_variables(f).empty(); }

bool has_modal(const FOFormula& f) {
  if (f.kind() == FOKind::Diamond || f.kind() == FOKind::Box) return true;
  if (f.is_unary()) return has_modal(f.lhs());
  if (f.is_binary()) return has_modal(f.lhs()) || has_modal(f.rhs());
  return false;
}

int quantifier_depth(const FOFormula& f) {
  if (f.is_binary()) return std::max(quantifier_depth(f.lhs()), quantifier_depth(f.rhs()));
  if (f.is_unary()) {
    int inner = quantifier_depth(f.lhs());
    return (f.kind() == FOKind::Exists || f.kind() == FOKind::Forall) ? inner + 1 : inner;
  }
  return 0;
}

std::size_t size(const FOFormula& f) {
  if (f.is_unary()) return 1 + size(f.lhs());
  if (f.is_binary()) return 1 + size(f.lhs()) + size(f.rhs());
  return 1;
}

void check_signature(const FOFormula& f, const Signature& sig) {
  if (f.kind() == FOKind::Atom) {
    auto idx = sig.find(f.relation());
    if (!idx) throw ParseError(ParseError::Kind::UnknownRelation, 0, {}, "unknown relation '" + f.relation() + "'");
    if (static_cast<int>(f.terms().size()) != sig.relations()[*idx].arity) {
      throw ParseError(ParseError::Kind::ArityMismatch, 0, {}, "arity mismatch for '" + f.relation() + "'");
    }
  }
  if (f.is_unary()) check_signature(f.lhs(), sig);
  if (f.is_binary()) {
    check_signature(f.lhs(), sig);
    check_signature(f.rhs(), sig);
  }
}

namespace {

FOFormula translate(const FOFormula& f) {
  switch (f.kind()) {
    case FOKind::Exists: return FOFormula::diamond(FOFormula::exists(f.variable(), translate(f.lhs())));
    case FOKind::Forall: return FOFormula::box(FOFormula::forall(f.variable(), translate(f.lhs())));
    case FOKind::Not: return FOFormula::make_not(translate(f.lhs()));
    case FOKind::And: return FOFormula::make_and(translate(f.lhs()), translate(f.rhs()));
    case FOKind::Or: return FOFormula::make_or(translate(f.lhs()), translate(f.rhs()));
    case FOKind::Implies: return FOFormula::make_implies(translate(f.lhs()), translate(f.rhs()));
    case FOKind::Iff: return FOFormula::make_iff(translate(f.lhs()), translate(f.rhs()));
    default: return f;
  }
}

}  // namespace

FOFormula potentialist_translation(const FOFormula& f) {
  if (has_modal(f)) throw std::invalid_argument("potentialist translation needs a nonmodal formula");
  return translate(f);
}

Substitution::Substitution(std::map<int, FOFormula> images) {
  for (auto& [k, v] : images) set(k, std::move(v));
}

void Substitution::set(int index, FOFormula sentence) {
  if (index < 0) throw std::invalid_argument("negative variable index");
  if (!is_sentence(sentence)) {
    throw std::invalid_argument("substitution image for p" + std::to_string(index) + " has free variables");
  }
  images_.insert_or_assign(index, std::move(sentence));
}

const FOFormula* Substitution::find(int index) const {
  auto it = images_.find(index);
  return it == images_.end() ? nullptr : &it->second;
}

FOFormula substitute(const PropFormula& f, const Substitution& sigma) {
  switch (f.kind()) {
    case PropKind::Var: {
      const FOFormula* img = sigma.find(f.index());
      if (!img) throw std::out_of_range("substitution does not map p" + std::to_string(f.index()));
      return *img;
    }
    case PropKind::Top: return FOFormula::top();
    case PropKind::Bot: return FOFormula::bot();
    case PropKind::Not: return FOFormula::make_not(substitute(f.lhs(), sigma));
    case PropKind::Diamond: return FOFormula::diamond(substitute(f.lhs(), sigma));
    case PropKind::Box: return FOFormula::box(substitute(f.lhs(), sigma));
    case PropKind::And: return FOFormula::make_and(substitute(f.lhs(), sigma), substitute(f.rhs(), sigma));
    case PropKind::Or: return FOFormula::make_or(substitute(f.lhs(), sigma), substitute(f.rhs(), sigma));
    case PropKind::Implies:
      return FOFormula::make_implies(substitute(f.lhs(), sigma), substitute(f.rhs(), sigma));
    case PropKind::Iff: return FOFormula::make_iff(substitute(f.lhs(), sigma), substitute(f.rhs(), sigma));
  }
  throw std::logic_error("unreachable");
}

}  // namespace potentia
