#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace negtax::logic {

enum class Quantifier { Forall, Exists };

enum class NodeKind { Var, Pred, Not, Quant, And, Or, Implies, Lambda, App };

struct Node;

/// Immutable typed lambda-calculus / first-order formula. Copies share
/// structure; equality is structural.
class Formula {
 public:
  static Formula var(std::string name);
  static Formula pred(std::string name, std::vector<Formula> args);
  static Formula negation(Formula body);
  static Formula quant(Quantifier q, std::string var, Formula body, std::string type_tag = {});
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula lambda(std::string var, std::string type_tag, Formula body);
  static Formula app(Formula fn, Formula arg);

  NodeKind kind() const;
  /// Variable name, predicate name, or binder variable.
  const std::string& name() const;
  /// Church type annotation on a binder; empty when absent.
  const std::string& type_tag() const;
  Quantifier quantifier() const;
  /// Pred: arguments. Not/Quant/Lambda: {body}. And/Or/Implies: {lhs, rhs}.
  /// App: {fn, arg}. Var: empty.
  std::span<const Formula> children() const;

  const Formula& body() const { return children().front(); }
  const Formula& lhs() const { return children()[0]; }
  const Formula& rhs() const { return children()[1]; }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(NodeKind kind, std::string name, std::string type_tag, Quantifier q,
                      std::vector<Formula> children);
  std::shared_ptr<const Node> node_;
};

struct Node {
  NodeKind kind;
  std::string name;
  std::string type_tag;
  Quantifier quantifier = Quantifier::Forall;
  std::vector<Formula> children;
};

struct ParseOptions {
  /// Reject Var nodes not bound by an enclosing quantifier or lambda.
  bool strict = false;
  std::size_t max_depth = 256;
};

/// Parses the surface grammar documented in docs/formula-grammar.md. Accepts
/// Unicode (∀ ∃ ¬ ∧ ∨ → λ) and ASCII (forall exists not & | -> lam)
/// spellings. A fenced code block around the formula is tolerated.
/// Throws ParseError with a byte offset, or Errc::UnboundVar in strict mode.
Formula parse_formula(std::string_view text, const ParseOptions& opts = {});

enum class Notation { Unicode, Ascii };

/// Canonical rendering; parse_formula(pretty(f)) == f for every formula.
std::string pretty(const Formula& f, Notation notation = Notation::Unicode);

/// Names of Var nodes that no enclosing binder introduces.
std::vector<std::string> free_variables(const Formula& f);

enum class PolarityEventKind { Forall, Exists, Not };

struct PolarityEvent {
  PolarityEventKind event;
  /// Pre-order index of the node in the whole AST.
  std::size_t position;

  friend bool operator==(const PolarityEvent&, const PolarityEvent&) = default;
};

/// Forall / Exists / Not occurrences in pre-order.
std::vector<PolarityEvent> polarity_sequence(const Formula& f);

enum class LocalShape { ForallPlain, ExistsNeg, NegExists, ExistsPlain, None };

/// NegExists: a ¬ reaches an ∃ through connectives and λ only.
/// ExistsNeg: an ∃ body holds a ¬ before any deeper quantifier.
/// Otherwise ForallPlain if any ∀, ExistsPlain if any ∃, else None.
LocalShape local_shape(const Formula& f);

enum class PairPattern {
  ForallExistsNot,  // contradiction
  ForallNotExists,  // contrary
  ExistsExistsNot,  // subcontradiction
};

/// Asymmetric: `a` carries the plain quantifier, `b` the negated one.
std::optional<PairPattern> match_pair_pattern(const Formula& a, const Formula& b);

/// Pattern occurring inside a single formula's polarity sequence; only
/// used for trace notes, never for labeling.
std::optional<PairPattern> intra_formula_pattern(const Formula& f);

std::string_view to_string(LocalShape shape);
std::string_view to_string(PairPattern pattern);
std::string_view to_string(PolarityEventKind kind);

}  // namespace negtax::logic
