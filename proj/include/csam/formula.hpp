#pragma once

#include <string>
#include <vector>

#include "csam/logic.hpp"

namespace csam {

struct TypedName {
  std::string name;
  std::string type = "object";

  auto operator<=>(const TypedName&) const = default;
  bool operator==(const TypedName&) const = default;
};

/// Precondition formula tree. `and` with no children is `true`; `or` with no
/// children is `false`.
class Formula {
 public:
  enum class Kind { kLiteral, kAnd, kOr, kNot, kForall };

  static Formula literal(Literal l);
  static Formula conjunction(std::vector<Formula> children);
  static Formula disjunction(std::vector<Formula> children);
  static Formula negation(Formula child);
  static Formula forall(std::vector<TypedName> variables, Formula body);
  static Formula truth() { return conjunction({}); }
  static Formula falsity() { return disjunction({}); }

  Kind kind() const { return kind_; }
  const Literal& lit() const { return literal_; }
  const std::vector<Formula>& children() const { return children_; }
  const std::vector<TypedName>& variables() const { return variables_; }

  /// True for a literal or an `and` of literals.
  bool is_literal_conjunction() const;
  /// Literals of a literal conjunction.
  std::vector<Literal> conjunct_literals() const;

  bool operator==(const Formula&) const = default;

 private:
  Kind kind_ = Kind::kAnd;
  Literal literal_;
  std::vector<Formula> children_;
  std::vector<TypedName> variables_;
};

std::string to_string(const Formula& formula);

}  // namespace csam
