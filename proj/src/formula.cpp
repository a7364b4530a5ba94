#include "csam/formula.hpp"

#include <algorithm>

namespace csam {

Formula Formula::literal(Literal l) {
  Formula f;
  f.kind_ = Kind::kLiteral;
  f.literal_ = std::move(l);
  return f;
}

Formula Formula::conjunction(std::vector<Formula> children) {
  Formula f;
  f.kind_ = Kind::kAnd;
  f.children_ = std::move(children);
  return f;
}

Formula Formula::disjunction(std::vector<Formula> children) {
  Formula f;
  f.kind_ = Kind::kOr;
  f.children_ = std::move(children);
  return f;
}

Formula Formula::negation(Formula child) {
  Formula f;
  f.kind_ = Kind::kNot;
  f.children_.push_back(std::move(child));
  return f;
}

Formula Formula::forall(std::vector<TypedName> variables, Formula body) {
  Formula f;
  f.kind_ = Kind::kForall;
  f.variables_ = std::move(variables);
  f.children_.push_back(std::move(body));
  return f;
}

bool Formula::is_literal_conjunction() const {
  if (kind_ == Kind::kLiteral) return true;
  if (kind_ != Kind::kAnd) return false;
  return std::all_of(children_.begin(), children_.end(),
                     [](const Formula& c) { return c.kind() == Kind::kLiteral; });
}

std::vector<Literal> Formula::conjunct_literals() const {
  if (kind_ == Kind::kLiteral) return {literal_};
  std::vector<Literal> out;
  for (const auto& c : children_) out.push_back(c.lit());
  return out;
}

std::string to_string(const Formula& formula) {
  switch (formula.kind()) {
    case Formula::Kind::kLiteral:
      return to_string(formula.lit());
    case Formula::Kind::kNot:
      return "(not " + to_string(formula.children().front()) + ")";
    case Formula::Kind::kForall: {
      std::string out = "(forall (";
      bool first = true;
      for (const auto& v : formula.variables()) {
        if (!first) out += " ";
        first = false;
        out += v.name + " - " + v.type;
      }
      return out + ") " + to_string(formula.children().front()) + ")";
    }
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr: {
      std::string out = formula.kind() == Formula::Kind::kAnd ? "(and" : "(or";
      for (const auto& c : formula.children()) out += " " + to_string(c);
      return out + ")";
    }
  }
  return {};
}

}  // namespace csam
