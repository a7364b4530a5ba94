#pragma once

// Minimal S-expression reader for the PDDL and trajectory formats.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "csam/errors.hpp"

namespace csam::sexpr {

struct Node {
  bool is_list = false;
  std::string atom;  // lower-cased
  std::vector<Node> items;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_atom() const { return !is_list; }
  bool is_atom(std::string_view text) const { return !is_list && atom == text; }
  /// A list whose first item is the given keyword.
  bool is_form(std::string_view head) const {
    return is_list && !items.empty() && items.front().is_atom(head);
  }
  const Node& head() const { return items.front(); }

  [[noreturn]] void fail(const std::string& message) const {
    throw SyntaxError(message, line, column);
  }
};

/// Reads every top-level expression. Comments run from `;` to end of line.
std::vector<Node> read_all(std::string_view text);

/// Reads exactly one top-level expression.
Node read_one(std::string_view text);

}  // namespace csam::sexpr
