#pragma once

// Propositional layer shared by the parser, executor and learners: fluents,
// literals, canonical conjunctions and complete (closed-world) states.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace csam {

/// A predicate applied to a tuple of terms. Terms are object names for
/// grounded fluents and `?`-prefixed variable names for lifted ones.
struct Fluent {
  std::string predicate;
  std::vector<std::string> args;

  auto operator<=>(const Fluent&) const = default;
  bool operator==(const Fluent&) const = default;
};

struct Literal {
  Fluent fluent;
  bool positive = true;

  // Canonical order: predicate, argument tuple, then positive before negative.
  std::strong_ordering operator<=>(const Literal& other) const;
  bool operator==(const Literal&) const = default;
};

Literal negate(const Literal& literal);

std::string to_string(const Fluent& fluent);
std::string to_string(const Literal& literal);
std::ostream& operator<<(std::ostream& os, const Literal& literal);

/// Sorted, duplicate-free, internally consistent set of literals. The empty
/// conjunction is the trivial antecedent `true`.
class Conjunction {
 public:
  Conjunction() = default;

  /// Throws std::invalid_argument if both polarities of a fluent are present.
  explicit Conjunction(std::vector<Literal> literals);

  /// Returns nullopt instead of throwing on contradictory input.
  static std::optional<Conjunction> make(std::vector<Literal> literals);

  const std::vector<Literal>& literals() const { return literals_; }
  std::size_t size() const { return literals_.size(); }
  bool empty() const { return literals_.empty(); }
  bool contains(const Literal& literal) const;

  auto operator<=>(const Conjunction&) const = default;
  bool operator==(const Conjunction&) const = default;

 private:
  std::vector<Literal> literals_;
};

std::string to_string(const Conjunction& conjunction);

/// The sorted set of grounded fluents a state assigns values to.
class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<Fluent> fluents);

  std::size_t size() const { return fluents_.size(); }
  const std::vector<Fluent>& fluents() const { return fluents_; }
  const Fluent& fluent(std::size_t index) const { return fluents_[index]; }

  std::optional<std::size_t> find(const Fluent& fluent) const;
  /// Throws UnknownFluent.
  std::size_t index_of(const Fluent& fluent) const;

  bool operator==(const Universe& other) const {
    return fluents_ == other.fluents_;
  }

 private:
  std::vector<Fluent> fluents_;
  std::map<Fluent, std::size_t> index_;
};

using UniversePtr = std::shared_ptr<const Universe>;

/// Complete truth assignment: fluents not stored as true are false.
class State {
 public:
  State() = default;
  explicit State(UniversePtr universe);
  /// Throws UnknownFluent if a fluent is outside the universe.
  State(UniversePtr universe, std::span<const Fluent> true_fluents);

  const UniversePtr& universe() const { return universe_; }

  bool test(std::size_t index) const {
    return (bits_[index / 64] >> (index % 64)) & 1U;
  }
  void set(std::size_t index, bool value);

  /// Throws UnknownFluent.
  bool holds(const Literal& literal) const;
  bool holds(const Conjunction& conjunction) const;

  std::vector<Fluent> true_fluents() const;
  /// Every literal of the universe that holds, in canonical order.
  std::vector<Literal> literals() const;

  bool operator==(const State& other) const;
  bool operator<(const State& other) const;

 private:
  UniversePtr universe_;
  std::vector<std::uint64_t> bits_;
};

bool holds(const State& state, const Conjunction& conjunction);

/// Every consistent conjunction of 1..max_size distinct input literals plus
/// the empty conjunction, in canonical order.
std::vector<Conjunction> enumerate_antecedents(std::span<const Literal> literals,
                                               std::size_t max_size);

// ---------------------------------------------------------------------------
// Dense literal ids used inside the learners. Atom i owns ids 2i (positive)
// and 2i+1 (negative), so negation is a bit flip.

using LitId = std::uint32_t;

constexpr LitId make_lit(std::size_t atom, bool positive) {
  return static_cast<LitId>(2 * atom + (positive ? 0 : 1));
}
constexpr LitId negation(LitId lit) { return lit ^ 1U; }
constexpr std::size_t atom_of(LitId lit) { return lit >> 1; }
constexpr bool is_positive(LitId lit) { return (lit & 1U) == 0; }

/// Sorted vector of literal ids with no complementary pair.
using IdConjunction = std::vector<LitId>;

/// All consistent conjunctions of size <= max_size over 2*atom_count
/// literals, including the empty one, in lexicographic order.
std::vector<IdConjunction> enumerate_id_antecedents(std::size_t atom_count,
                                                    std::size_t max_size);

/// sum_{i=0}^{max_size} C(literal_count, i), saturating at SIZE_MAX.
std::size_t antecedent_bound(std::size_t literal_count, std::size_t max_size);

}  // namespace csam
