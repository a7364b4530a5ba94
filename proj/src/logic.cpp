#include "csam/logic.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "csam/errors.hpp"

namespace csam {

std::strong_ordering Literal::operator<=>(const Literal& other) const {
  if (auto c = fluent <=> other.fluent; c != 0) return c;
  // true sorts first
  return other.positive <=> positive;
}

Literal negate(const Literal& literal) {
  return Literal{literal.fluent, !literal.positive};
}

std::string to_string(const Fluent& fluent) {
  std::string out = "(" + fluent.predicate;
  for (const auto& arg : fluent.args) out += " " + arg;
  return out + ")";
}

std::string to_string(const Literal& literal) {
  if (literal.positive) return to_string(literal.fluent);
  return "(not " + to_string(literal.fluent) + ")";
}

std::ostream& operator<<(std::ostream& os, const Literal& literal) {
  return os << to_string(literal);
}

// --- Conjunction -----------------------------------------------------------

std::optional<Conjunction> Conjunction::make(std::vector<Literal> literals) {
  std::sort(literals.begin(), literals.end());
  literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
  // complementary literals are adjacent after sorting
  for (std::size_t i = 1; i < literals.size(); ++i) {
    if (literals[i - 1].fluent == literals[i].fluent) return std::nullopt;
  }
  Conjunction c;
  c.literals_ = std::move(literals);
  return c;
}

Conjunction::Conjunction(std::vector<Literal> literals) {
  auto made = make(std::move(literals));
  if (!made) throw std::invalid_argument("contradictory conjunction");
  *this = std::move(*made);
}

bool Conjunction::contains(const Literal& literal) const {
  return std::binary_search(literals_.begin(), literals_.end(), literal);
}

std::string to_string(const Conjunction& conjunction) {
  if (conjunction.empty()) return "true";
  std::string out;
  for (const auto& l : conjunction.literals()) {
    if (!out.empty()) out += " & ";
    out += to_string(l);
  }
  return out;
}

// --- Universe / State ------------------------------------------------------

Universe::Universe(std::vector<Fluent> fluents) : fluents_(std::move(fluents)) {
  std::sort(fluents_.begin(), fluents_.end());
  fluents_.erase(std::unique(fluents_.begin(), fluents_.end()), fluents_.end());
  for (std::size_t i = 0; i < fluents_.size(); ++i) index_.emplace(fluents_[i], i);
}

std::optional<std::size_t> Universe::find(const Fluent& fluent) const {
  auto it = index_.find(fluent);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Universe::index_of(const Fluent& fluent) const {
  auto found = find(fluent);
  if (!found) throw UnknownFluent("fluent not in universe: " + to_string(fluent));
  return *found;
}

State::State(UniversePtr universe)
    : universe_(std::move(universe)),
      bits_((universe_ ? universe_->size() : 0) / 64 + 1, 0) {}

State::State(UniversePtr universe, std::span<const Fluent> true_fluents)
    : State(std::move(universe)) {
  for (const auto& f : true_fluents) set(universe_->index_of(f), true);
}

void State::set(std::size_t index, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (index % 64);
  if (value) {
    bits_[index / 64] |= mask;
  } else {
    bits_[index / 64] &= ~mask;
  }
}

bool State::holds(const Literal& literal) const {
  return test(universe_->index_of(literal.fluent)) == literal.positive;
}

bool State::holds(const Conjunction& conjunction) const {
  return std::all_of(conjunction.literals().begin(), conjunction.literals().end(),
                     [this](const Literal& l) { return holds(l); });
}

std::vector<Fluent> State::true_fluents() const {
  std::vector<Fluent> out;
  for (std::size_t i = 0; i < universe_->size(); ++i) {
    if (test(i)) out.push_back(universe_->fluent(i));
  }
  return out;
}

std::vector<Literal> State::literals() const {
  std::vector<Literal> out;
  out.reserve(universe_->size());
  for (std::size_t i = 0; i < universe_->size(); ++i) {
    out.push_back(Literal{universe_->fluent(i), test(i)});
  }
  return out;
}

bool State::operator==(const State& other) const {
  if (bits_ != other.bits_) return false;
  if (universe_ == other.universe_) return true;
  if (!universe_ || !other.universe_) return false;
  return *universe_ == *other.universe_;
}

bool State::operator<(const State& other) const { return bits_ < other.bits_; }

bool holds(const State& state, const Conjunction& conjunction) {
  return state.holds(conjunction);
}

// --- Antecedent enumeration ------------------------------------------------

namespace {

template <typename Lit, typename Conflicts, typename Emit>
void enumerate_subsets(const std::vector<Lit>& pool, std::size_t max_size,
                       Conflicts conflicts, Emit emit) {
  std::vector<Lit> current;
  emit(current);
  // depth-first over index-increasing combinations
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (current.size() == max_size) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      const bool clash = std::any_of(current.begin(), current.end(),
                                     [&](const Lit& c) { return conflicts(c, pool[i]); });
      if (clash) continue;
      current.push_back(pool[i]);
      emit(current);
      self(self, i + 1);
      current.pop_back();
    }
  };
  recurse(recurse, 0);
}

}  // namespace

std::vector<Conjunction> enumerate_antecedents(std::span<const Literal> literals,
                                               std::size_t max_size) {
  if (max_size == 0) throw std::invalid_argument("antecedent size bound must be >= 1");
  std::vector<Literal> pool(literals.begin(), literals.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  std::vector<Conjunction> out;
  enumerate_subsets(
      pool, max_size,
      [](const Literal& a, const Literal& b) { return a.fluent == b.fluent; },
      [&](const std::vector<Literal>& subset) { out.emplace_back(subset); });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IdConjunction> enumerate_id_antecedents(std::size_t atom_count,
                                                    std::size_t max_size) {
  if (max_size == 0) throw std::invalid_argument("antecedent size bound must be >= 1");
  std::vector<LitId> pool(2 * atom_count);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<LitId>(i);

  std::vector<IdConjunction> out;
  enumerate_subsets(
      pool, max_size, [](LitId a, LitId b) { return atom_of(a) == atom_of(b); },
      [&](const std::vector<LitId>& subset) { out.push_back(subset); });
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t antecedent_bound(std::size_t literal_count, std::size_t max_size) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  std::size_t binom = 1;  // C(literal_count, i)
  for (std::size_t i = 0; i <= max_size && i <= literal_count; ++i) {
    if (total > kMax - binom) return kMax;
    total += binom;
    const std::size_t num = literal_count - i;
    if (binom > kMax / (num == 0 ? 1 : num)) return kMax;
    binom = binom * num / (i + 1);
  }
  return total;
}

}  // namespace csam
