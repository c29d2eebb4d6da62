#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "deepregex/char_set.hpp"
#include "deepregex/regex_ast.hpp"

namespace deepregex {

/// Partition of printable ASCII into disjoint, non-empty minterms. Each
/// minterm is one input symbol of a Dfa.
class Alphabet {
 public:
  explicit Alphabet(std::vector<CharSet> minterms);

  int size() const { return static_cast<int>(minterms_.size()); }
  const std::vector<CharSet>& minterms() const { return minterms_; }
  const CharSet& minterm(int symbol) const { return minterms_.at(symbol); }

  /// Symbol of `c`, or -1 for characters outside printable ASCII.
  int symbol_of(char c) const {
    auto u = static_cast<unsigned char>(c);
    return u < 128 ? symbol_of_[u] : -1;
  }
  /// Smallest code point of the minterm.
  char representative(int symbol) const { return *minterms_.at(symbol).min_char(); }

  /// True iff `set` is a union of whole minterms.
  bool refines(const CharSet& set) const;
  std::vector<int> symbols_in(const CharSet& set) const;

  bool operator==(const Alphabet& o) const { return minterms_ == o.minterms_; }

 private:
  std::vector<CharSet> minterms_;
  std::array<std::int16_t, 128> symbol_of_{};
};

/// Coarsest partition of printable ASCII in which every class is a union of
/// cells; cells ordered by smallest code point.
Alphabet minterm_alphabet(std::span<const CharSet> classes);

/// Complete deterministic automaton over an Alphabet's symbol indices.
struct Dfa {
  int state_count = 0;
  int symbol_count = 0;
  int start = 0;
  std::vector<bool> accepting;
  std::vector<int> transitions;  // row-major: state * symbol_count + symbol

  int next(int state, int symbol) const {
    return transitions[static_cast<std::size_t>(state) * symbol_count + symbol];
  }
  bool operator==(const Dfa&) const = default;
};

class AutomataError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The alphabet does not refine a class mentioned by the regex.
class AlphabetMismatchError : public AutomataError {
  using AutomataError::AutomataError;
};

/// Compilation ran past its deadline or state budget.
class BudgetExceededError : public AutomataError {
  using AutomataError::AutomataError;
};

class EnumerationLimitError : public AutomataError {
  using AutomataError::AutomataError;
};

/// Resource limits for compilation. Default-constructed means unlimited.
struct Budget {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::size_t max_states = 1'000'000;

  static Budget within(std::chrono::milliseconds ms) {
    Budget b;
    b.deadline = std::chrono::steady_clock::now() + ms;
    return b;
  }
  void check(std::size_t states_so_far) const;
};

/// Compile to a complete, minimal DFA with L(dfa) = L(ast) under
/// whole-string semantics.
Dfa compile_dfa(const Regex& ast, const Alphabet& alphabet, const Budget& budget = {});

/// Hopcroft partition refinement. Unreachable states are dropped and the
/// result is renumbered breadth-first from the start state, so equal
/// languages give identical automata.
Dfa minimize_dfa(const Dfa& dfa);

/// Flip acceptance of a complete DFA.
Dfa complement_dfa(const Dfa& dfa);

bool accepts(const Dfa& dfa, const Alphabet& alphabet, std::string_view s);

/// Union-find equivalence check of two DFAs over the same alphabet. On
/// inequality, `witness` (if given) receives a shortest-found string of
/// representatives accepted by exactly one of them.
bool equivalent(const Dfa& a, const Dfa& b, const Alphabet& alphabet, std::string* witness = nullptr);

/// Accepted strings of length <= max_len spelled with one representative
/// character per minterm, in lexicographic order.
std::vector<std::string> enumerate_accepted(const Dfa& dfa, const Alphabet& alphabet, int max_len,
                                            std::size_t cap = 1'000'000);

/// Plain-text transition table.
void dump_dfa(std::ostream& out, const Dfa& dfa, const Alphabet& alphabet);

enum class Side { Left, Right };

class DfaEqualParseError : public std::runtime_error {
 public:
  DfaEqualParseError(Side side, const std::exception& cause)
      : std::runtime_error(std::string(side == Side::Left ? "left" : "right") + " pattern: " + cause.what()),
        side_(side) {}
  Side side() const { return side_; }

 private:
  Side side_;
};

struct Equivalence {
  bool equal = false;
  std::string witness;  // empty when equal
  Alphabet alphabet{{CharSet::universe()}};
  Dfa left;
  Dfa right;
};

/// Language equality of two patterns over their joint minterm alphabet.
Equivalence check_equivalence(std::string_view p, std::string_view q, const Budget& budget = {});

inline bool dfa_equal(std::string_view p, std::string_view q, const Budget& budget = {}) {
  return check_equivalence(p, q, budget).equal;
}

}  // namespace deepregex
