#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "deepregex/char_set.hpp"

namespace deepregex {

enum class RegexKind {
  Literal,
  Class,
  Concat,
  And,
  Or,
  Not,
  Star,
  Plus,
  RepeatAtLeast,
  RepeatAtMost,
  WordBounded,
};

/// Named view of a character class. `Set` covers anything that is not one
/// of the five grammar terminals.
enum class ClassKind { Vowel, Digit, Upper, Lower, AnyChar, Set };

/// Immutable value tree over the extended regex operators.
///
/// Factories enforce the structural invariants: And/Or take at least two
/// children, repetition counts are positive, literals are non-empty [a-z]+
/// words. A Concat of a single child collapses to the child.
class Regex {
 public:
  static Regex literal(std::string word);
  static Regex char_class(CharSet chars);
  static Regex any_char() { return char_class(CharSet::universe()); }
  static Regex concat(std::vector<Regex> children);
  static Regex intersection(std::vector<Regex> children);
  static Regex alternation(std::vector<Regex> children);
  static Regex complement(Regex child);
  static Regex star(Regex child);
  static Regex plus(Regex child);
  static Regex at_least(Regex child, int n);
  static Regex at_most(Regex child, int n);
  static Regex word_bounded(Regex child);
  /// Star(AnyChar), the `.*` context.
  static Regex any_string() { return star(any_char()); }

  RegexKind kind() const { return kind_; }
  const std::string& text() const { return text_; }
  const CharSet& chars() const { return chars_; }
  ClassKind class_kind() const;
  int count() const { return count_; }
  std::span<const Regex> children() const { return children_; }
  const Regex& child() const { return children_.front(); }

  bool is_any_string() const;
  /// Number of nodes in the tree.
  std::size_t size() const;
  std::size_t depth() const;

  bool operator==(const Regex&) const = default;

 private:
  Regex() = default;

  RegexKind kind_ = RegexKind::Literal;
  std::string text_;
  CharSet chars_;
  int count_ = 0;
  std::vector<Regex> children_;
};

class RegexError : public std::runtime_error {
 public:
  RegexError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Malformed input: unbalanced groups, dangling operators, bad counts.
class RegexSyntaxError : public RegexError {
  using RegexError::RegexError;
};

/// Well-formed regex syntax outside the supported notation (backreferences,
/// anchors, lazy quantifiers, general {m,n} counts, uppercase literals...).
class UnsupportedConstructError : public RegexError {
  using RegexError::RegexError;
};

/// Parse the dataset notation. Precedence, tightest first: repetition
/// suffixes, concatenation, `&`, `|`. Mixing `&` and `|` at one level
/// without parentheses is rejected.
Regex parse(std::string_view pattern);

/// Canonical dataset spelling. parse(render(r)) == r for every tree.
std::string render(const Regex& ast);

/// Warnings for WordBounded nodes whose body may start or end with a
/// non-word character. Never fatal: the reference example
/// `\b([A-Z])(.*)\b` itself ends in `.*`.
std::vector<std::string> word_boundary_warnings(const Regex& ast);

/// Character classes the tree mentions: one singleton per literal letter,
/// every class node, and the non-word class when a WordBounded node occurs.
std::vector<CharSet> mentioned_classes(const Regex& ast);

/// Reference membership test under whole-string semantics.
///
/// Works by brute force over substring spans: for each node it computes
/// the relation {(i, j) : s[i, j) in L(node)}, composing relations for
/// concatenation and taking closures for repetition. Independent of the
/// automata code; meant for short strings.
bool oracle_match(const Regex& ast, std::string_view s);

}  // namespace deepregex
