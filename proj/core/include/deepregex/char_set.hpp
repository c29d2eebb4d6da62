#pragma once

#include <bitset>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace deepregex {

/// A set of printable ASCII characters (code points 32..126).
///
/// Every character class in the regex notation, every minterm of an
/// automaton alphabet and every probe-string alphabet is one of these.
class CharSet {
 public:
  static constexpr int kFirst = 32;
  static constexpr int kLast = 126;
  static constexpr int kUniverseSize = kLast - kFirst + 1;

  CharSet() = default;

  static CharSet universe();
  static CharSet single(char c);
  static CharSet range(char lo, char hi);
  static CharSet of(std::string_view chars);

  static CharSet vowels();     // [AEIOUaeiou]
  static CharSet digits();     // [0-9]
  static CharSet upper();      // [A-Z]
  static CharSet lower();      // [a-z]
  static CharSet word_chars(); // [A-Za-z0-9_]
  static CharSet non_word_chars();

  static bool is_printable(char c) {
    return static_cast<unsigned char>(c) >= kFirst && static_cast<unsigned char>(c) <= kLast;
  }
  static bool is_word_char(char c);

  bool contains(char c) const { return is_printable(c) && bits_.test(static_cast<unsigned char>(c)); }
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }
  bool is_universe() const { return *this == universe(); }
  bool is_subset_of(const CharSet& other) const { return (bits_ & ~other.bits_).none(); }
  bool intersects(const CharSet& other) const { return (bits_ & other.bits_).any(); }

  /// Smallest member, or nullopt when empty.
  std::optional<char> min_char() const;

  void insert(char c);
  void erase(char c);

  CharSet operator|(const CharSet& o) const { return CharSet(bits_ | o.bits_); }
  CharSet operator&(const CharSet& o) const { return CharSet(bits_ & o.bits_); }
  CharSet operator-(const CharSet& o) const { return CharSet(bits_ & ~o.bits_); }
  /// Complement with respect to printable ASCII.
  CharSet complement() const { return universe() - *this; }

  bool operator==(const CharSet&) const = default;

  /// Canonical ordering: by smallest member, then by bit pattern.
  bool operator<(const CharSet& o) const;

  /// Members in ascending code-point order.
  std::string members() const;

 private:
  explicit CharSet(std::bitset<128> bits) : bits_(bits) {}
  std::bitset<128> bits_;
};

}  // namespace deepregex
