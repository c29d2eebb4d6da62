#include "deepregex/char_set.hpp"

#include <stdexcept>

namespace deepregex {

CharSet CharSet::universe() {
  static const CharSet u = range(static_cast<char>(kFirst), static_cast<char>(kLast));
  return u;
}

CharSet CharSet::single(char c) {
  CharSet s;
  s.insert(c);
  return s;
}

CharSet CharSet::range(char lo, char hi) {
  CharSet s;
  for (int c = static_cast<unsigned char>(lo); c <= static_cast<unsigned char>(hi); ++c) {
    s.insert(static_cast<char>(c));
  }
  return s;
}

CharSet CharSet::of(std::string_view chars) {
  CharSet s;
  for (char c : chars) s.insert(c);
  return s;
}

CharSet CharSet::vowels() { return of("AEIOUaeiou"); }
CharSet CharSet::digits() { return range('0', '9'); }
CharSet CharSet::upper() { return range('A', 'Z'); }
CharSet CharSet::lower() { return range('a', 'z'); }

CharSet CharSet::word_chars() {
  return upper() | lower() | digits() | single('_');
}

CharSet CharSet::non_word_chars() { return word_chars().complement(); }

bool CharSet::is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

std::optional<char> CharSet::min_char() const {
  for (int c = kFirst; c <= kLast; ++c) {
    if (bits_.test(c)) return static_cast<char>(c);
  }
  return std::nullopt;
}

void CharSet::insert(char c) {
  if (!is_printable(c)) {
    throw std::invalid_argument("character outside printable ASCII: code " +
                                std::to_string(static_cast<unsigned char>(c)));
  }
  bits_.set(static_cast<unsigned char>(c));
}

void CharSet::erase(char c) {
  if (is_printable(c)) bits_.reset(static_cast<unsigned char>(c));
}

bool CharSet::operator<(const CharSet& o) const {
  auto a = min_char();
  auto b = o.min_char();
  if (a != b) return a < b;  // nullopt (empty set) sorts first
  for (int c = kFirst; c <= kLast; ++c) {
    if (bits_.test(c) != o.bits_.test(c)) return bits_.test(c);
  }
  return false;
}

std::string CharSet::members() const {
  std::string out;
  for (int c = kFirst; c <= kLast; ++c) {
    if (bits_.test(c)) out.push_back(static_cast<char>(c));
  }
  return out;
}

}  // namespace deepregex
