#include "deepregex/regex_ast.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>

namespace deepregex {

namespace {

bool is_lower_word(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

Regex Regex::literal(std::string word) {
  if (!is_lower_word(word)) {
    throw std::invalid_argument("literal must be a non-empty [a-z]+ word: '" + word + "'");
  }
  Regex r;
  r.kind_ = RegexKind::Literal;
  r.text_ = std::move(word);
  return r;
}

Regex Regex::char_class(CharSet chars) {
  if (chars.empty()) throw std::invalid_argument("empty character class");
  Regex r;
  r.kind_ = RegexKind::Class;
  r.chars_ = chars;
  return r;
}

Regex Regex::concat(std::vector<Regex> children) {
  if (children.empty()) throw std::invalid_argument("concatenation needs at least one child");
  if (children.size() == 1) return std::move(children.front());
  Regex r;
  r.kind_ = RegexKind::Concat;
  r.children_ = std::move(children);
  return r;
}

Regex Regex::intersection(std::vector<Regex> children) {
  if (children.size() < 2) throw std::invalid_argument("intersection needs at least two children");
  Regex r;
  r.kind_ = RegexKind::And;
  r.children_ = std::move(children);
  return r;
}

Regex Regex::alternation(std::vector<Regex> children) {
  if (children.size() < 2) throw std::invalid_argument("alternation needs at least two children");
  Regex r;
  r.kind_ = RegexKind::Or;
  r.children_ = std::move(children);
  return r;
}

Regex Regex::complement(Regex child) {
  Regex r;
  r.kind_ = RegexKind::Not;
  r.children_.push_back(std::move(child));
  return r;
}

Regex Regex::star(Regex child) {
  Regex r;
  r.kind_ = RegexKind::Star;
  r.children_.push_back(std::move(child));
  return r;
}

Regex Regex::plus(Regex child) {
  Regex r;
  r.kind_ = RegexKind::Plus;
  r.children_.push_back(std::move(child));
  return r;
}

Regex Regex::at_least(Regex child, int n) {
  if (n < 1) throw std::invalid_argument("{N,} needs N >= 1");
  Regex r;
  r.kind_ = RegexKind::RepeatAtLeast;
  r.count_ = n;
  r.children_.push_back(std::move(child));
  return r;
}

Regex Regex::at_most(Regex child, int n) {
  if (n < 1) throw std::invalid_argument("{1,N} needs N >= 1");
  Regex r;
  r.kind_ = RegexKind::RepeatAtMost;
  r.count_ = n;
  r.children_.push_back(std::move(child));
  return r;
}

Regex Regex::word_bounded(Regex child) {
  Regex r;
  r.kind_ = RegexKind::WordBounded;
  r.children_.push_back(std::move(child));
  return r;
}

ClassKind Regex::class_kind() const {
  if (kind_ != RegexKind::Class) throw std::logic_error("class_kind() on a non-class node");
  if (chars_ == CharSet::vowels()) return ClassKind::Vowel;
  if (chars_ == CharSet::digits()) return ClassKind::Digit;
  if (chars_ == CharSet::upper()) return ClassKind::Upper;
  if (chars_ == CharSet::lower()) return ClassKind::Lower;
  if (chars_.is_universe()) return ClassKind::AnyChar;
  return ClassKind::Set;
}

bool Regex::is_any_string() const {
  return kind_ == RegexKind::Star && child().kind() == RegexKind::Class && child().chars().is_universe();
}

std::size_t Regex::size() const {
  std::size_t n = 1;
  for (const auto& c : children_) n += c.size();
  return n;
}

std::size_t Regex::depth() const {
  std::size_t d = 0;
  for (const auto& c : children_) d = std::max(d, c.depth());
  return d + 1;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Regex run() {
    if (src_.empty()) throw RegexSyntaxError("empty pattern", 0);
    Regex r = alternation(false);
    if (!at_end()) {
      if (peek() == ')') throw RegexSyntaxError("unmatched ')'", pos_);
      throw RegexSyntaxError("unexpected character '" + std::string(1, peek()) + "'", pos_);
    }
    return r;
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  bool at_boundary_marker() const { return peek() == '\\' && peek(1) == 'b'; }

  void expect(char c) {
    if (at_end()) {
      throw RegexSyntaxError(std::string("expected '") + c + "' but reached end of pattern", pos_);
    }
    if (peek() != c) {
      throw RegexSyntaxError(std::string("expected '") + c + "' but found '" + peek() + "'", pos_);
    }
    ++pos_;
  }

  // alternation := sequence (('&' | '|') sequence)*, one operator kind per level
  Regex alternation(bool in_bound) {
    std::vector<Regex> branches;
    branches.push_back(sequence(in_bound));
    char op = 0;
    while (!at_end() && (peek() == '&' || peek() == '|')) {
      if (op != 0 && peek() != op) {
        throw RegexSyntaxError("mixed '&' and '|' at one level need parentheses", pos_);
      }
      op = peek();
      ++pos_;
      branches.push_back(sequence(in_bound));
    }
    if (branches.size() == 1) return std::move(branches.front());
    return op == '&' ? Regex::intersection(std::move(branches)) : Regex::alternation(std::move(branches));
  }

  // sequence := unit+ ; stops at ')' '&' '|' end, or a closing \b inside a bound
  Regex sequence(bool in_bound) {
    std::vector<Regex> units;
    while (!at_end()) {
      char c = peek();
      if (c == ')' || c == '&' || c == '|') break;
      if (in_bound && at_boundary_marker()) break;
      unit(units);
    }
    if (units.empty()) {
      if (at_end()) throw RegexSyntaxError("expected an expression but reached end of pattern", pos_);
      throw RegexSyntaxError(std::string("expected an expression before '") + peek() + "'", pos_);
    }
    return Regex::concat(std::move(units));
  }

  void unit(std::vector<Regex>& out) {
    std::size_t start = pos_;
    char c = peek();
    if (c >= 'a' && c <= 'z') {
      std::size_t end = pos_;
      while (end < src_.size() && src_[end] >= 'a' && src_[end] <= 'z') ++end;
      std::string word(src_.substr(pos_, end - pos_));
      pos_ = end;
      // A suffix binds to the last letter only.
      if (word.size() > 1 && is_suffix_start()) {
        out.push_back(Regex::literal(word.substr(0, word.size() - 1)));
        out.push_back(suffixes(Regex::literal(word.substr(word.size() - 1))));
      } else {
        out.push_back(suffixes(Regex::literal(std::move(word))));
      }
      return;
    }
    Regex atom = [&]() -> Regex {
      switch (c) {
        case '(': {
          ++pos_;
          if (peek() == '?') throw UnsupportedConstructError("group modifiers '(?' are not supported", pos_);
          if (peek() == ')') throw RegexSyntaxError("empty group", start);
          Regex inner = alternation(false);
          expect(')');
          return inner;
        }
        case '~': {
          ++pos_;
          if (peek() != '(') throw RegexSyntaxError("'~' must be followed by '('", pos_);
          ++pos_;
          if (peek() == ')') throw RegexSyntaxError("empty complement", start);
          Regex inner = alternation(false);
          expect(')');
          return Regex::complement(std::move(inner));
        }
        case '[':
          return Regex::char_class(bracket());
        case '.':
          ++pos_;
          return Regex::any_char();
        case '\\':
          return escape();
        case '*':
        case '+':
        case '{':
          throw RegexSyntaxError(std::string("nothing to repeat before '") + c + "'", pos_);
        case '?':
          throw UnsupportedConstructError("'?' quantifier is not supported", pos_);
        case '^':
        case '$':
          throw UnsupportedConstructError(std::string("anchor '") + c + "' is not supported", pos_);
        case ']':
          throw RegexSyntaxError("unmatched ']'", pos_);
        case '}':
          throw RegexSyntaxError("unmatched '}'", pos_);
        default:
          if (!CharSet::is_printable(c)) {
            throw RegexSyntaxError("non-printable character in pattern", pos_);
          }
          throw UnsupportedConstructError(std::string("literal '") + c + "' outside [a-z]", pos_);
      }
    }();
    out.push_back(suffixes(std::move(atom)));
  }

  Regex escape() {
    std::size_t start = pos_;
    char e = peek(1);
    if (e == 'b') {
      pos_ += 2;
      if (at_boundary_marker()) throw RegexSyntaxError("empty word boundary group", start);
      Regex inner = sequence(true);
      if (!at_boundary_marker()) {
        throw RegexSyntaxError("unterminated \\b group (opened at offset " + std::to_string(start) + ")", pos_);
      }
      pos_ += 2;
      return Regex::word_bounded(std::move(inner));
    }
    if (e == '\0') throw RegexSyntaxError("dangling backslash", start);
    if (e >= '1' && e <= '9') throw UnsupportedConstructError("backreferences are not supported", start);
    throw UnsupportedConstructError(std::string("escape '\\") + e + "' is not supported", start);
  }

  bool is_suffix_start() const {
    char c = peek();
    return c == '*' || c == '+' || c == '{' || c == '?';
  }

  Regex suffixes(Regex atom) {
    while (!at_end()) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        atom = Regex::star(std::move(atom));
      } else if (c == '+') {
        ++pos_;
        atom = Regex::plus(std::move(atom));
      } else if (c == '{') {
        atom = counted(std::move(atom));
      } else if (c == '?') {
        throw UnsupportedConstructError("'?' quantifier is not supported", pos_);
      } else {
        break;
      }
    }
    return atom;
  }

  int number() {
    std::size_t start = pos_;
    long value = 0;
    while (peek() >= '0' && peek() <= '9') {
      value = value * 10 + (peek() - '0');
      if (value > 1000000) throw RegexSyntaxError("repetition count too large", start);
      ++pos_;
    }
    if (pos_ == start) return -1;
    return static_cast<int>(value);
  }

  // {N,} or {1,N}
  Regex counted(Regex atom) {
    std::size_t start = pos_;
    ++pos_;
    int lo = number();
    if (lo < 0) throw RegexSyntaxError("expected a number after '{'", pos_);
    if (peek() == '}') {
      throw UnsupportedConstructError("exact repetition {N} is not supported", start);
    }
    expect(',');
    int hi = number();
    expect('}');
    if (hi < 0) {
      if (lo < 1) throw RegexSyntaxError("{N,} needs N >= 1", start);
      return Regex::at_least(std::move(atom), lo);
    }
    if (lo != 1) throw UnsupportedConstructError("only {1,N} upper-bounded repetition is supported", start);
    if (hi < 1) throw RegexSyntaxError("{1,N} needs N >= 1", start);
    return Regex::at_most(std::move(atom), hi);
  }

  char bracket_char() {
    if (at_end()) throw RegexSyntaxError("unterminated character class", pos_);
    char c = peek();
    if (c == '\\') {
      char e = peek(1);
      if (e == '\0') throw RegexSyntaxError("unterminated character class", pos_);
      if (!(e == '\\' || e == ']' || e == '[' || e == '-' || e == '^')) {
        throw UnsupportedConstructError(std::string("escape '\\") + e + "' in class is not supported", pos_);
      }
      pos_ += 2;
      return e;
    }
    if (!CharSet::is_printable(c)) throw RegexSyntaxError("non-printable character in class", pos_);
    ++pos_;
    return c;
  }

  CharSet bracket() {
    std::size_t start = pos_;
    ++pos_;
    bool negated = false;
    if (peek() == '^') {
      negated = true;
      ++pos_;
    }
    CharSet set;
    bool any_item = false;
    while (true) {
      if (at_end()) throw RegexSyntaxError("unterminated character class", start);
      if (peek() == ']') {
        ++pos_;
        break;
      }
      std::size_t item_at = pos_;
      char lo = bracket_char();
      char hi = lo;
      if (peek() == '-' && peek(1) != ']' && peek(1) != '\0') {
        ++pos_;
        hi = bracket_char();
        if (hi < lo) throw RegexSyntaxError("reversed range in character class", item_at);
      }
      set = set | CharSet::range(lo, hi);
      any_item = true;
    }
    if (!any_item) throw RegexSyntaxError("empty character class", start);
    if (negated) set = set.complement();
    if (set.empty()) throw RegexSyntaxError("character class matches nothing", start);
    return set;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Regex parse(std::string_view pattern) { return Parser(pattern).run(); }

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string escape_in_class(char c) {
  if (c == '\\' || c == ']' || c == '[' || c == '-' || c == '^') return std::string{'\\', c};
  return std::string(1, c);
}

std::string render_set(const CharSet& set) {
  std::string out = "[";
  std::string m = set.members();
  for (std::size_t i = 0; i < m.size();) {
    std::size_t j = i;
    while (j + 1 < m.size() && m[j + 1] == m[j] + 1) ++j;
    if (j - i >= 2) {
      out += escape_in_class(m[i]) + "-" + escape_in_class(m[j]);
    } else {
      for (std::size_t k = i; k <= j; ++k) out += escape_in_class(m[k]);
    }
    i = j + 1;
  }
  return out + "]";
}

std::string render_class(const Regex& r) {
  switch (r.class_kind()) {
    case ClassKind::Vowel: return "[AEIOUaeiou]";
    case ClassKind::Digit: return "[0-9]";
    case ClassKind::Upper: return "[A-Z]";
    case ClassKind::Lower: return "[a-z]";
    case ClassKind::AnyChar: return ".";
    case ClassKind::Set: return render_set(r.chars());
  }
  return render_set(r.chars());
}

std::string group(const std::string& s) { return "(" + s + ")"; }

// Literal and class operands stand alone next to `.*`; everything else is grouped.
std::string operand(const Regex& r) {
  if (r.kind() == RegexKind::Literal) return r.text();
  if (r.kind() == RegexKind::Class) return render_class(r);
  return group(render(r));
}

bool is_contains_shape(std::span<const Regex> c) {
  return c.size() == 3 && c[0].is_any_string() && !c[1].is_any_string() && c[2].is_any_string();
}

bool is_followed_by_shape(std::span<const Regex> c) {
  return c.size() == 4 && c[0].is_any_string() && !c[1].is_any_string() && c[2].is_any_string() &&
         !c[3].is_any_string();
}

std::string postfix_operand(const Regex& r) {
  return r.kind() == RegexKind::Class ? render_class(r) : group(render(r));
}

std::string join_grouped(std::span<const Regex> children, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i) out += sep;
    out += group(render(children[i]));
  }
  return out;
}

}  // namespace

std::string render(const Regex& r) {
  switch (r.kind()) {
    case RegexKind::Literal:
      return r.text();
    case RegexKind::Class:
      return render_class(r);
    case RegexKind::Concat: {
      auto c = r.children();
      if (is_contains_shape(c)) return ".*" + operand(c[1]) + ".*";
      if (is_followed_by_shape(c)) return ".*" + operand(c[1]) + ".*" + operand(c[3]);
      return join_grouped(c, "");
    }
    case RegexKind::And:
      return join_grouped(r.children(), "&");
    case RegexKind::Or:
      return join_grouped(r.children(), "|");
    case RegexKind::Not:
      return "~" + group(render(r.child()));
    case RegexKind::Star:
      return postfix_operand(r.child()) + "*";
    case RegexKind::Plus:
      return postfix_operand(r.child()) + "+";
    case RegexKind::RepeatAtLeast:
      return postfix_operand(r.child()) + "{" + std::to_string(r.count()) + ",}";
    case RegexKind::RepeatAtMost:
      return postfix_operand(r.child()) + "{1," + std::to_string(r.count()) + "}";
    case RegexKind::WordBounded: {
      const Regex& body = r.child();
      std::string inner = body.kind() == RegexKind::Concat ? render(body) : group(render(body));
      return "\\b" + inner + "\\b";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Static checks

namespace {

struct Edges {
  CharSet first;
  CharSet last;
  bool nullable = false;
};

Edges edges_of(const Regex& r, std::vector<std::string>& warnings) {
  switch (r.kind()) {
    case RegexKind::Literal:
      return {CharSet::single(r.text().front()), CharSet::single(r.text().back()), false};
    case RegexKind::Class:
      return {r.chars(), r.chars(), false};
    case RegexKind::Concat: {
      std::vector<Edges> kids;
      for (const auto& c : r.children()) kids.push_back(edges_of(c, warnings));
      Edges e;
      e.nullable = true;
      for (const auto& k : kids) {
        e.first = e.first | k.first;
        if (!k.nullable) {
          e.nullable = false;
          break;
        }
      }
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
        e.last = e.last | it->last;
        if (!it->nullable) break;
      }
      return e;
    }
    case RegexKind::Or: {
      Edges e;
      for (const auto& c : r.children()) {
        Edges k = edges_of(c, warnings);
        e.first = e.first | k.first;
        e.last = e.last | k.last;
        e.nullable = e.nullable || k.nullable;
      }
      return e;
    }
    case RegexKind::And: {
      Edges e{CharSet::universe(), CharSet::universe(), true};
      for (const auto& c : r.children()) {
        Edges k = edges_of(c, warnings);
        e.first = e.first & k.first;
        e.last = e.last & k.last;
        e.nullable = e.nullable && k.nullable;
      }
      return e;
    }
    case RegexKind::Not:
      edges_of(r.child(), warnings);
      return {CharSet::universe(), CharSet::universe(), true};
    case RegexKind::Star: {
      Edges k = edges_of(r.child(), warnings);
      k.nullable = true;
      return k;
    }
    case RegexKind::Plus:
    case RegexKind::RepeatAtLeast:
    case RegexKind::RepeatAtMost:
      return edges_of(r.child(), warnings);
    case RegexKind::WordBounded: {
      Edges body = edges_of(r.child(), warnings);
      std::string where = "\\b group '" + render(r) + "'";
      if (body.first.intersects(CharSet::non_word_chars())) {
        warnings.push_back(where + ": body may start with a non-word character");
      }
      if (body.last.intersects(CharSet::non_word_chars())) {
        warnings.push_back(where + ": body may end with a non-word character");
      }
      if (body.nullable) warnings.push_back(where + ": body may be empty");
      return {CharSet::universe(), CharSet::universe(), body.nullable};
    }
  }
  return {};
}

void collect_classes(const Regex& r, std::set<CharSet>& out) {
  switch (r.kind()) {
    case RegexKind::Literal:
      for (char c : r.text()) out.insert(CharSet::single(c));
      break;
    case RegexKind::Class:
      out.insert(r.chars());
      break;
    case RegexKind::WordBounded:
      out.insert(CharSet::non_word_chars());
      [[fallthrough]];
    default:
      for (const auto& c : r.children()) collect_classes(c, out);
  }
}

}  // namespace

std::vector<std::string> word_boundary_warnings(const Regex& ast) {
  std::vector<std::string> warnings;
  edges_of(ast, warnings);
  return warnings;
}

std::vector<CharSet> mentioned_classes(const Regex& ast) {
  std::set<CharSet> classes;
  collect_classes(ast, classes);
  return {classes.begin(), classes.end()};
}

// ---------------------------------------------------------------------------
// Reference matcher

namespace {

/// Relation over string positions 0..n: bit (i, j) set iff s[i, j) is in
/// the language. Only i <= j is ever set.
class SpanRelation {
 public:
  explicit SpanRelation(int n) : n_(n), words_((n + 1 + 63) / 64), bits_((n + 1) * words_, 0) {}

  static SpanRelation identity(int n) {
    SpanRelation r(n);
    for (int i = 0; i <= n; ++i) r.set(i, i);
    return r;
  }

  int n() const { return n_; }
  bool get(int i, int j) const { return (row(i)[j / 64] >> (j % 64)) & 1U; }
  void set(int i, int j) { row(i)[j / 64] |= std::uint64_t{1} << (j % 64); }

  SpanRelation compose(const SpanRelation& next) const {
    SpanRelation out(n_);
    for (int i = 0; i <= n_; ++i) {
      for (int j = i; j <= n_; ++j) {
        if (!get(i, j)) continue;
        for (int w = 0; w < words_; ++w) out.row(i)[w] |= next.row(j)[w];
      }
    }
    return out;
  }

  void unite(const SpanRelation& o) {
    for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] |= o.bits_[k];
  }

  void intersect(const SpanRelation& o) {
    for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] &= o.bits_[k];
  }

  SpanRelation complement() const {
    SpanRelation out(n_);
    for (int i = 0; i <= n_; ++i)
      for (int j = i; j <= n_; ++j)
        if (!get(i, j)) out.set(i, j);
    return out;
  }

  /// Reflexive-transitive closure.
  SpanRelation closure() const {
    SpanRelation acc = identity(n_);
    while (true) {
      SpanRelation grown = acc.compose(*this);
      grown.unite(acc);
      if (grown.bits_ == acc.bits_) return acc;
      acc = std::move(grown);
    }
  }

 private:
  std::uint64_t* row(int i) { return bits_.data() + static_cast<std::size_t>(i) * words_; }
  const std::uint64_t* row(int i) const { return bits_.data() + static_cast<std::size_t>(i) * words_; }

  int n_;
  int words_;
  std::vector<std::uint64_t> bits_;
};

SpanRelation spans(const Regex& r, std::string_view s) {
  const int n = static_cast<int>(s.size());
  switch (r.kind()) {
    case RegexKind::Literal: {
      SpanRelation out(n);
      const auto& w = r.text();
      for (int i = 0; i + static_cast<int>(w.size()) <= n; ++i) {
        if (s.substr(i, w.size()) == w) out.set(i, i + static_cast<int>(w.size()));
      }
      return out;
    }
    case RegexKind::Class: {
      SpanRelation out(n);
      for (int i = 0; i < n; ++i)
        if (r.chars().contains(s[i])) out.set(i, i + 1);
      return out;
    }
    case RegexKind::Concat: {
      auto kids = r.children();
      SpanRelation acc = spans(kids[0], s);
      for (std::size_t k = 1; k < kids.size(); ++k) acc = acc.compose(spans(kids[k], s));
      return acc;
    }
    case RegexKind::And: {
      auto kids = r.children();
      SpanRelation acc = spans(kids[0], s);
      for (std::size_t k = 1; k < kids.size(); ++k) acc.intersect(spans(kids[k], s));
      return acc;
    }
    case RegexKind::Or: {
      SpanRelation acc(n);
      for (const auto& c : r.children()) acc.unite(spans(c, s));
      return acc;
    }
    case RegexKind::Not:
      return spans(r.child(), s).complement();
    case RegexKind::Star:
      return spans(r.child(), s).closure();
    case RegexKind::Plus: {
      SpanRelation one = spans(r.child(), s);
      return one.compose(one.closure());
    }
    case RegexKind::RepeatAtLeast: {
      SpanRelation one = spans(r.child(), s);
      SpanRelation acc = one;
      for (int k = 1; k < r.count(); ++k) acc = acc.compose(one);
      return acc.compose(one.closure());
    }
    case RegexKind::RepeatAtMost: {
      SpanRelation one = spans(r.child(), s);
      SpanRelation power = one;
      SpanRelation acc = one;
      for (int k = 1; k < r.count(); ++k) {
        power = power.compose(one);
        acc.unite(power);
      }
      return acc;
    }
    case RegexKind::WordBounded: {
      // s[i, j) = u v w, v in L(body); u empty or ends in a non-word char,
      // w empty or starts with a non-word char.
      SpanRelation body = spans(r.child(), s);
      SpanRelation out(n);
      for (int a = 0; a <= n; ++a) {
        for (int b = a; b <= n; ++b) {
          if (!body.get(a, b)) continue;
          bool left_open = a > 0 && !CharSet::is_word_char(s[a - 1]);
          bool right_open = b < n && !CharSet::is_word_char(s[b]);
          for (int i = left_open ? 0 : a; i <= a; ++i)
            for (int j = b; j <= (right_open ? n : b); ++j) out.set(i, j);
        }
      }
      return out;
    }
  }
  return SpanRelation(n);
}

}  // namespace

bool oracle_match(const Regex& ast, std::string_view s) {
  return spans(ast, s).get(0, static_cast<int>(s.size()));
}

}  // namespace deepregex
