#include "doctest.h"

#include <random>

#include "deepregex/regex_ast.hpp"
#include "random_regex.hpp"

using namespace deepregex;

namespace {

Regex upper() { return Regex::char_class(CharSet::upper()); }
Regex digit() { return Regex::char_class(CharSet::digits()); }
Regex lit(const char* w) { return Regex::literal(w); }

}  // namespace

TEST_CASE("parse: reference example from the dataset") {
  Regex r = parse("~(\\b([A-Z])(.*)\\b)");
  Regex expected = Regex::complement(Regex::word_bounded(Regex::concat({upper(), Regex::any_string()})));
  CHECK(r == expected);
  CHECK(render(expected) == "~(\\b([A-Z])(.*)\\b)");
}

TEST_CASE("parse: literals and alternation") {
  CHECK(parse("a") == lit("a"));
  CHECK(render(lit("a")) == "a");
  CHECK(parse("(a|b)") == Regex::alternation({lit("a"), lit("b")}));
  CHECK(parse("a|b") == parse("(a|b)"));
  CHECK(parse("dog") == lit("dog"));
}

TEST_CASE("parse: precedence") {
  // suffix binds tighter than concatenation, and to the last letter only
  CHECK(parse("dog*") == Regex::concat({lit("do"), Regex::star(lit("g"))}));
  CHECK(parse("[0-9]{2,}") == Regex::at_least(digit(), 2));
  CHECK(parse("[0-9]{1,2}") == Regex::at_most(digit(), 2));
  CHECK(parse("(a)(b)&(c)") == Regex::intersection({Regex::concat({lit("a"), lit("b")}), lit("c")}));
  CHECK(parse("a|b|c") == Regex::alternation({lit("a"), lit("b"), lit("c")}));
  CHECK(parse("a|(b|c)") == Regex::alternation({lit("a"), Regex::alternation({lit("b"), lit("c")})}));
  CHECK(parse("((a)*)+") == Regex::plus(Regex::star(lit("a"))));
  CHECK(parse("~(a)*") == Regex::star(Regex::complement(lit("a"))));
}

TEST_CASE("parse: sugared and core spellings agree") {
  Regex contains = Regex::concat({Regex::any_string(), Regex::char_class(CharSet::vowels()), Regex::any_string()});
  CHECK(parse(".*[AEIOUaeiou].*") == contains);
  CHECK(parse("(.*)([AEIOUaeiou])(.*)") == contains);
  CHECK(parse("[aeiouAEIOU]") == Regex::char_class(CharSet::vowels()));
  CHECK(render(contains) == ".*[AEIOUaeiou].*");
}

TEST_CASE("parse: character classes") {
  CHECK(parse("[0-9]").class_kind() == ClassKind::Digit);
  CHECK(parse("[a-z]").class_kind() == ClassKind::Lower);
  CHECK(parse("[A-Z]").class_kind() == ClassKind::Upper);
  CHECK(parse(".").class_kind() == ClassKind::AnyChar);
  Regex odd = parse("[0-4x\\-]");
  CHECK(odd.class_kind() == ClassKind::Set);
  CHECK(odd.chars() == (CharSet::range('0', '4') | CharSet::of("x-")));
  CHECK(parse("[^0-9]").chars() == CharSet::digits().complement());
  CHECK(parse(render(odd)) == odd);
}

TEST_CASE("parse: syntax errors carry byte offsets") {
  auto offset_of = [](const char* p) -> long {
    try {
      parse(p);
    } catch (const RegexSyntaxError& e) {
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  CHECK(offset_of("((") == 2);
  CHECK(offset_of("(a))") == 3);
  CHECK(offset_of("") == 0);
  CHECK(offset_of("a|") == 2);
  CHECK(offset_of("*a") == 0);
  CHECK(offset_of("(a)&(b)|(c)") == 7);
  CHECK(offset_of("[z-a]") == 1);
  CHECK(offset_of("[abc") == 0);
  CHECK(offset_of("~a") == 1);
  CHECK(offset_of("\\b(a)") == 5);
  CHECK(offset_of("(a){0,}") == 3);
}

TEST_CASE("parse: unsupported constructs") {
  CHECK_THROWS_AS(parse("(a)\\1"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse("a?"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse("^a"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse("A"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse("a{2}"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse("a{2,3}"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse("\\d"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse("(?:a)"), UnsupportedConstructError);
}

TEST_CASE("factories enforce invariants") {
  CHECK_THROWS_AS(Regex::literal("Dog"), std::invalid_argument);
  CHECK_THROWS_AS(Regex::literal(""), std::invalid_argument);
  CHECK_THROWS_AS(Regex::alternation({lit("a")}), std::invalid_argument);
  CHECK_THROWS_AS(Regex::intersection({}), std::invalid_argument);
  CHECK_THROWS_AS(Regex::at_least(lit("a"), 0), std::invalid_argument);
  CHECK_THROWS_AS(Regex::at_most(lit("a"), 0), std::invalid_argument);
  CHECK(Regex::concat({lit("a")}) == lit("a"));
}

TEST_CASE("render: parse(render(r)) == r and render is a fixed point") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    Regex r = testing::random_regex(rng, 5);
    std::string text = render(r);
    Regex back = parse(text);
    REQUIRE_MESSAGE(back == r, text);
    CHECK(render(back) == text);
  }
}

TEST_CASE("oracle_match: anchored semantics") {
  Regex a_or_b = Regex::alternation({lit("a"), lit("b")});
  CHECK(oracle_match(a_or_b, "a"));
  CHECK_FALSE(oracle_match(a_or_b, "ab"));

  Regex no_number =
      Regex::complement(Regex::concat({Regex::any_string(), digit(), Regex::any_string()}));
  CHECK(oracle_match(no_number, "ab"));
  CHECK_FALSE(oracle_match(no_number, "a1"));
  CHECK(oracle_match(no_number, ""));

  Regex two_digits = Regex::at_least(digit(), 2);
  CHECK(oracle_match(two_digits, "12"));
  CHECK(oracle_match(two_digits, "123"));
  CHECK_FALSE(oracle_match(two_digits, "1"));

  Regex at_most = Regex::at_most(digit(), 2);
  CHECK_FALSE(oracle_match(at_most, ""));
  CHECK(oracle_match(at_most, "1"));
  CHECK(oracle_match(at_most, "12"));
  CHECK_FALSE(oracle_match(at_most, "123"));

  CHECK(oracle_match(lit("dog"), "dog"));
  CHECK_FALSE(oracle_match(lit("dog"), "dogs"));
  CHECK(oracle_match(Regex::any_string(), ""));
}

TEST_CASE("oracle_match: word boundaries") {
  Regex golden = parse("~(\\b([A-Z])(.*)\\b)");
  CHECK_FALSE(oracle_match(golden, "Dog"));
  CHECK(oracle_match(golden, "dog"));
  CHECK_FALSE(oracle_match(golden, "a Dog"));
  CHECK(oracle_match(golden, "aDog"));

  Regex words_dog = parse("\\b(dog)\\b");
  CHECK(oracle_match(words_dog, "dog"));
  CHECK(oracle_match(words_dog, "a dog"));
  CHECK(oracle_match(words_dog, "dog!"));
  CHECK_FALSE(oracle_match(words_dog, "dogs"));
  CHECK_FALSE(oracle_match(words_dog, "adog"));
}

TEST_CASE("oracle_match: De Morgan over a four-character probe set") {
  std::mt19937_64 rng(11);
  auto probes = testing::all_strings("ab1 ", 5);
  for (int i = 0; i < 40; ++i) {
    Regex x = testing::random_regex(rng, 3);
    Regex y = testing::random_regex(rng, 3);
    Regex lhs = Regex::complement(Regex::alternation({x, y}));
    Regex rhs = Regex::intersection({Regex::complement(x), Regex::complement(y)});
    for (const auto& s : probes) {
      REQUIRE_MESSAGE(oracle_match(lhs, s) == oracle_match(rhs, s), (render(lhs) + " on '" + s + "'"));
    }
  }
}

TEST_CASE("word boundary warnings") {
  CHECK(word_boundary_warnings(parse("\\b(dog)\\b")).empty());
  CHECK(word_boundary_warnings(parse("\\b([A-Z])([a-z])\\b")).empty());
  auto w = word_boundary_warnings(parse("~(\\b([A-Z])(.*)\\b)"));
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("end with a non-word") != std::string::npos);
  CHECK(word_boundary_warnings(parse("\\b(.)\\b")).size() == 2);
}

TEST_CASE("mentioned classes") {
  auto classes = mentioned_classes(parse("(dog)&(.*[0-9].*)"));
  // d, o, g singletons, digits, universe
  CHECK(classes.size() == 5);
  auto wb = mentioned_classes(parse("\\b(a)\\b"));
  CHECK(std::find(wb.begin(), wb.end(), CharSet::non_word_chars()) != wb.end());
}
