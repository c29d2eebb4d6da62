#include "doctest.h"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "deepregex/automata.hpp"
#include "deepregex/corpus.hpp"
#include "deepregex/dataset_io.hpp"
#include "random_regex.hpp"

using namespace deepregex;

namespace {

DerivationTree leaf(RuleId id, std::string word = {}) { return {id, {}, 0, std::move(word)}; }
DerivationTree node(RuleId id, std::vector<DerivationTree> kids, int count = 0) {
  return {id, std::move(kids), count, {}};
}

int placeholders(std::string_view t, std::string_view slot) {
  int n = 0;
  for (auto pos = t.find(slot); pos != std::string_view::npos; pos = t.find(slot, pos + 1)) ++n;
  return n;
}

void count_rules(const DerivationTree& t, std::map<RuleId, int>& seen) {
  ++seen[t.rule];
  for (const auto& c : t.children) count_rules(c, seen);
}

bool digit(char c) { return c >= '0' && c <= '9'; }
bool vowel(char c) { return std::string_view("AEIOUaeiou").find(c) != std::string_view::npos; }
bool upper(char c) { return c >= 'A' && c <= 'Z'; }
bool lower(char c) { return c >= 'a' && c <= 'z'; }
bool word_char(char c) { return digit(c) || upper(c) || lower(c) || c == '_'; }
bool any_of(const std::string& s, bool (*p)(char)) { return std::any_of(s.begin(), s.end(), p); }
bool all_of(const std::string& s, bool (*p)(char)) { return std::all_of(s.begin(), s.end(), p); }

struct RuleCase {
  DerivationTree tree;
  std::function<bool(const std::string&)> intended;
};

// One instance per grammar rule, each paired with a hand-written membership
// predicate that does not go through the regex machinery.
std::vector<RuleCase> rule_cases() {
  auto num = leaf(RuleId::Number);
  auto vow = leaf(RuleId::Vowel);
  auto cap = leaf(RuleId::Uppercase);
  auto contains = [](DerivationTree x) { return node(RuleId::Contains, {std::move(x)}); };
  return {
      {node(RuleId::And, {contains(num), contains(vow)}),
       [](const std::string& s) { return any_of(s, digit) && any_of(s, vowel); }},
      {node(RuleId::Or, {num, vow}), [](const std::string& s) { return s.size() == 1 && (digit(s[0]) || vowel(s[0])); }},
      {node(RuleId::Not, {contains(num)}), [](const std::string& s) { return !any_of(s, digit); }},
      {node(RuleId::FollowedBy, {num, vow}),
       [](const std::string& s) {
         return !s.empty() && vowel(s.back()) && std::any_of(s.begin(), s.end() - 1, digit);
       }},
      {contains(num), [](const std::string& s) { return any_of(s, digit); }},
      {node(RuleId::AtLeast, {num}, 2), [](const std::string& s) { return s.size() >= 2 && all_of(s, digit); }},
      {node(RuleId::And3, {contains(num), contains(vow), contains(cap)}),
       [](const std::string& s) { return any_of(s, digit) && any_of(s, vowel) && any_of(s, upper); }},
      {node(RuleId::Or3, {num, vow, cap}),
       [](const std::string& s) { return s.size() == 1 && (digit(s[0]) || vowel(s[0]) || upper(s[0])); }},
      {node(RuleId::AtMost, {num}, 2),
       [](const std::string& s) { return !s.empty() && s.size() <= 2 && all_of(s, digit); }},
      {node(RuleId::StartsWith, {cap}), [](const std::string& s) { return !s.empty() && upper(s[0]); }},
      {node(RuleId::EndsWith, {vow}), [](const std::string& s) { return !s.empty() && vowel(s.back()); }},
      {node(RuleId::WordsWith, {leaf(RuleId::Word, "ab")}),
       [](const std::string& s) {
         for (std::size_t i = 0; i + 2 <= s.size(); ++i) {
           if (s.compare(i, 2, "ab") != 0) continue;
           bool left = i == 0 || !word_char(s[i - 1]);
           bool right = i + 2 == s.size() || !word_char(s[i + 2]);
           if (left && right) return true;
         }
         return false;
       }},
      {node(RuleId::OnceOrMore, {num}), [](const std::string& s) { return !s.empty() && all_of(s, digit); }},
      {node(RuleId::ZeroOrMore, {num}), [](const std::string& s) { return all_of(s, digit); }},
      {node(RuleId::Only, {vow}), [](const std::string& s) { return s.size() == 1 && vowel(s[0]); }},
      {vow, [](const std::string& s) { return s.size() == 1 && vowel(s[0]); }},
      {num, [](const std::string& s) { return s.size() == 1 && digit(s[0]); }},
      {leaf(RuleId::Word, "ab"), [](const std::string& s) { return s == "ab"; }},
      {cap, [](const std::string& s) { return s.size() == 1 && upper(s[0]); }},
      {leaf(RuleId::Lowercase), [](const std::string& s) { return s.size() == 1 && lower(s[0]); }},
      {leaf(RuleId::Character), [](const std::string& s) { return s.size() == 1; }},
  };
}

GeneratorConfig small_config(std::size_t size, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.target_size = size;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("grammar table shape") {
  const auto& g = grammar();
  int nonterminals = 0;
  int terminals = 0;
  for (int i = 0; i < kRuleCount; ++i) {
    const auto& r = g[static_cast<std::size_t>(i)];
    CHECK(static_cast<int>(r.id) == i);
    (r.arity == 0 ? terminals : nonterminals)++;
    for (std::string_view slot : {"{x}", "{y}", "{z}"}) {
      int k = static_cast<int>(slot[1] - 'x');
      bool used = k < r.arity;
      CHECK(placeholders(r.regex_template, slot) == (used ? 1 : 0));
      CHECK(placeholders(r.verbalization, slot) == (used ? 1 : 0));
    }
    CHECK(placeholders(r.regex_template, "{N}") == (r.takes_count ? 1 : 0));
    CHECK(placeholders(r.verbalization, "{N}") == (r.takes_count ? 1 : 0));
    CHECK(rule_by_name(r.name) == r.id);
  }
  CHECK(nonterminals == 15);
  CHECK(terminals == 6);
  CHECK_FALSE(rule_by_name("nope").has_value());
}

TEST_CASE("default lexicon: 100 distinct lowercase words") {
  const auto& lex = default_lexicon();
  CHECK(lex.size() == 100);
  CHECK(std::set<std::string>(lex.begin(), lex.end()).size() == 100);
  for (const auto& w : lex) CHECK(all_of(w, lower));
}

TEST_CASE("config validation") {
  GeneratorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_depth = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.rule_weights[3] = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.lexicon.clear();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.lexicon = {"Dog"};
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.min_count = 3;
  cfg.max_count = 2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("realization examples") {
  CHECK(realize_regex(leaf(RuleId::Number)) == "[0-9]");
  auto contains_vowel = node(RuleId::Contains, {leaf(RuleId::Vowel)});
  CHECK(realize_regex(contains_vowel) == ".*[AEIOUaeiou].*");
  CHECK(realize_synthetic(node(RuleId::Contains, {leaf(RuleId::Number)})) == "lines containing a number");

  auto golden = node(RuleId::Not, {node(RuleId::WordsWith, {node(RuleId::StartsWith, {leaf(RuleId::Uppercase)})})});
  CHECK(realize_regex(golden) == "~(\\b([A-Z])(.*)\\b)");
  CHECK(realize_synthetic(golden) == "lines not words with starting with a capital letter");

  auto both = node(RuleId::And, {leaf(RuleId::Vowel), leaf(RuleId::Word, "dog")});
  CHECK(realize_synthetic(both) == "lines a vowel and the string 'dog'");
  CHECK(realize_regex(both) == "([AEIOUaeiou])&(dog)");
  CHECK(realize_synthetic(node(RuleId::AtLeast, {leaf(RuleId::Number)}, 3)) == "lines a number, 3 or more times");
  CHECK(realize_regex(node(RuleId::AtMost, {leaf(RuleId::Number)}, 4)) == "[0-9]{1,4}");
}

TEST_CASE("sampling: depth bound and determinism") {
  GeneratorConfig cfg;
  cfg.max_depth = 1;
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    auto t = sample_derivation(cfg, rng);
    CHECK(t.children.empty());
    CHECK(static_cast<int>(t.rule) >= kNonTerminalCount);
  }
  GeneratorConfig deflt;
  Rng a(99), b(99);
  for (int i = 0; i < 50; ++i) CHECK(sample_derivation(deflt, a) == sample_derivation(deflt, b));
}

TEST_CASE("sampling: tree invariants and rule coverage over 10000 draws") {
  GeneratorConfig cfg;
  Rng rng(2017);
  std::map<RuleId, int> seen;
  std::function<void(const DerivationTree&, int, bool)> check = [&](const DerivationTree& t, int depth, bool in_word) {
    const auto& r = rule(t.rule);
    REQUIRE(static_cast<int>(t.children.size()) == r.arity);
    CHECK(depth <= cfg.max_depth);
    if (r.takes_count) CHECK((t.count >= cfg.min_count && t.count <= cfg.max_count));
    if (t.rule == RuleId::Word) {
      CHECK(std::find(cfg.lexicon.begin(), cfg.lexicon.end(), t.word) != cfg.lexicon.end());
    }
    if (in_word) {
      CHECK(t.rule != RuleId::Not);
      CHECK(t.rule != RuleId::WordsWith);
      CHECK(t.rule != RuleId::Character);
    }
    for (const auto& c : t.children) check(c, depth + 1, in_word || t.rule == RuleId::WordsWith);
  };
  for (int i = 0; i < 10000; ++i) {
    auto t = sample_derivation(cfg, rng);
    check(t, 1, false);
    count_rules(t, seen);
  }
  CHECK(seen.size() == static_cast<std::size_t>(kRuleCount));
}

TEST_CASE("semantic faithfulness of every rule") {
  auto cases = rule_cases();
  std::set<RuleId> covered;
  auto probes = testing::all_strings("aE1bB ", 5);
  for (const auto& rc : cases) {
    covered.insert(rc.tree.rule);
    std::string text = realize_regex(rc.tree);
    Regex ast = parse(text);
    CHECK(ast == to_regex(rc.tree));
    auto classes = mentioned_classes(ast);
    Alphabet alphabet = minterm_alphabet(classes);
    Dfa dfa = compile_dfa(ast, alphabet);
    for (const auto& s : probes) {
      bool want = rc.intended(s);
      REQUIRE_MESSAGE(oracle_match(ast, s) == want, (text + " on '" + s + "'"));
      REQUIRE_MESSAGE(accepts(dfa, alphabet, s) == want, (text + " on '" + s + "'"));
    }
  }
  CHECK(covered.size() == static_cast<std::size_t>(kRuleCount));
}

TEST_CASE("generated regexes parse and re-render identically") {
  GeneratorConfig cfg;
  Rng rng(314);
  for (int i = 0; i < 1000; ++i) {
    auto t = sample_derivation(cfg, rng);
    std::string text = realize_regex(t);
    Regex back = parse(text);
    REQUIRE_MESSAGE(back == to_regex(t), text);
    CHECK(render(back) == text);
    CHECK(realize_synthetic(t).rfind("lines ", 0) == 0);
  }
}

TEST_CASE("generate_corpus") {
  auto one = generate_corpus(small_config(1, 3));
  REQUIRE(one.size() == 1);
  CHECK_NOTHROW(parse(one[0].regex));
  CHECK(!one[0].synthetic.empty());
  CHECK_FALSE(one[0].paraphrase.has_value());

  auto c = generate_corpus(small_config(2000, 11));
  CHECK(c.size() == 2000);
  CHECK(unique_regex_fraction(c) == 1.0);
  CHECK(generate_corpus(small_config(2000, 11)) == c);

  auto other = generate_corpus(small_config(10, 12));
  int differing = 0;
  for (int i = 0; i < 10; ++i) differing += other[static_cast<std::size_t>(i)] != c[static_cast<std::size_t>(i)];
  CHECK(differing == 10);

  GeneratorConfig tiny = small_config(10, 1);
  tiny.max_depth = 1;
  tiny.lexicon = {"dog"};
  CHECK_THROWS_AS(generate_corpus(tiny), CorpusError);  // only 6 distinct regexes exist
}

TEST_CASE("split_corpus") {
  Corpus c;
  for (int i = 0; i < 10000; ++i) c.push_back({"r" + std::to_string(i), "s", std::nullopt});
  auto s = split_corpus(c, {0.65, 0.10, 0.25}, 4);
  CHECK(s.train.size() == 6500);
  CHECK(s.dev.size() == 1000);
  CHECK(s.test.size() == 2500);
  std::set<std::string> all;
  for (const auto* part : {&s.train, &s.dev, &s.test})
    for (const auto& ex : *part) all.insert(ex.regex);
  CHECK(all.size() == 10000);

  auto again = split_corpus(c, {0.65, 0.10, 0.25}, 4);
  CHECK(again.train == s.train);
  CHECK(again.test == s.test);
  CHECK(split_corpus(c, {0.65, 0.10, 0.25}, 5).train != s.train);

  Corpus twenty(c.begin(), c.begin() + 20);
  auto small = split_corpus(twenty, {0.65, 0.10, 0.25}, 1);
  CHECK(small.train.size() == 13);
  CHECK(small.dev.size() == 2);
  CHECK(small.test.size() == 5);

  CHECK_THROWS_AS(split_corpus(c, {0.6, 0.1, 0.1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(split_corpus(c, {1.2, -0.1, -0.1}, 1), std::invalid_argument);
}

TEST_CASE("dataset io: round trip and record layout") {
  Corpus c = generate_corpus(small_config(200, 8));
  c[3].paraphrase = "lines with \"quotes\" and a tab\t";
  std::stringstream buf;
  write_corpus(buf, c, std::string(R"({"seed":8,"version":"x"})"));
  std::string text = buf.str();
  CHECK(text.rfind(R"({"provenance":{"seed":8,"version":"x"}})", 0) == 0);
  std::stringstream in(text);
  CHECK(read_corpus(in) == c);

  std::stringstream one;
  write_corpus(one, {{"~(\\b([A-Z])(.*)\\b)", "lines not words with starting with a capital letter", std::nullopt}});
  CHECK(one.str() ==
        "{\"regex\":\"~(\\\\b([A-Z])(.*)\\\\b)\",\"synthetic\":\"lines not words with starting with a capital "
        "letter\",\"paraphrase\":null}\n");
}

TEST_CASE("dataset io: errors cite line numbers") {
  std::string good = R"({"regex":"a","synthetic":"lines the string 'a'","paraphrase":null})";
  std::string text;
  for (int i = 0; i < 6; ++i) text += good + "\n";
  text += R"({"regex":"a\q","synthetic":"x","paraphrase":null})" "\n";
  std::stringstream in(text);
  try {
    read_corpus(in, "data.jsonl");
    FAIL("expected an error");
  } catch (const DatasetError& e) {
    CHECK(e.line() == 7);
    CHECK(std::string(e.what()).find("data.jsonl: line 7") != std::string::npos);
  }

  std::stringstream missing(good + "\n" + R"({"regex":"a"})" + "\n");
  CHECK_THROWS_WITH_AS(read_corpus(missing), doctest::Contains("line 2"), DatasetError);
  std::stringstream wrong_type(R"({"regex":1,"synthetic":"s"})");
  CHECK_THROWS_AS(read_corpus(wrong_type), DatasetError);
}

TEST_CASE("dataset io: KB13 import") {
  std::stringstream in("lines with a vowel\t.*[AEIOUaeiou].*\r\n\nlines that say dog\tdog\n");
  auto c = read_kb13(in);
  REQUIRE(c.size() == 2);
  CHECK(c[0].synthetic == "lines with a vowel");
  CHECK(c[0].regex == ".*[AEIOUaeiou].*");
  CHECK(c[1].regex == "dog");
  std::stringstream bad("ok\tdog\nno tab here\n");
  try {
    read_kb13(bad);
    FAIL("expected an error");
  } catch (const DatasetError& e) {
    CHECK(e.line() == 2);
  }
}
