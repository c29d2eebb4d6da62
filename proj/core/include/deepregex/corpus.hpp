#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "deepregex/regex_ast.hpp"
#include "deepregex/rng.hpp"

namespace deepregex {

/// The 15 non-terminal and 6 terminal rules of the generation grammar.
enum class RuleId : int {
  And,
  Or,
  Not,
  FollowedBy,
  Contains,
  AtLeast,
  And3,
  Or3,
  AtMost,
  StartsWith,
  EndsWith,
  WordsWith,
  OnceOrMore,
  ZeroOrMore,
  Only,
  // terminals
  Vowel,
  Number,
  Word,
  Uppercase,
  Lowercase,
  Character,
};

inline constexpr int kRuleCount = 21;
inline constexpr int kNonTerminalCount = 15;

struct GrammarRule {
  RuleId id;
  std::string_view name;
  int arity;  // 0 for terminals
  /// Surface form with placeholders {x}, {y}, {z}, {N} and {w} (the word).
  std::string_view regex_template;
  /// English form with the same placeholders.
  std::string_view verbalization;
  bool takes_count;  // N is bound
};

const std::array<GrammarRule, kRuleCount>& grammar();
const GrammarRule& rule(RuleId id);
std::optional<RuleId> rule_by_name(std::string_view name);

/// 100 common lowercase nouns instantiating the `word` terminal.
const std::vector<std::string>& default_lexicon();

struct GeneratorConfig {
  std::uint64_t seed = 1;
  int max_depth = 4;
  std::array<double, kRuleCount> rule_weights = [] {
    std::array<double, kRuleCount> w{};
    w.fill(1.0);
    return w;
  }();
  int min_count = 1;
  int max_count = 9;
  std::vector<std::string> lexicon = default_lexicon();
  std::size_t target_size = 10000;

  /// Throws std::invalid_argument on a broken config.
  void validate() const;
};

struct DerivationTree {
  RuleId rule = RuleId::Character;
  std::vector<DerivationTree> children;
  int count = 0;     // N for the repetition rules
  std::string word;  // for the `word` terminal

  bool operator==(const DerivationTree&) const = default;
};

/// Sample one derivation. At depth max_depth only terminals are admissible;
/// below it the chance of a terminal grows linearly with depth. Inside a
/// `words with` subtree, `not`, nested `words with` and `.` are excluded so
/// the bounded body stays within word characters at its edges.
DerivationTree sample_derivation(const GeneratorConfig& config, Rng& rng);

Regex to_regex(const DerivationTree& tree);
std::string realize_regex(const DerivationTree& tree);
std::string realize_synthetic(const DerivationTree& tree);

struct CorpusExample {
  std::string regex;
  std::string synthetic;
  std::optional<std::string> paraphrase;

  bool operator==(const CorpusExample&) const = default;
};

using Corpus = std::vector<CorpusExample>;

class CorpusError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exactly target_size examples with pairwise-distinct regex strings.
/// Throws CorpusError if 100 x target_size draws do not suffice.
Corpus generate_corpus(const GeneratorConfig& config);

struct CorpusSplit {
  Corpus train;
  Corpus dev;
  Corpus test;
};

/// Seeded shuffle, then contiguous slices of floor(r0 n), floor(r1 n) and
/// the remainder.
CorpusSplit split_corpus(const Corpus& corpus, std::array<double, 3> ratios, std::uint64_t seed);

/// Fraction of distinct regex strings.
double unique_regex_fraction(const Corpus& corpus);

}  // namespace deepregex
