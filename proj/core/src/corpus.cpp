#include "deepregex/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace deepregex {

namespace {

constexpr std::array<GrammarRule, kRuleCount> kGrammar{{
    {RuleId::And, "and", 2, "{x}&{y}", "{x} and {y}", false},
    {RuleId::Or, "or", 2, "{x}|{y}", "{x} or {y}", false},
    {RuleId::Not, "not", 1, "~({x})", "not {x}", false},
    {RuleId::FollowedBy, "followed_by", 2, ".*{x}.*{y}", "{x} followed by {y}", false},
    {RuleId::Contains, "contains", 1, ".*{x}.*", "containing {x}", false},
    {RuleId::AtLeast, "at_least", 1, "{x}{{N},}", "{x}, {N} or more times", true},
    {RuleId::And3, "and3", 3, "{x}&{y}&{z}", "{x} and {y} and {z}", false},
    {RuleId::Or3, "or3", 3, "{x}|{y}|{z}", "{x} or {y} or {z}", false},
    {RuleId::AtMost, "at_most", 1, "{x}{1,{N}}", "{x}, at most {N} times", true},
    {RuleId::StartsWith, "starts_with", 1, "{x}.*", "starting with {x}", false},
    {RuleId::EndsWith, "ends_with", 1, ".*{x}", "ending with {x}", false},
    {RuleId::WordsWith, "words_with", 1, "\\b{x}\\b", "words with {x}", false},
    {RuleId::OnceOrMore, "once_or_more", 1, "({x})+", "{x}, at least once", false},
    {RuleId::ZeroOrMore, "zero_or_more", 1, "({x})*", "{x}, zero or more times", false},
    {RuleId::Only, "only", 1, "{x}", "only {x}", false},
    {RuleId::Vowel, "vowel", 0, "[AEIOUaeiou]", "a vowel", false},
    {RuleId::Number, "number", 0, "[0-9]", "a number", false},
    {RuleId::Word, "word", 0, "{w}", "the string '{w}'", false},
    {RuleId::Uppercase, "uppercase", 0, "[A-Z]", "a capital letter", false},
    {RuleId::Lowercase, "lowercase", 0, "[a-z]", "a lowercase letter", false},
    {RuleId::Character, "character", 0, ".", "a character", false},
}};

bool is_terminal(RuleId id) { return static_cast<int>(id) >= kNonTerminalCount; }

bool allowed_in_word(RuleId id) {
  return id != RuleId::Not && id != RuleId::WordsWith && id != RuleId::Character;
}

DerivationTree sample(const GeneratorConfig& cfg, Rng& rng, int depth, bool in_word) {
  // Terminal probability rises linearly from 0 at the root to 1 at max_depth.
  double p_terminal =
      cfg.max_depth <= 1 ? 1.0 : static_cast<double>(depth - 1) / static_cast<double>(cfg.max_depth - 1);
  bool terminal = depth >= cfg.max_depth || rng.uniform() < p_terminal;

  double total = 0;
  for (const auto& r : kGrammar) {
    if (is_terminal(r.id) != terminal || (in_word && !allowed_in_word(r.id))) continue;
    total += cfg.rule_weights[static_cast<int>(r.id)];
  }
  double pick = rng.uniform() * total;
  const GrammarRule* chosen = nullptr;
  for (const auto& r : kGrammar) {
    if (is_terminal(r.id) != terminal || (in_word && !allowed_in_word(r.id))) continue;
    chosen = &r;
    pick -= cfg.rule_weights[static_cast<int>(r.id)];
    if (pick < 0) break;
  }

  DerivationTree t;
  t.rule = chosen->id;
  if (chosen->takes_count) {
    t.count = cfg.min_count + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.max_count - cfg.min_count + 1)));
  }
  if (chosen->id == RuleId::Word) t.word = cfg.lexicon[rng.below(cfg.lexicon.size())];
  bool child_in_word = in_word || chosen->id == RuleId::WordsWith;
  for (int k = 0; k < chosen->arity; ++k) t.children.push_back(sample(cfg, rng, depth + 1, child_in_word));
  return t;
}

std::string substitute(std::string_view templ, const std::vector<std::string>& args, int count) {
  std::string out;
  for (std::size_t i = 0; i < templ.size(); ++i) {
    if (templ[i] == '{' && i + 2 < templ.size() && templ[i + 2] == '}') {
      char slot = templ[i + 1];
      if (slot >= 'x' && slot <= 'z' && static_cast<std::size_t>(slot - 'x') < args.size()) {
        out += args[static_cast<std::size_t>(slot - 'x')];
        i += 2;
        continue;
      }
      if (slot == 'N') {
        out += std::to_string(count);
        i += 2;
        continue;
      }
    }
    out.push_back(templ[i]);
  }
  return out;
}

std::string verbalize(const DerivationTree& t) {
  const GrammarRule& r = rule(t.rule);
  if (t.rule == RuleId::Word) {
    std::string out(r.verbalization);
    out.replace(out.find("{w}"), 3, t.word);
    return out;
  }
  std::vector<std::string> args;
  for (const auto& c : t.children) args.push_back(verbalize(c));
  return substitute(r.verbalization, args, t.count);
}

}  // namespace

const std::array<GrammarRule, kRuleCount>& grammar() { return kGrammar; }

const GrammarRule& rule(RuleId id) { return kGrammar[static_cast<int>(id)]; }

std::optional<RuleId> rule_by_name(std::string_view name) {
  for (const auto& r : kGrammar)
    if (r.name == name) return r.id;
  return std::nullopt;
}

const std::vector<std::string>& default_lexicon() {
  static const std::vector<std::string> words{
      "dog",    "truck",  "ring",   "lake",   "house",  "tree",   "car",    "book",   "water",  "fire",
      "bird",   "fish",   "apple",  "table",  "chair",  "door",   "window", "road",   "city",   "river",
      "stone",  "cloud",  "rain",   "snow",   "wind",   "sun",    "moon",   "star",   "hand",   "head",
      "eye",    "face",   "heart",  "mind",   "king",   "queen",  "child",  "friend", "family", "school",
      "money",  "paper",  "letter", "phone",  "music",  "song",   "game",   "ball",   "horse",  "cat",
      "mouse",  "bread",  "milk",   "salt",   "sugar",  "glass",  "box",    "bag",    "shoe",   "hat",
      "shirt",  "coat",   "bed",    "room",   "floor",  "wall",   "garden", "field",  "farm",   "hill",
      "island", "ocean",  "ship",   "boat",   "train",  "plane",  "bike",   "street", "bridge", "tower",
      "church", "market", "shop",   "bank",   "office", "doctor", "nurse",  "worker", "garage", "story",
      "word",   "name",   "number", "line",   "page",   "picture", "color", "light",  "night",  "day",
  };
  return words;
}

void GeneratorConfig::validate() const {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  for (double w : rule_weights)
    if (!(w > 0) || !std::isfinite(w)) throw std::invalid_argument("rule weights must be positive and finite");
  if (min_count < 1 || max_count < min_count) throw std::invalid_argument("repetition range must satisfy 1 <= min <= max");
  if (lexicon.empty()) throw std::invalid_argument("lexicon must not be empty");
  for (const auto& w : lexicon) Regex::literal(w);  // throws on anything outside [a-z]+
}

DerivationTree sample_derivation(const GeneratorConfig& config, Rng& rng) { return sample(config, rng, 1, false); }

Regex to_regex(const DerivationTree& t) {
  std::vector<Regex> kids;
  for (const auto& c : t.children) kids.push_back(to_regex(c));
  auto any = [] { return Regex::any_string(); };
  switch (t.rule) {
    case RuleId::And:
    case RuleId::And3:
      return Regex::intersection(std::move(kids));
    case RuleId::Or:
    case RuleId::Or3:
      return Regex::alternation(std::move(kids));
    case RuleId::Not:
      return Regex::complement(std::move(kids[0]));
    case RuleId::FollowedBy:
      return Regex::concat({any(), std::move(kids[0]), any(), std::move(kids[1])});
    case RuleId::Contains:
      return Regex::concat({any(), std::move(kids[0]), any()});
    case RuleId::AtLeast:
      return Regex::at_least(std::move(kids[0]), t.count);
    case RuleId::AtMost:
      return Regex::at_most(std::move(kids[0]), t.count);
    case RuleId::StartsWith:
      return Regex::concat({std::move(kids[0]), any()});
    case RuleId::EndsWith:
      return Regex::concat({any(), std::move(kids[0])});
    case RuleId::WordsWith:
      return Regex::word_bounded(std::move(kids[0]));
    case RuleId::OnceOrMore:
      return Regex::plus(std::move(kids[0]));
    case RuleId::ZeroOrMore:
      return Regex::star(std::move(kids[0]));
    case RuleId::Only:
      return std::move(kids[0]);
    case RuleId::Vowel:
      return Regex::char_class(CharSet::vowels());
    case RuleId::Number:
      return Regex::char_class(CharSet::digits());
    case RuleId::Word:
      return Regex::literal(t.word);
    case RuleId::Uppercase:
      return Regex::char_class(CharSet::upper());
    case RuleId::Lowercase:
      return Regex::char_class(CharSet::lower());
    case RuleId::Character:
      return Regex::any_char();
  }
  throw std::logic_error("unknown grammar rule");
}

std::string realize_regex(const DerivationTree& tree) { return render(to_regex(tree)); }

std::string realize_synthetic(const DerivationTree& tree) { return "lines " + verbalize(tree); }

Corpus generate_corpus(const GeneratorConfig& config) {
  config.validate();
  if (config.target_size < 1) throw std::invalid_argument("target size must be >= 1");
  Rng rng(config.seed);
  Corpus out;
  out.reserve(config.target_size);
  std::unordered_set<std::string> seen;
  const std::size_t max_draws = 100 * config.target_size;
  for (std::size_t draws = 0; out.size() < config.target_size; ++draws) {
    if (draws >= max_draws) {
      throw CorpusError("could not find " + std::to_string(config.target_size) + " distinct regexes in " +
                        std::to_string(max_draws) + " draws");
    }
    DerivationTree t = sample_derivation(config, rng);
    std::string regex = realize_regex(t);
    if (!seen.insert(regex).second) continue;
    out.push_back({std::move(regex), realize_synthetic(t), std::nullopt});
  }
  return out;
}

CorpusSplit split_corpus(const Corpus& corpus, std::array<double, 3> ratios, std::uint64_t seed) {
  double sum = 0;
  for (double r : ratios) {
    if (!(r >= 0) || !std::isfinite(r)) throw std::invalid_argument("split ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split ratios must sum to 1");

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());

  const double n = static_cast<double>(corpus.size());
  // The small slack keeps e.g. 0.65 * 20 from landing just under 13.
  auto n_train = static_cast<std::size_t>(std::floor(ratios[0] * n + 1e-9));
  auto n_dev = static_cast<std::size_t>(std::floor(ratios[1] * n + 1e-9));
  n_dev = std::min(n_dev, corpus.size() - n_train);

  CorpusSplit split;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& ex = corpus[order[i]];
    if (i < n_train) {
      split.train.push_back(ex);
    } else if (i < n_train + n_dev) {
      split.dev.push_back(ex);
    } else {
      split.test.push_back(ex);
    }
  }
  return split;
}

double unique_regex_fraction(const Corpus& corpus) {
  if (corpus.empty()) return 1.0;
  std::unordered_set<std::string> seen;
  for (const auto& ex : corpus) seen.insert(ex.regex);
  return static_cast<double>(seen.size()) / static_cast<double>(corpus.size());
}

}  // namespace deepregex
