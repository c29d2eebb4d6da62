#include "doctest.h"

#include "deepregex/eval.hpp"
#include "deepregex/model.hpp"

using namespace deepregex;

TEST_CASE("string_equal") {
  CHECK(string_equal("(a|b)", "(a|b)"));
  CHECK_FALSE(string_equal("(a|b)", "(b|a)"));
  CHECK(string_equal("a ", "a"));
  CHECK(string_equal("\ta\n", " a"));
  CHECK_FALSE(string_equal("a b", "ab"));
}

TEST_CASE("evaluate: examples") {
  std::vector<std::string> golds{"(a|b)", "[0-9]{2,}", ".*dog.*", "(a)&(b)"};
  auto same = evaluate(golds, golds);
  CHECK(same.string_equal_accuracy == 100.0);
  CHECK(same.dfa_equal_accuracy == 100.0);

  std::vector<std::string> preds{"(b|a)", "((", ".*dog.*", "~(.*)"};
  auto r = evaluate(preds, golds);
  REQUIRE(r.rows.size() == 4);
  CHECK_FALSE(r.rows[0].string_equal);
  CHECK(r.rows[0].dfa_equal);
  CHECK_FALSE(r.rows[1].string_equal);
  CHECK_FALSE(r.rows[1].dfa_equal);
  CHECK(r.rows[1].note.find("does not parse") != std::string::npos);
  CHECK(r.rows[2].string_equal);
  CHECK(r.rows[2].dfa_equal);
  // (a)&(b) and ~(.*) are both empty
  CHECK(r.rows[3].dfa_equal);
  CHECK(r.string_equal_accuracy == 25.0);
  CHECK(r.dfa_equal_accuracy == 75.0);
  CHECK(format_percent(r.dfa_equal_accuracy) == "75.0");
  CHECK(format_percent(88.66) == "88.7");

  CHECK_THROWS_AS(evaluate(std::vector<std::string>{"a"}, golds), std::invalid_argument);
}

TEST_CASE("evaluate: budget overruns and bad golds never abort") {
  EvalOptions tight;
  tight.max_states = 1;
  std::vector<std::string> preds{"(.*a.*)&(.*b.*)", "a"};
  std::vector<std::string> golds{"(.*b.*)&(.*a.*)", "(("};
  auto r = evaluate(preds, golds, tight);
  CHECK_FALSE(r.rows[0].dfa_equal);
  CHECK(r.rows[0].note.find("budget") != std::string::npos);
  CHECK_FALSE(r.rows[1].dfa_equal);
  CHECK(r.rows[1].note.find("gold does not parse") != std::string::npos);
}

TEST_CASE("evaluate: row invariants over generated data") {
  GeneratorConfig g;
  g.target_size = 150;
  g.seed = 21;
  Corpus golds_c = generate_corpus(g);
  g.seed = 22;
  Corpus other = generate_corpus(g);
  std::vector<std::string> golds, preds;
  for (std::size_t k = 0; k < golds_c.size(); ++k) {
    golds.push_back(golds_c[k].regex);
    // a mix of exact copies, reparenthesized equivalents and unrelated regexes
    if (k % 3 == 0) preds.push_back(golds_c[k].regex);
    else if (k % 3 == 1) preds.push_back("(" + golds_c[k].regex + ")|(" + golds_c[k].regex + ")");
    else preds.push_back(other[k].regex);
  }
  auto a = evaluate(preds, golds);
  auto b = evaluate(preds, golds);
  std::size_t se = 0, de = 0;
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    const auto& row = a.rows[k];
    CHECK((!row.string_equal || row.dfa_equal));
    if (k % 3 != 2) CHECK(row.dfa_equal);
    CHECK(row.dfa_equal == b.rows[k].dfa_equal);
    se += row.string_equal;
    de += row.dfa_equal;
  }
  CHECK(a.string_equal_accuracy == 100.0 * static_cast<double>(se) / 150.0);
  CHECK(a.dfa_equal_accuracy == 100.0 * static_cast<double>(de) / 150.0);
}

TEST_CASE("learning_curve: shape and error handling") {
  GeneratorConfig g;
  g.target_size = 200;
  g.seed = 3;
  CorpusSplit split = split_corpus(generate_corpus(g), {0.65, 0.10, 0.25}, 3);
  ModelConfig mc;
  mc.embed = 8;
  mc.hidden = 8;
  mc.max_decode_len = 40;
  TrainConfig tc;
  tc.epochs = 1;
  std::vector<std::size_t> sizes{100};
  int seen = 0;
  auto rows = learning_curve(split, sizes, mc, tc, {}, [&](const LearningCurveRow&) { ++seen; });
  REQUIRE(rows.size() == 1);
  CHECK(seen == 1);
  CHECK(rows[0].train_size == 100);
  CHECK(rows[0].error.empty());
  CHECK(rows[0].dfa_equal >= rows[0].string_equal);

  std::vector<std::size_t> two{50, 100};
  TrainConfig broken = tc;
  broken.decay = 2;
  auto failed = learning_curve(split, two, mc, broken);
  REQUIRE(failed.size() == 2);
  CHECK_FALSE(failed[0].error.empty());
  CHECK_FALSE(failed[1].error.empty());

  std::vector<std::size_t> descending{100, 50};
  CHECK_THROWS_AS(learning_curve(split, descending, mc, tc), std::invalid_argument);
  std::vector<std::size_t> too_big{1000};
  CHECK_THROWS_AS(learning_curve(split, too_big, mc, tc), std::invalid_argument);
}

TEST_CASE("fit and predict") {
  Corpus data{{"[0-9]", "lines a number", std::nullopt}, {"dog", "lines the string 'dog'", std::nullopt}};
  ModelConfig mc;
  mc.embed = 16;
  mc.hidden = 32;
  mc.dropout = 0;
  TrainConfig tc;
  tc.epochs = 200;
  tc.batch = 2;
  Checkpoint ck = fit(data, data, mc, tc);
  CHECK(ck.params.config.src_vocab == ck.source.size());
  CHECK(ck.history.size() == 200);
  CHECK(predict(ck, "lines a number") == "[0-9]");
  CHECK(predict(ck, "lines the string 'dog'") == "dog");
  CHECK(source_ids(ck.source, "   ") == std::vector<int>{Vocab::kUnk});
}
