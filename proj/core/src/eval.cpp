#include "deepregex/eval.hpp"

#include <chrono>
#include <cstdio>
#include <stdexcept>

#include "deepregex/automata.hpp"
#include "deepregex/model.hpp"

namespace deepregex {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

EvalRow score(const std::string& predicted, const std::string& gold, const EvalOptions& options) {
  EvalRow row{gold, predicted, false, false, {}};
  std::string_view p = trim(predicted);
  std::string_view g = trim(gold);
  try {
    parse(p);
  } catch (const RegexError& e) {
    row.note = std::string("prediction does not parse: ") + e.what();
    return row;
  }
  row.string_equal = p == g;
  if (row.string_equal) {
    row.dfa_equal = true;
    return row;
  }
  Budget budget = Budget::within(std::chrono::milliseconds(static_cast<long long>(options.budget_seconds * 1000)));
  budget.max_states = options.max_states;
  try {
    row.dfa_equal = check_equivalence(p, g, budget).equal;
  } catch (const DfaEqualParseError& e) {
    row.note = std::string("gold does not parse: ") + e.what();
  } catch (const BudgetExceededError& e) {
    row.note = std::string("dfa budget exceeded: ") + e.what();
  }
  return row;
}

double percent(std::size_t hits, std::size_t n) {
  return n == 0 ? 0.0 : 100.0 * static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace

bool string_equal(std::string_view predicted, std::string_view gold) { return trim(predicted) == trim(gold); }

EvalReport evaluate(std::span<const std::string> predictions, std::span<const std::string> golds,
                    const EvalOptions& options) {
  if (predictions.size() != golds.size()) {
    throw std::invalid_argument("got " + std::to_string(predictions.size()) + " predictions for " +
                                std::to_string(golds.size()) + " gold regexes");
  }
  EvalReport report;
  std::size_t se = 0;
  std::size_t de = 0;
  for (std::size_t k = 0; k < golds.size(); ++k) {
    report.rows.push_back(score(predictions[k], golds[k], options));
    se += report.rows.back().string_equal;
    de += report.rows.back().dfa_equal;
  }
  report.string_equal_accuracy = percent(se, golds.size());
  report.dfa_equal_accuracy = percent(de, golds.size());
  return report;
}

std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", value);
  return buf;
}

std::vector<LearningCurveRow> learning_curve(const CorpusSplit& split, std::span<const std::size_t> sizes,
                                             const ModelConfig& model, const TrainConfig& train,
                                             const EvalOptions& options, const CurveProgress& progress) {
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] == 0 || sizes[k] > split.train.size()) {
      throw std::invalid_argument("train size " + std::to_string(sizes[k]) + " outside 1.." +
                                  std::to_string(split.train.size()));
    }
    if (k > 0 && sizes[k] <= sizes[k - 1]) throw std::invalid_argument("train sizes must ascend");
  }
  std::vector<std::string> descriptions;
  std::vector<std::string> golds;
  for (const auto& ex : split.test) {
    descriptions.push_back(ex.synthetic);
    golds.push_back(ex.regex);
  }
  std::vector<LearningCurveRow> rows;
  for (std::size_t size : sizes) {
    LearningCurveRow row;
    row.train_size = size;
    try {
      Corpus prefix(split.train.begin(), split.train.begin() + static_cast<std::ptrdiff_t>(size));
      Checkpoint ck = fit(prefix, split.dev, model, train);
      EvalReport report = evaluate(predict(ck, descriptions), golds, options);
      row.string_equal = report.string_equal_accuracy;
      row.dfa_equal = report.dfa_equal_accuracy;
      row.best_epoch = ck.best_epoch;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(row);
    if (progress) progress(row);
  }
  return rows;
}

}  // namespace deepregex
