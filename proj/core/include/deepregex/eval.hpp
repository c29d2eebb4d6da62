#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deepregex/corpus.hpp"
#include "deepregex/seq2seq.hpp"

namespace deepregex {

/// Byte equality after trimming surrounding whitespace.
bool string_equal(std::string_view predicted, std::string_view gold);

struct EvalOptions {
  double budget_seconds = 5.0;  // per pair
  std::size_t max_states = 1'000'000;
};

struct EvalRow {
  std::string gold;
  std::string predicted;
  bool string_equal = false;
  bool dfa_equal = false;
  std::string note;  // parse error, timeout, ...
};

struct EvalReport {
  std::string dataset;
  std::string model;
  std::vector<EvalRow> rows;
  double string_equal_accuracy = 0;  // percent
  double dfa_equal_accuracy = 0;     // percent
};

/// Scores aligned predictions. Unparseable predictions and DFA budget
/// overruns score false with a note; a string match is always a DFA match.
/// Throws std::invalid_argument on a length mismatch.
EvalReport evaluate(std::span<const std::string> predictions, std::span<const std::string> golds,
                    const EvalOptions& options = {});

/// One decimal, e.g. "88.7".
std::string format_percent(double value);

struct LearningCurveRow {
  std::size_t train_size = 0;
  double string_equal = 0;  // percent
  double dfa_equal = 0;     // percent
  int best_epoch = 0;
  std::string error;  // non-empty if this size failed
};

/// Called after each size completes.
using CurveProgress = std::function<void(const LearningCurveRow&)>;

/// For each size, trains a fresh model (same seed) on the first `size`
/// examples of split.train, selects on split.dev, and scores greedy
/// predictions on split.test. A failing size is recorded and the rest
/// still run. Sizes must ascend and not exceed the train split.
std::vector<LearningCurveRow> learning_curve(const CorpusSplit& split, std::span<const std::size_t> sizes,
                                             const ModelConfig& model, const TrainConfig& train,
                                             const EvalOptions& options = {}, const CurveProgress& progress = {});

}  // namespace deepregex
