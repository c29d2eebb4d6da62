#pragma once

#include <string>
#include <vector>

#include "deepregex/checkpoint.hpp"
#include "deepregex/corpus.hpp"

namespace deepregex {

/// Source ids of a description; a description without tokens becomes [unk].
std::vector<int> source_ids(const Vocab& source, std::string_view description);

/// Builds both vocabularies from `train`, initializes parameters from
/// train_config.seed and trains. model_config's vocabulary sizes are filled in.
Checkpoint fit(const Corpus& train, const Corpus& dev, ModelConfig model_config, const TrainConfig& train_config,
               const EpochCallback& on_epoch = {});

/// Greedy decode of each description, up to the model's max_decode_len.
std::string predict(const Checkpoint& model, std::string_view description);
std::vector<std::string> predict(const Checkpoint& model, const std::vector<std::string>& descriptions);

}  // namespace deepregex
