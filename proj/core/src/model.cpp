#include "deepregex/model.hpp"

namespace deepregex {

namespace {

std::vector<Example> to_examples(const Corpus& corpus, const Vocab& source, const Vocab& target) {
  std::vector<Example> out;
  out.reserve(corpus.size());
  for (const auto& ex : corpus) out.push_back({source_ids(source, ex.synthetic), target.encode_chars(ex.regex)});
  return out;
}

}  // namespace

std::vector<int> source_ids(const Vocab& source, std::string_view description) {
  std::vector<int> ids = source.encode_words(description);
  if (ids.empty()) ids.push_back(Vocab::kUnk);
  return ids;
}

Checkpoint fit(const Corpus& train_set, const Corpus& dev_set, ModelConfig model_config,
               const TrainConfig& train_config, const EpochCallback& on_epoch) {
  Checkpoint ck;
  ck.source = Vocab::source_from(train_set);
  ck.target = Vocab::target_from(train_set);
  model_config.src_vocab = ck.source.size();
  model_config.tgt_vocab = ck.target.size();
  // Parameter init draws from a stream distinct from the shuffling/dropout one.
  Rng init(train_config.seed ^ 0x9E3779B97F4A7C15ULL);
  auto params = ModelParams<float>::uniform(model_config, init);
  auto train_ex = to_examples(train_set, ck.source, ck.target);
  auto dev_ex = to_examples(dev_set, ck.source, ck.target);
  TrainResult result = train(std::move(params), train_ex, dev_ex, train_config, on_epoch);
  ck.train = train_config;
  ck.params = std::move(result.best);
  ck.best_epoch = result.best_epoch;
  ck.history = std::move(result.history);
  return ck;
}

std::string predict(const Checkpoint& model, std::string_view description) {
  auto ids = source_ids(model.source, description);
  DecodeResult r = translate(model.params, std::span<const int>(ids), model.params.config.max_decode_len);
  return model.target.decode_chars(r.ids);
}

std::vector<std::string> predict(const Checkpoint& model, const std::vector<std::string>& descriptions) {
  std::vector<std::string> out;
  out.reserve(descriptions.size());
  for (const auto& d : descriptions) out.push_back(predict(model, d));
  return out;
}

}  // namespace deepregex
