#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "deepregex/rng.hpp"

namespace deepregex {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

struct ModelConfig {
  int src_vocab = 0;
  int tgt_vocab = 0;
  int embed = 128;
  int hidden = 128;
  int layers = 2;  // per side
  double dropout = 0.25;
  int max_decode_len = 200;

  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

struct TrainConfig {
  int epochs = 20;
  int batch = 32;
  double lr = 1.0;
  double decay = 0.5;
  double clip = 5.0;
  std::uint64_t seed = 1;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

class ShapeError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class TrainingDivergedError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One LSTM layer. The four gates are stacked row-wise in the order
/// i, f, o, z: rows [k*H, (k+1)*H) of U, V and b belong to gate k.
template <typename S>
struct LstmParams {
  Mat<S> U;  // 4H x input
  Mat<S> V;  // 4H x H
  Mat<S> b;  // 4H x 1

  Eigen::Index hidden() const { return V.cols(); }
  Eigen::Index input() const { return U.cols(); }
};

/// A named parameter tensor: a row block of one storage matrix.
struct TensorSlot {
  std::string name;
  int matrix;
  Eigen::Index row;
  Eigen::Index rows;
  Eigen::Index cols;
};

/// Named tensors in canonical order: src_embed, tgt_embed, then per layer
/// (enc1.., dec1..) U_i V_i b_i U_f V_f b_f U_o V_o b_o U_z V_z b_z, then
/// attn.W_a, out.W, out.b.
std::vector<TensorSlot> tensor_layout(const ModelConfig& config);

template <typename S>
struct ModelParams {
  ModelConfig config;
  Mat<S> src_embed;  // embed x src_vocab, one column per token
  Mat<S> tgt_embed;  // embed x tgt_vocab
  std::vector<LstmParams<S>> encoder;
  std::vector<LstmParams<S>> decoder;  // layer 1 input is [embedding; previous context]
  Mat<S> attn;                         // W_a, H x H
  Mat<S> out_W;                        // tgt_vocab x 2H, applied to [h_t; context]
  Mat<S> out_b;                        // tgt_vocab x 1

  static ModelParams zeros(const ModelConfig& config);
  /// Every entry uniform in [-scale, scale].
  static ModelParams uniform(const ModelConfig& config, Rng& rng, double scale = 0.1);

  template <typename T>
  ModelParams<T> cast() const;

  /// Storage matrices in layout order (index used by TensorSlot::matrix).
  int matrix_count() const { return 5 + 3 * (config.layers * 2); }
  Mat<S>& matrix(int index);
  const Mat<S>& matrix(int index) const;
  auto block(const TensorSlot& s) { return matrix(s.matrix).block(s.row, 0, s.rows, s.cols); }
  auto block(const TensorSlot& s) const { return matrix(s.matrix).block(s.row, 0, s.rows, s.cols); }

  void set_zero();
  /// this += a * other
  void add_scaled(S a, const ModelParams& other);
  void scale(S a);
  double squared_norm() const;
  bool all_finite() const;
  std::size_t parameter_count() const;

  bool operator==(const ModelParams& other) const;
};

template <typename S>
struct LstmStep {
  Mat<S> i, f, o, z;
  Mat<S> c, h;
};

/// One LSTM transition for a batch of columns: gates from U x + V h_prev + b, then
/// c = i*z + f*c_prev and h = o*tanh(c).
template <typename S>
LstmStep<S> lstm_step(const LstmParams<S>& p, const std::type_identity_t<Mat<S>>& x,
                      const std::type_identity_t<Mat<S>>& h_prev, const std::type_identity_t<Mat<S>>& c_prev);

/// Inverted dropout: each entry is 0 with probability p, else 1/(1-p).
template <typename S>
Mat<S> dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng);

/// Training-mode dropout source; pass nullptr for inference.
struct Dropout {
  double p;
  Rng* rng;
};

template <typename S>
struct EncoderOutput {
  Mat<S> states;                 // H x m, top layer after dropout
  std::vector<Mat<S>> final_h;  // per layer, H x 1
  std::vector<Mat<S>> final_c;
};

/// Throws ShapeError on an empty sequence or an id outside the source vocab.
template <typename S>
EncoderOutput<S> encode(const ModelParams<S>& params, std::span<const int> source, const Dropout* dropout = nullptr);

template <typename S>
struct Attention {
  Mat<S> context;          // H x 1
  std::vector<S> weights;  // one per encoder position
};

/// score(h_t, h_e) = h_t' W_a h_e, softmax over all positions.
template <typename S>
Attention<S> attend(const Mat<S>& h_t, const Mat<S>& encoder_states, const Mat<S>& W_a);

struct DecodeResult {
  std::vector<int> ids;  // without start/end markers
  bool truncated = false;
};

/// Greedy argmax decoding with input feeding; ties go to the lowest id.
/// If attention_trace is given it receives the weights of every step.
template <typename S>
DecodeResult decode_greedy(const ModelParams<S>& params, const EncoderOutput<S>& encoded, int max_len,
                           std::vector<std::vector<S>>* attention_trace = nullptr);

template <typename S>
DecodeResult translate(const ModelParams<S>& params, std::span<const int> source, int max_len);

struct Example {
  std::vector<int> source;
  std::vector<int> target;  // regex characters, no start/end markers
};

struct LossStats {
  double total = 0;  // summed token cross-entropy (nats)
  std::size_t tokens = 0;

  double mean() const { return tokens == 0 ? 0.0 : total / static_cast<double>(tokens); }
  double perplexity() const;
};

/// Teacher-forced cross-entropy over the batch, end marker included, pads
/// masked. No dropout.
template <typename S>
LossStats batch_loss(const ModelParams<S>& params, std::span<const Example> batch);

/// As batch_loss, and writes d(total)/d(theta) into grad (overwritten).
/// Dropout is active when a source is given.
template <typename S>
LossStats loss_and_gradient(const ModelParams<S>& params, std::span<const Example> batch, ModelParams<S>& grad,
                            const Dropout* dropout = nullptr);

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0;
  double dev_perplexity = 0;
  double lr = 0;  // rate used during this epoch
  bool improved = false;
};

struct TrainResult {
  ModelParams<float> best;
  int best_epoch = 0;
  std::vector<EpochRecord> history;
};

/// Called after every epoch with the current (not best) params; returning
/// false stops training.
using EpochCallback = std::function<bool(const EpochRecord&, const ModelParams<float>&)>;

/// Minibatch SGD. Each step's gradient is the batch's summed token loss
/// divided by the number of sequences, clipped to global norm `clip`. The
/// rate is multiplied by `decay` after an epoch whose dev perplexity does not
/// beat the best so far; the best-dev params are returned. With an empty dev
/// set the training set stands in for it.
TrainResult train(ModelParams<float> params, std::span<const Example> train_set, std::span<const Example> dev_set,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

struct GradCheckEntry {
  std::string name;
  std::size_t count = 0;
  double max_rel_error = 0;
  double max_abs_gradient = 0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> tensors;
  double max_rel_error = 0;
};

/// Central differences on every entry of every tensor of a small double
/// model, on two fixed short pairs drawn from the seed. The checked loss is
/// the mean token cross-entropy with dropout off. Relative error is
/// |a - n| / max(|a|, |n|, 1e-6).
GradCheckReport gradient_check(const ModelConfig& config, std::uint64_t seed, double step = 1e-5);

}  // namespace deepregex
