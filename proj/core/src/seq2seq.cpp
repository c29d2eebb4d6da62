#include "deepregex/seq2seq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "deepregex/vocab.hpp"

namespace deepregex {

void ModelConfig::validate() const {
  if (src_vocab <= Vocab::kReserved || tgt_vocab <= Vocab::kReserved) {
    throw std::invalid_argument("vocabularies must hold at least one token beyond the reserved ids");
  }
  if (embed < 1 || hidden < 1 || layers < 1) throw std::invalid_argument("embed, hidden and layers must be >= 1");
  if (!(dropout >= 0 && dropout < 1)) throw std::invalid_argument("dropout must be in [0, 1)");
  if (max_decode_len < 1) throw std::invalid_argument("max_decode_len must be >= 1");
}

void TrainConfig::validate() const {
  if (epochs < 1 || batch < 1) throw std::invalid_argument("epochs and batch must be >= 1");
  if (!(lr > 0)) throw std::invalid_argument("learning rate must be positive");
  if (!(decay > 0 && decay < 1)) throw std::invalid_argument("decay must be in (0, 1)");
  if (!(clip > 0)) throw std::invalid_argument("clip norm must be positive");
}

double LossStats::perplexity() const { return std::exp(mean()); }

// ---------------------------------------------------------------------------
// Parameter storage

namespace {

int enc_base(int layer) { return 2 + 3 * layer; }
int dec_base(const ModelConfig& c, int layer) { return 2 + 3 * (c.layers + layer); }
int attn_index(const ModelConfig& c) { return 2 + 6 * c.layers; }

Eigen::Index layer_input(const ModelConfig& c, bool decoder, int layer) {
  if (layer > 0) return c.hidden;
  return decoder ? c.embed + c.hidden : c.embed;
}

}  // namespace

std::vector<TensorSlot> tensor_layout(const ModelConfig& c) {
  std::vector<TensorSlot> out;
  out.push_back({"src_embed", 0, 0, c.embed, c.src_vocab});
  out.push_back({"tgt_embed", 1, 0, c.embed, c.tgt_vocab});
  const Eigen::Index H = c.hidden;
  for (int side = 0; side < 2; ++side) {
    for (int l = 0; l < c.layers; ++l) {
      std::string prefix = (side == 0 ? "enc" : "dec") + std::to_string(l + 1) + ".";
      int base = side == 0 ? enc_base(l) : dec_base(c, l);
      Eigen::Index in = layer_input(c, side == 1, l);
      const char* gates[] = {"i", "f", "o", "z"};
      for (int k = 0; k < 4; ++k) {
        out.push_back({prefix + "U_" + gates[k], base, k * H, H, in});
        out.push_back({prefix + "V_" + gates[k], base + 1, k * H, H, H});
        out.push_back({prefix + "b_" + gates[k], base + 2, k * H, H, 1});
      }
    }
  }
  int a = attn_index(c);
  out.push_back({"attn.W_a", a, 0, H, H});
  out.push_back({"out.W", a + 1, 0, c.tgt_vocab, 2 * H});
  out.push_back({"out.b", a + 2, 0, c.tgt_vocab, 1});
  return out;
}

template <typename S>
ModelParams<S> ModelParams<S>::zeros(const ModelConfig& c) {
  c.validate();
  ModelParams p;
  p.config = c;
  const Eigen::Index H = c.hidden;
  p.src_embed = Mat<S>::Zero(c.embed, c.src_vocab);
  p.tgt_embed = Mat<S>::Zero(c.embed, c.tgt_vocab);
  for (int side = 0; side < 2; ++side) {
    auto& layers = side == 0 ? p.encoder : p.decoder;
    for (int l = 0; l < c.layers; ++l) {
      layers.push_back({Mat<S>::Zero(4 * H, layer_input(c, side == 1, l)), Mat<S>::Zero(4 * H, H),
                        Mat<S>::Zero(4 * H, 1)});
    }
  }
  p.attn = Mat<S>::Zero(H, H);
  p.out_W = Mat<S>::Zero(c.tgt_vocab, 2 * H);
  p.out_b = Mat<S>::Zero(c.tgt_vocab, 1);
  return p;
}

template <typename S>
ModelParams<S> ModelParams<S>::uniform(const ModelConfig& c, Rng& rng, double scale) {
  ModelParams p = zeros(c);
  for (int k = 0; k < p.matrix_count(); ++k) {
    Mat<S>& m = p.matrix(k);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = static_cast<S>((2 * rng.uniform() - 1) * scale);
  }
  return p;
}

template <typename S>
template <typename T>
ModelParams<T> ModelParams<S>::cast() const {
  ModelParams<T> out = ModelParams<T>::zeros(config);
  for (int k = 0; k < matrix_count(); ++k) out.matrix(k) = matrix(k).template cast<T>();
  return out;
}

template <typename S>
Mat<S>& ModelParams<S>::matrix(int index) {
  return const_cast<Mat<S>&>(static_cast<const ModelParams&>(*this).matrix(index));
}

template <typename S>
const Mat<S>& ModelParams<S>::matrix(int index) const {
  if (index == 0) return src_embed;
  if (index == 1) return tgt_embed;
  int a = attn_index(config);
  if (index == a) return attn;
  if (index == a + 1) return out_W;
  if (index == a + 2) return out_b;
  if (index < 2 || index > a + 2) throw std::out_of_range("matrix index");
  int k = index - 2;
  int layer = k / 3;
  const auto& lp = layer < config.layers ? encoder[static_cast<std::size_t>(layer)]
                                         : decoder[static_cast<std::size_t>(layer - config.layers)];
  switch (k % 3) {
    case 0: return lp.U;
    case 1: return lp.V;
    default: return lp.b;
  }
}

template <typename S>
void ModelParams<S>::set_zero() {
  for (int k = 0; k < matrix_count(); ++k) matrix(k).setZero();
}

template <typename S>
void ModelParams<S>::add_scaled(S a, const ModelParams& other) {
  for (int k = 0; k < matrix_count(); ++k) matrix(k) += a * other.matrix(k);
}

template <typename S>
void ModelParams<S>::scale(S a) {
  for (int k = 0; k < matrix_count(); ++k) matrix(k) *= a;
}

template <typename S>
double ModelParams<S>::squared_norm() const {
  double sum = 0;
  for (int k = 0; k < matrix_count(); ++k) sum += static_cast<double>(matrix(k).squaredNorm());
  return sum;
}

template <typename S>
bool ModelParams<S>::all_finite() const {
  for (int k = 0; k < matrix_count(); ++k)
    if (!matrix(k).allFinite()) return false;
  return true;
}

template <typename S>
std::size_t ModelParams<S>::parameter_count() const {
  std::size_t n = 0;
  for (int k = 0; k < matrix_count(); ++k) n += static_cast<std::size_t>(matrix(k).size());
  return n;
}

template <typename S>
bool ModelParams<S>::operator==(const ModelParams& other) const {
  if (!(config == other.config)) return false;
  for (int k = 0; k < matrix_count(); ++k)
    if (matrix(k) != other.matrix(k)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Cell, dropout, attention

template <typename S>
Mat<S> dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng) {
  Mat<S> m(rows, cols);
  const S keep = static_cast<S>(1.0 / (1.0 - p));
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.uniform() < p ? S(0) : keep;
  return m;
}

namespace {

template <typename S>
struct StepCache {
  Mat<S> x, h_prev, c_prev;
  LstmStep<S> out;
  Mat<S> tanh_c;
};

template <typename S>
void lstm_forward(const LstmParams<S>& p, StepCache<S>& sc) {
  const Eigen::Index H = p.hidden();
  Mat<S> g = p.U * sc.x;
  g.noalias() += p.V * sc.h_prev;
  g.colwise() += p.b.col(0);
  auto& o = sc.out;
  o.i = g.middleRows(0, H).array().logistic().matrix();
  o.f = g.middleRows(H, H).array().logistic().matrix();
  o.o = g.middleRows(2 * H, H).array().logistic().matrix();
  o.z = g.middleRows(3 * H, H).array().tanh().matrix();
  o.c = (o.i.array() * o.z.array() + o.f.array() * sc.c_prev.array()).matrix();
  sc.tanh_c = o.c.array().tanh().matrix();
  o.h = (o.o.array() * sc.tanh_c.array()).matrix();
}

// dh, dc are gradients w.r.t. this step's h and c. Parameter gradients are
// accumulated into g; dx is skipped when null.
template <typename S>
void lstm_backward(const LstmParams<S>& p, const StepCache<S>& sc, const Mat<S>& dh, const Mat<S>& dc_in,
                   LstmParams<S>& g, Mat<S>* dx, Mat<S>& dh_prev, Mat<S>& dc_prev) {
  const Eigen::Index H = p.hidden();
  const auto& o = sc.out;
  auto tc = sc.tanh_c.array();
  Mat<S> dc = dc_in;
  dc.array() += dh.array() * o.o.array() * (S(1) - tc * tc);
  Mat<S> dG(4 * H, dh.cols());
  dG.middleRows(0, H) = (dc.array() * o.z.array() * o.i.array() * (S(1) - o.i.array())).matrix();
  dG.middleRows(H, H) = (dc.array() * sc.c_prev.array() * o.f.array() * (S(1) - o.f.array())).matrix();
  dG.middleRows(2 * H, H) = (dh.array() * tc * o.o.array() * (S(1) - o.o.array())).matrix();
  dG.middleRows(3 * H, H) = (dc.array() * o.i.array() * (S(1) - o.z.array().square())).matrix();
  dc_prev = (dc.array() * o.f.array()).matrix();
  g.U.noalias() += dG * sc.x.transpose();
  g.V.noalias() += dG * sc.h_prev.transpose();
  g.b += dG.rowwise().sum();
  if (dx) *dx = p.U.transpose() * dG;
  dh_prev = p.V.transpose() * dG;
}

void check_shape(bool ok, const char* what) {
  if (!ok) throw ShapeError(what);
}

}  // namespace

template <typename S>
LstmStep<S> lstm_step(const LstmParams<S>& p, const std::type_identity_t<Mat<S>>& x,
                      const std::type_identity_t<Mat<S>>& h_prev, const std::type_identity_t<Mat<S>>& c_prev) {
  const Eigen::Index H = p.hidden();
  check_shape(p.U.rows() == 4 * H && p.V.rows() == 4 * H && p.b.rows() == 4 * H && p.b.cols() == 1,
              "lstm_step: gate parameter shapes disagree");
  check_shape(x.rows() == p.input(), "lstm_step: input width does not match U");
  check_shape(h_prev.rows() == H && c_prev.rows() == H, "lstm_step: state height does not match V");
  check_shape(x.cols() == h_prev.cols() && x.cols() == c_prev.cols(), "lstm_step: batch widths disagree");
  StepCache<S> sc{x, h_prev, c_prev, {}, {}};
  lstm_forward(p, sc);
  return sc.out;
}

template <typename S>
Attention<S> attend(const Mat<S>& h_t, const Mat<S>& states, const Mat<S>& W_a) {
  const Eigen::Index H = W_a.rows();
  check_shape(W_a.cols() == H && h_t.rows() == H && h_t.cols() == 1 && states.rows() == H,
              "attend: shapes disagree");
  check_shape(states.cols() >= 1, "attend: no encoder states");
  Mat<S> v = W_a.transpose() * h_t;
  Mat<S> scores = states.transpose() * v;  // m x 1
  S mx = scores.maxCoeff();
  Mat<S> w = (scores.array() - mx).exp().matrix();
  w /= w.sum();
  Attention<S> out;
  out.context = states * w;
  out.weights.assign(w.data(), w.data() + w.size());
  return out;
}

// ---------------------------------------------------------------------------
// Batched forward/backward

namespace {

struct PaddedBatch {
  Eigen::Index B = 0, m = 0, T = 0;
  std::vector<std::vector<int>> src;      // [t][b]
  std::vector<int> src_len;
  std::vector<std::vector<int>> dec_in;   // [t][b]
  std::vector<std::vector<int>> dec_out;  // [t][b]
  std::vector<int> tgt_len;               // target + end marker
};

PaddedBatch pad_batch(const ModelConfig& c, std::span<const Example> batch, bool with_target) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  PaddedBatch pb;
  pb.B = static_cast<Eigen::Index>(batch.size());
  for (const auto& ex : batch) {
    if (ex.source.empty()) throw ShapeError("empty source sequence");
    for (int id : ex.source)
      if (id < 0 || id >= c.src_vocab) throw ShapeError("source id " + std::to_string(id) + " outside the vocabulary");
    if (with_target) {
      for (int id : ex.target)
        if (id < 0 || id >= c.tgt_vocab) throw ShapeError("target id " + std::to_string(id) + " outside the vocabulary");
    }
    pb.m = std::max<Eigen::Index>(pb.m, static_cast<Eigen::Index>(ex.source.size()));
    pb.T = std::max<Eigen::Index>(pb.T, static_cast<Eigen::Index>(ex.target.size()) + 1);
    pb.src_len.push_back(static_cast<int>(ex.source.size()));
    pb.tgt_len.push_back(static_cast<int>(ex.target.size()) + 1);
  }
  pb.src.assign(static_cast<std::size_t>(pb.m), std::vector<int>(batch.size(), Vocab::kPad));
  for (std::size_t b = 0; b < batch.size(); ++b)
    for (std::size_t t = 0; t < batch[b].source.size(); ++t) pb.src[t][b] = batch[b].source[t];
  if (with_target) {
    pb.dec_in.assign(static_cast<std::size_t>(pb.T), std::vector<int>(batch.size(), Vocab::kPad));
    pb.dec_out = pb.dec_in;
    for (std::size_t b = 0; b < batch.size(); ++b) {
      const auto& y = batch[b].target;
      pb.dec_in[0][b] = Vocab::kBos;
      for (std::size_t t = 0; t < y.size(); ++t) {
        pb.dec_in[t + 1][b] = y[t];
        pb.dec_out[t][b] = y[t];
      }
      pb.dec_out[y.size()][b] = Vocab::kEos;
    }
  }
  return pb;
}

template <typename S>
Mat<S> gather(const Mat<S>& table, const std::vector<int>& ids) {
  Mat<S> x(table.rows(), static_cast<Eigen::Index>(ids.size()));
  for (std::size_t b = 0; b < ids.size(); ++b) x.col(static_cast<Eigen::Index>(b)) = table.col(ids[b]);
  return x;
}

template <typename S>
void scatter_add(Mat<S>& table, const std::vector<int>& ids, const Mat<S>& dx, Eigen::Index rows) {
  for (std::size_t b = 0; b < ids.size(); ++b)
    table.col(ids[b]) += dx.col(static_cast<Eigen::Index>(b)).topRows(rows);
}

template <typename S>
struct Forward {
  // encoder
  std::vector<std::vector<StepCache<S>>> enc;   // [layer][t]
  std::vector<std::vector<Mat<S>>> enc_mask;    // [layer][t], empty without dropout
  std::vector<Mat<S>> top;                      // [t], H x B
  std::vector<Mat<S>> keys;                     // [t], W_a * top[t]
  std::vector<Mat<S>> enc_h, enc_c;             // final state per layer
  // decoder
  std::vector<std::vector<StepCache<S>>> dec;   // [layer][t]
  std::vector<std::vector<Mat<S>>> dec_mask;
  std::vector<Mat<S>> h_top, alpha, ctx, probs;  // [t]
};

template <typename S>
void encoder_forward(const ModelParams<S>& p, const PaddedBatch& pb, const Dropout* dropout, Forward<S>& f) {
  const auto& c = p.config;
  const Eigen::Index H = c.hidden;
  const std::size_t L = static_cast<std::size_t>(c.layers);
  const std::size_t m = static_cast<std::size_t>(pb.m);
  f.enc.assign(L, std::vector<StepCache<S>>(m));
  f.enc_mask.assign(L, {});
  f.enc_h.assign(L, {});
  f.enc_c.assign(L, {});
  std::vector<Mat<S>> below(m);
  for (std::size_t l = 0; l < L; ++l) {
    Mat<S> h = Mat<S>::Zero(H, pb.B);
    Mat<S> cs = Mat<S>::Zero(H, pb.B);
    if (dropout) f.enc_mask[l].resize(m);
    for (std::size_t t = 0; t < m; ++t) {
      StepCache<S>& sc = f.enc[l][t];
      sc.x = l == 0 ? gather(p.src_embed, pb.src[t]) : std::move(below[t]);
      sc.h_prev = h;
      sc.c_prev = cs;
      lstm_forward(p.encoder[l], sc);
      h = sc.out.h;
      cs = sc.out.c;
      for (Eigen::Index b = 0; b < pb.B; ++b) {
        if (static_cast<int>(t) >= pb.src_len[static_cast<std::size_t>(b)]) {
          h.col(b) = sc.h_prev.col(b);
          cs.col(b) = sc.c_prev.col(b);
        }
      }
      if (dropout) {
        f.enc_mask[l][t] = dropout_mask<S>(H, pb.B, dropout->p, *dropout->rng);
        below[t] = (h.array() * f.enc_mask[l][t].array()).matrix();
      } else {
        below[t] = h;
      }
    }
    f.enc_h[l] = h;
    f.enc_c[l] = cs;
  }
  f.top = std::move(below);
  f.keys.resize(m);
  for (std::size_t t = 0; t < m; ++t) f.keys[t] = p.attn * f.top[t];
}

template <typename S>
double decoder_forward(const ModelParams<S>& p, const PaddedBatch& pb, const Dropout* dropout, Forward<S>& f) {
  const auto& c = p.config;
  const Eigen::Index H = c.hidden;
  const Eigen::Index E = c.embed;
  const std::size_t L = static_cast<std::size_t>(c.layers);
  const std::size_t T = static_cast<std::size_t>(pb.T);
  const std::size_t m = static_cast<std::size_t>(pb.m);
  f.dec.assign(L, std::vector<StepCache<S>>(T));
  f.dec_mask.assign(L, {});
  if (dropout)
    for (auto& v : f.dec_mask) v.resize(T);
  f.h_top.resize(T);
  f.alpha.resize(T);
  f.ctx.resize(T);
  f.probs.resize(T);

  std::vector<Mat<S>> h = f.enc_h;
  std::vector<Mat<S>> cs = f.enc_c;
  Mat<S> ctx = Mat<S>::Zero(H, pb.B);
  double total = 0;
  for (std::size_t t = 0; t < T; ++t) {
    Mat<S> x(E + H, pb.B);
    x.topRows(E) = gather(p.tgt_embed, pb.dec_in[t]);
    x.bottomRows(H) = ctx;
    for (std::size_t l = 0; l < L; ++l) {
      StepCache<S>& sc = f.dec[l][t];
      sc.x = std::move(x);
      sc.h_prev = h[l];
      sc.c_prev = cs[l];
      lstm_forward(p.decoder[l], sc);
      h[l] = sc.out.h;
      cs[l] = sc.out.c;
      if (dropout) {
        f.dec_mask[l][t] = dropout_mask<S>(H, pb.B, dropout->p, *dropout->rng);
        x = (h[l].array() * f.dec_mask[l][t].array()).matrix();
      } else {
        x = h[l];
      }
    }
    const Mat<S>& ht = f.h_top[t] = std::move(x);

    Mat<S> scores(pb.m, pb.B);
    for (std::size_t e = 0; e < m; ++e)
      scores.row(static_cast<Eigen::Index>(e)) = (f.keys[e].array() * ht.array()).colwise().sum();
    Mat<S>& alpha = f.alpha[t] = Mat<S>::Zero(pb.m, pb.B);
    for (Eigen::Index b = 0; b < pb.B; ++b) {
      Eigen::Index len = pb.src_len[static_cast<std::size_t>(b)];
      S mx = scores.col(b).head(len).maxCoeff();
      alpha.col(b).head(len) = (scores.col(b).head(len).array() - mx).exp().matrix();
      alpha.col(b).head(len) /= alpha.col(b).head(len).sum();
    }
    ctx.setZero();
    for (std::size_t e = 0; e < m; ++e)
      ctx.array() += f.top[e].array().rowwise() * alpha.row(static_cast<Eigen::Index>(e)).array();
    f.ctx[t] = ctx;

    Mat<S> logits = p.out_W.leftCols(H) * ht;
    logits.noalias() += p.out_W.rightCols(H) * ctx;
    logits.colwise() += p.out_b.col(0);
    Mat<S>& probs = f.probs[t] = Mat<S>(logits.rows(), pb.B);
    for (Eigen::Index b = 0; b < pb.B; ++b) {
      S mx = logits.col(b).maxCoeff();
      probs.col(b) = (logits.col(b).array() - mx).exp().matrix();
      S sum = probs.col(b).sum();
      probs.col(b) /= sum;
      if (static_cast<int>(t) < pb.tgt_len[static_cast<std::size_t>(b)]) {
        int y = pb.dec_out[t][static_cast<std::size_t>(b)];
        total -= static_cast<double>(logits(y, b) - mx) - std::log(static_cast<double>(sum));
      }
    }
  }
  return total;
}

template <typename S>
void backward(const ModelParams<S>& p, const PaddedBatch& pb, const Forward<S>& f, ModelParams<S>& g) {
  const auto& c = p.config;
  const Eigen::Index H = c.hidden;
  const Eigen::Index E = c.embed;
  const std::size_t L = static_cast<std::size_t>(c.layers);
  const std::size_t T = static_cast<std::size_t>(pb.T);
  const std::size_t m = static_cast<std::size_t>(pb.m);

  std::vector<Mat<S>> d_top(m, Mat<S>::Zero(H, pb.B));
  std::vector<Mat<S>> d_keys(m, Mat<S>::Zero(H, pb.B));
  std::vector<Mat<S>> dh(L, Mat<S>::Zero(H, pb.B));
  std::vector<Mat<S>> dc(L, Mat<S>::Zero(H, pb.B));
  Mat<S> d_ctx_next = Mat<S>::Zero(H, pb.B);
  Mat<S> dx, dh_prev, dc_prev;

  for (std::size_t t = T; t-- > 0;) {
    Mat<S> dlogits = f.probs[t];
    for (Eigen::Index b = 0; b < pb.B; ++b) {
      if (static_cast<int>(t) < pb.tgt_len[static_cast<std::size_t>(b)]) {
        dlogits(pb.dec_out[t][static_cast<std::size_t>(b)], b) -= S(1);
      } else {
        dlogits.col(b).setZero();
      }
    }
    const Mat<S>& ht = f.h_top[t];
    g.out_W.leftCols(H).noalias() += dlogits * ht.transpose();
    g.out_W.rightCols(H).noalias() += dlogits * f.ctx[t].transpose();
    g.out_b += dlogits.rowwise().sum();
    Mat<S> d_ht = p.out_W.leftCols(H).transpose() * dlogits;
    Mat<S> d_ctx = p.out_W.rightCols(H).transpose() * dlogits;
    d_ctx += d_ctx_next;

    const Mat<S>& alpha = f.alpha[t];
    Mat<S> d_alpha(pb.m, pb.B);
    for (std::size_t e = 0; e < m; ++e) {
      auto ei = static_cast<Eigen::Index>(e);
      d_alpha.row(ei) = (d_ctx.array() * f.top[e].array()).colwise().sum();
      d_top[e].array() += d_ctx.array().rowwise() * alpha.row(ei).array();
    }
    Mat<S> d_score = (alpha.array() * (d_alpha.array().rowwise() -
                                       (alpha.array() * d_alpha.array()).colwise().sum()))
                         .matrix();
    for (std::size_t e = 0; e < m; ++e) {
      auto ei = static_cast<Eigen::Index>(e);
      d_ht.array() += f.keys[e].array().rowwise() * d_score.row(ei).array();
      d_keys[e].array() += ht.array().rowwise() * d_score.row(ei).array();
    }

    Mat<S> d_out = std::move(d_ht);
    for (std::size_t l = L; l-- > 0;) {
      if (!f.dec_mask[l].empty()) d_out.array() *= f.dec_mask[l][t].array();
      dh[l] += d_out;
      lstm_backward(p.decoder[l], f.dec[l][t], dh[l], dc[l], g.decoder[l], &dx, dh_prev, dc_prev);
      dh[l] = std::move(dh_prev);
      dc[l] = std::move(dc_prev);
      d_out = std::move(dx);
    }
    scatter_add(g.tgt_embed, pb.dec_in[t], d_out, E);
    d_ctx_next = d_out.bottomRows(H);
  }

  for (std::size_t e = 0; e < m; ++e) {
    g.attn.noalias() += d_keys[e] * f.top[e].transpose();
    d_top[e].noalias() += p.attn.transpose() * d_keys[e];
  }

  // Encoder, top layer first; dh/dc now hold the gradient of the final states.
  std::vector<Mat<S>> d_below = std::move(d_top);
  for (std::size_t l = L; l-- > 0;) {
    Mat<S> dhl = std::move(dh[l]);
    Mat<S> dcl = std::move(dc[l]);
    for (std::size_t t = m; t-- > 0;) {
      if (!f.enc_mask[l].empty()) d_below[t].array() *= f.enc_mask[l][t].array();
      dhl += d_below[t];
      std::vector<Eigen::Index> carried;
      for (Eigen::Index b = 0; b < pb.B; ++b)
        if (static_cast<int>(t) >= pb.src_len[static_cast<std::size_t>(b)]) carried.push_back(b);
      Mat<S> keep_h, keep_c;
      if (!carried.empty()) {
        keep_h = dhl;
        keep_c = dcl;
        for (auto b : carried) {
          dhl.col(b).setZero();
          dcl.col(b).setZero();
        }
      }
      lstm_backward(p.encoder[l], f.enc[l][t], dhl, dcl, g.encoder[l], &dx, dh_prev, dc_prev);
      for (auto b : carried) {
        dh_prev.col(b) += keep_h.col(b);
        dc_prev.col(b) += keep_c.col(b);
      }
      dhl = std::move(dh_prev);
      dcl = std::move(dc_prev);
      if (l == 0) {
        scatter_add(g.src_embed, pb.src[t], dx, E);
      } else {
        d_below[t] = std::move(dx);
      }
    }
  }
}

}  // namespace

template <typename S>
EncoderOutput<S> encode(const ModelParams<S>& params, std::span<const int> source, const Dropout* dropout) {
  Example ex{{source.begin(), source.end()}, {}};
  PaddedBatch pb = pad_batch(params.config, std::span<const Example>(&ex, 1), false);
  Forward<S> f;
  encoder_forward(params, pb, dropout, f);
  EncoderOutput<S> out;
  out.states.resize(params.config.hidden, pb.m);
  for (Eigen::Index t = 0; t < pb.m; ++t) out.states.col(t) = f.top[static_cast<std::size_t>(t)];
  out.final_h = std::move(f.enc_h);
  out.final_c = std::move(f.enc_c);
  return out;
}

template <typename S>
DecodeResult decode_greedy(const ModelParams<S>& p, const EncoderOutput<S>& enc, int max_len,
                           std::vector<std::vector<S>>* attention_trace) {
  const auto& c = p.config;
  const Eigen::Index H = c.hidden;
  const Eigen::Index E = c.embed;
  std::vector<Mat<S>> h = enc.final_h;
  std::vector<Mat<S>> cs = enc.final_c;
  Mat<S> ctx = Mat<S>::Zero(H, 1);
  int prev = Vocab::kBos;
  DecodeResult out;
  out.truncated = true;
  StepCache<S> sc;
  for (int step = 0; step < max_len; ++step) {
    Mat<S> x(E + H, 1);
    x.topRows(E) = p.tgt_embed.col(prev);
    x.bottomRows(H) = ctx;
    for (std::size_t l = 0; l < p.decoder.size(); ++l) {
      sc.x = std::move(x);
      sc.h_prev = h[l];
      sc.c_prev = cs[l];
      lstm_forward(p.decoder[l], sc);
      h[l] = sc.out.h;
      cs[l] = sc.out.c;
      x = h[l];
    }
    Attention<S> a = attend(x, enc.states, p.attn);
    ctx = a.context;
    if (attention_trace) attention_trace->push_back(std::move(a.weights));
    Mat<S> logits = p.out_W.leftCols(H) * x;
    logits.noalias() += p.out_W.rightCols(H) * ctx;
    logits += p.out_b;
    int best = 0;
    for (int k = 1; k < logits.rows(); ++k)
      if (logits(k, 0) > logits(best, 0)) best = k;
    if (best == Vocab::kEos) {
      out.truncated = false;
      break;
    }
    out.ids.push_back(best);
    prev = best;
  }
  return out;
}

template <typename S>
DecodeResult translate(const ModelParams<S>& params, std::span<const int> source, int max_len) {
  return decode_greedy(params, encode(params, source), max_len);
}

template <typename S>
LossStats batch_loss(const ModelParams<S>& params, std::span<const Example> batch) {
  PaddedBatch pb = pad_batch(params.config, batch, true);
  Forward<S> f;
  encoder_forward(params, pb, nullptr, f);
  LossStats stats;
  stats.total = decoder_forward(params, pb, nullptr, f);
  stats.tokens = static_cast<std::size_t>(std::accumulate(pb.tgt_len.begin(), pb.tgt_len.end(), 0));
  return stats;
}

template <typename S>
LossStats loss_and_gradient(const ModelParams<S>& params, std::span<const Example> batch, ModelParams<S>& grad,
                            const Dropout* dropout) {
  PaddedBatch pb = pad_batch(params.config, batch, true);
  if (dropout && dropout->p == 0) dropout = nullptr;
  Forward<S> f;
  encoder_forward(params, pb, dropout, f);
  LossStats stats;
  stats.total = decoder_forward(params, pb, dropout, f);
  stats.tokens = static_cast<std::size_t>(std::accumulate(pb.tgt_len.begin(), pb.tgt_len.end(), 0));
  if (!(grad.config == params.config)) grad = ModelParams<S>::zeros(params.config);
  grad.set_zero();
  backward(params, pb, f, grad);
  return stats;
}

// ---------------------------------------------------------------------------
// Training

namespace {

LossStats corpus_loss(const ModelParams<float>& params, std::span<const Example> data, std::size_t chunk) {
  LossStats sum;
  for (std::size_t i = 0; i < data.size(); i += chunk) {
    auto part = data.subspan(i, std::min(chunk, data.size() - i));
    LossStats s = batch_loss(params, part);
    sum.total += s.total;
    sum.tokens += s.tokens;
  }
  return sum;
}

}  // namespace

TrainResult train(ModelParams<float> params, std::span<const Example> train_set, std::span<const Example> dev_set,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  params.config.validate();
  if (train_set.empty()) throw std::invalid_argument("empty training set");
  if (dev_set.empty()) dev_set = train_set;

  Rng rng(config.seed);
  Dropout dropout{params.config.dropout, &rng};
  const Dropout* active = params.config.dropout > 0 ? &dropout : nullptr;
  ModelParams<float> grad = ModelParams<float>::zeros(params.config);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch_size = static_cast<std::size_t>(config.batch);

  TrainResult result;
  result.best = params;
  double best_ppl = std::numeric_limits<double>::infinity();
  double lr = config.lr;
  std::vector<Example> batch;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    LossStats epoch_loss;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      batch.clear();
      for (std::size_t k = start; k < std::min(order.size(), start + batch_size); ++k)
        batch.push_back(train_set[order[k]]);
      LossStats s = loss_and_gradient(params, std::span<const Example>(batch), grad, active);
      if (!std::isfinite(s.total)) {
        throw TrainingDivergedError("training loss became non-finite in epoch " + std::to_string(epoch));
      }
      epoch_loss.total += s.total;
      epoch_loss.tokens += s.tokens;
      grad.scale(1.0f / static_cast<float>(batch.size()));
      double norm = std::sqrt(grad.squared_norm());
      if (norm > config.clip) grad.scale(static_cast<float>(config.clip / norm));
      params.add_scaled(static_cast<float>(-lr), grad);
    }
    if (!params.all_finite()) {
      throw TrainingDivergedError("parameters became non-finite in epoch " + std::to_string(epoch));
    }
    double ppl = corpus_loss(params, dev_set, 64).perplexity();
    if (!std::isfinite(ppl)) {
      throw TrainingDivergedError("dev perplexity became non-finite in epoch " + std::to_string(epoch));
    }
    EpochRecord rec{epoch, epoch_loss.mean(), ppl, lr, ppl < best_ppl};
    result.history.push_back(rec);
    if (rec.improved) {
      best_ppl = ppl;
      result.best = params;
      result.best_epoch = epoch;
    } else {
      lr *= config.decay;
    }
    if (on_epoch && !on_epoch(rec, params)) break;
  }
  return result;
}

GradCheckReport gradient_check(const ModelConfig& config, std::uint64_t seed, double step) {
  config.validate();
  Rng rng(seed);
  ModelParams<double> p = ModelParams<double>::uniform(config, rng, 0.1);
  auto ids = [&](int vocab, int n) {
    std::vector<int> v;
    for (int i = 0; i < n; ++i) v.push_back(Vocab::kReserved + static_cast<int>(rng.below(
                                                                    static_cast<std::uint64_t>(vocab - Vocab::kReserved))));
    return v;
  };
  // Unequal lengths on both sides so padding and carried states are exercised.
  std::vector<Example> batch{{ids(config.src_vocab, 3), ids(config.tgt_vocab, 4)},
                             {ids(config.src_vocab, 5), ids(config.tgt_vocab, 2)}};

  ModelParams<double> g = ModelParams<double>::zeros(config);
  LossStats base = loss_and_gradient(p, std::span<const Example>(batch), g);
  const double tokens = static_cast<double>(base.tokens);
  auto mean_loss = [&] { return batch_loss(p, std::span<const Example>(batch)).total / tokens; };

  GradCheckReport report;
  for (const auto& slot : tensor_layout(config)) {
    GradCheckEntry entry{slot.name, static_cast<std::size_t>(slot.rows * slot.cols), 0, 0};
    auto pb = p.block(slot);
    auto gb = g.block(slot);
    for (Eigen::Index j = 0; j < slot.cols; ++j) {
      for (Eigen::Index i = 0; i < slot.rows; ++i) {
        const double orig = pb(i, j);
        pb(i, j) = orig + step;
        double up = mean_loss();
        pb(i, j) = orig - step;
        double down = mean_loss();
        pb(i, j) = orig;
        double numeric = (up - down) / (2 * step);
        double analytic = gb(i, j) / tokens;
        double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        entry.max_rel_error = std::max(entry.max_rel_error, std::abs(analytic - numeric) / denom);
        entry.max_abs_gradient = std::max(entry.max_abs_gradient, std::abs(analytic));
      }
    }
    report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
    report.tensors.push_back(std::move(entry));
  }
  return report;
}

// ---------------------------------------------------------------------------

#define DEEPREGEX_INSTANTIATE(S)                                                                              \
  template struct ModelParams<S>;                                                                             \
  template LstmStep<S> lstm_step<S>(const LstmParams<S>&, const Mat<S>&, const Mat<S>&, const Mat<S>&);      \
  template Mat<S> dropout_mask<S>(Eigen::Index, Eigen::Index, double, Rng&);                                  \
  template EncoderOutput<S> encode(const ModelParams<S>&, std::span<const int>, const Dropout*);              \
  template Attention<S> attend(const Mat<S>&, const Mat<S>&, const Mat<S>&);                                  \
  template DecodeResult decode_greedy(const ModelParams<S>&, const EncoderOutput<S>&, int,                    \
                                      std::vector<std::vector<S>>*);                                          \
  template DecodeResult translate(const ModelParams<S>&, std::span<const int>, int);                          \
  template LossStats batch_loss(const ModelParams<S>&, std::span<const Example>);                             \
  template LossStats loss_and_gradient(const ModelParams<S>&, std::span<const Example>, ModelParams<S>&,      \
                                       const Dropout*);

DEEPREGEX_INSTANTIATE(float)
DEEPREGEX_INSTANTIATE(double)

template ModelParams<double> ModelParams<float>::cast<double>() const;
template ModelParams<float> ModelParams<double>::cast<float>() const;
template ModelParams<float> ModelParams<float>::cast<float>() const;
template ModelParams<double> ModelParams<double>::cast<double>() const;

}  // namespace deepregex
