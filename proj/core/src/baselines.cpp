#include "deepregex/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace deepregex {

BowVector bow_embed(std::string_view description, const Vocab& vocab) {
  BowVector v;
  for (int id : vocab.encode_words(description)) ++v[id];
  return v;
}

double bow_dot(const BowVector& a, const BowVector& b) {
  double sum = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      sum += static_cast<double>(i->second) * static_cast<double>(j->second);
      ++i;
      ++j;
    }
  }
  return sum;
}

double cosine_similarity(const BowVector& a, const BowVector& b) {
  double na = bow_dot(a, a);
  double nb = bow_dot(b, b);
  if (na == 0 || nb == 0) return 0;
  return bow_dot(a, b) / (std::sqrt(na) * std::sqrt(nb));
}

BowNearestNeighbor::BowNearestNeighbor(Corpus train) : train_(std::move(train)) {
  if (train_.empty()) throw std::invalid_argument("nearest-neighbour baseline needs a non-empty training set");
  vocab_ = Vocab::source_from(train_);
  for (const auto& ex : train_) {
    vectors_.push_back(bow_embed(ex.synthetic, vocab_));
    norms_.push_back(std::sqrt(bow_dot(vectors_.back(), vectors_.back())));
  }
}

std::size_t BowNearestNeighbor::nearest(std::string_view description) const {
  BowVector q = bow_embed(description, vocab_);
  double qn = std::sqrt(bow_dot(q, q));
  if (qn == 0) return 0;
  std::size_t best = 0;
  double best_sim = -1;
  for (std::size_t k = 0; k < vectors_.size(); ++k) {
    double sim = norms_[k] == 0 ? 0 : bow_dot(q, vectors_[k]) / (qn * norms_[k]);
    if (sim > best_sim) {
      best_sim = sim;
      best = k;
    }
  }
  return best;
}

}  // namespace deepregex
