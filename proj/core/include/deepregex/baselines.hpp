#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "deepregex/corpus.hpp"
#include "deepregex/vocab.hpp"

namespace deepregex {

/// Sparse term counts keyed by vocabulary id.
using BowVector = std::map<int, int>;

/// Lowercased whitespace tokens; out-of-vocabulary words count under Vocab::kUnk.
BowVector bow_embed(std::string_view description, const Vocab& vocab);

double bow_dot(const BowVector& a, const BowVector& b);

/// 0 when either vector is empty.
double cosine_similarity(const BowVector& a, const BowVector& b);

/// Nearest training description by cosine similarity of bag-of-words counts.
class BowNearestNeighbor {
 public:
  /// The vocabulary is built from the training descriptions.
  explicit BowNearestNeighbor(Corpus train);

  /// Index of the most similar training example; ties go to the lowest
  /// index and an all-zero query falls back to 0.
  std::size_t nearest(std::string_view description) const;
  const std::string& predict(std::string_view description) const { return train_[nearest(description)].regex; }

  const Vocab& vocab() const { return vocab_; }
  const Corpus& train() const { return train_; }

 private:
  Corpus train_;
  Vocab vocab_;
  std::vector<BowVector> vectors_;
  std::vector<double> norms_;
};

}  // namespace deepregex
