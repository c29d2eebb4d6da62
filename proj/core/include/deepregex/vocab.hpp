#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "deepregex/corpus.hpp"

namespace deepregex {

/// Lowercased, whitespace-separated words.
std::vector<std::string> tokenize(std::string_view text);

/// Token <-> id map with four reserved ids in front.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr int kReserved = 4;

  Vocab() = default;
  /// Tokens get ids kReserved, kReserved+1, ... in the given order; duplicates
  /// and empty tokens are rejected.
  explicit Vocab(std::vector<std::string> tokens);

  /// Words of the synthetic descriptions, sorted.
  static Vocab source_from(const Corpus& corpus);
  /// Characters of the regexes, sorted.
  static Vocab target_from(const Corpus& corpus);

  int size() const { return kReserved + static_cast<int>(tokens_.size()); }
  /// kUnk for unseen tokens.
  int id(std::string_view token) const;
  /// Reserved ids map to "<pad>", "<s>", "</s>", "<unk>".
  const std::string& token(int id) const;
  /// Non-reserved tokens in id order.
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::vector<int> encode_words(std::string_view text) const;
  std::vector<int> encode_chars(std::string_view text) const;
  /// Concatenates tokens, skipping reserved ids.
  std::string decode_chars(const std::vector<int>& ids) const;

  bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace deepregex
