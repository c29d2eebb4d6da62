#include "deepregex/vocab.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <stdexcept>

namespace deepregex {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

Vocab::Vocab(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw std::invalid_argument("empty vocabulary token");
    if (!index_.emplace(tokens_[i], kReserved + static_cast<int>(i)).second) {
      throw std::invalid_argument("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

Vocab Vocab::source_from(const Corpus& corpus) {
  std::set<std::string> words;
  for (const auto& ex : corpus)
    for (auto& w : tokenize(ex.synthetic)) words.insert(std::move(w));
  return Vocab({words.begin(), words.end()});
}

Vocab Vocab::target_from(const Corpus& corpus) {
  std::set<std::string> chars;
  for (const auto& ex : corpus)
    for (char c : ex.regex) chars.insert(std::string(1, c));
  return Vocab({chars.begin(), chars.end()});
}

int Vocab::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocab::token(int id) const {
  static const std::array<std::string, kReserved> reserved{"<pad>", "<s>", "</s>", "<unk>"};
  if (id < 0 || id >= size()) throw std::out_of_range("token id " + std::to_string(id) + " out of range");
  if (id < kReserved) return reserved[static_cast<std::size_t>(id)];
  return tokens_[static_cast<std::size_t>(id - kReserved)];
}

std::vector<int> Vocab::encode_words(std::string_view text) const {
  std::vector<int> ids;
  for (const auto& w : tokenize(text)) ids.push_back(id(w));
  return ids;
}

std::vector<int> Vocab::encode_chars(std::string_view text) const {
  std::vector<int> ids;
  ids.reserve(text.size());
  for (char c : text) ids.push_back(id(std::string_view(&c, 1)));
  return ids;
}

std::string Vocab::decode_chars(const std::vector<int>& ids) const {
  std::string out;
  for (int i : ids)
    if (i >= kReserved) out += token(i);
  return out;
}

}  // namespace deepregex
