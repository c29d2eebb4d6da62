#include "deepregex/dataset_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace deepregex {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string(), 0);
  return in;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

std::string field(const nlohmann::json& obj, const char* key, std::size_t line, const std::string& source) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DatasetError(std::string("missing key \"") + key + "\"", line, source);
  if (!it->is_string()) throw DatasetError(std::string("key \"") + key + "\" must be a string", line, source);
  return it->get<std::string>();
}

}  // namespace

void write_corpus(std::ostream& out, const Corpus& corpus, const std::optional<std::string>& provenance) {
  if (provenance) {
    ordered_json header;
    header["provenance"] = ordered_json::parse(*provenance);
    out << header.dump() << '\n';
  }
  for (const auto& ex : corpus) {
    ordered_json rec;
    rec["regex"] = ex.regex;
    rec["synthetic"] = ex.synthetic;
    rec["paraphrase"] = ex.paraphrase ? ordered_json(*ex.paraphrase) : ordered_json(nullptr);
    out << rec.dump() << '\n';
  }
}

void write_corpus_file(const std::filesystem::path& path, const Corpus& corpus,
                       const std::optional<std::string>& provenance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot write " + path.string(), 0);
  write_corpus(out, corpus, provenance);
  out.flush();
  if (!out) throw DatasetError("write failed for " + path.string(), 0);
}

Corpus read_corpus(std::istream& in, const std::string& source) {
  Corpus corpus;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (blank(line)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DatasetError(std::string("malformed JSON: ") + e.what(), number, source);
    }
    if (!obj.is_object()) throw DatasetError("record must be a JSON object", number, source);
    if (obj.contains("provenance") && !obj.contains("regex")) continue;
    CorpusExample ex;
    ex.regex = field(obj, "regex", number, source);
    ex.synthetic = field(obj, "synthetic", number, source);
    if (auto it = obj.find("paraphrase"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) throw DatasetError("key \"paraphrase\" must be a string or null", number, source);
      ex.paraphrase = it->get<std::string>();
    }
    corpus.push_back(std::move(ex));
  }
  if (in.bad()) throw DatasetError("read failed", 0, source);
  return corpus;
}

Corpus read_corpus_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_corpus(in, path.string());
}

std::optional<std::string> read_provenance_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    auto obj = ordered_json::parse(line, nullptr, false);
    if (obj.is_object() && obj.contains("provenance")) return obj["provenance"].dump();
    return std::nullopt;
  }
  return std::nullopt;
}

Corpus read_kb13(std::istream& in, const std::string& source) {
  Corpus corpus;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw DatasetError("expected description<TAB>regex", number, source);
    std::string description = line.substr(0, tab);
    std::string regex = line.substr(tab + 1);
    if (regex.find('\t') != std::string::npos) throw DatasetError("more than two columns", number, source);
    if (blank(description) || blank(regex)) throw DatasetError("empty column", number, source);
    corpus.push_back({std::move(regex), std::move(description), std::nullopt});
  }
  return corpus;
}

Corpus read_kb13_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_kb13(in, path.string());
}

}  // namespace deepregex
