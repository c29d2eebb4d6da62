#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "deepregex/corpus.hpp"

namespace deepregex {

/// Malformed input. line() is 1-based, 0 when the problem is not tied to a line.
class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& what, std::size_t line, const std::string& source = {})
      : std::runtime_error((source.empty() ? "" : source + ": ") +
                           (line == 0 ? what : "line " + std::to_string(line) + ": " + what)),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One JSON object per line: {"regex":..,"synthetic":..,"paraphrase":..|null}.
/// If provenance is given (a serialized JSON object) it is written first as
/// {"provenance":<object>}; readers skip that line.
void write_corpus(std::ostream& out, const Corpus& corpus, const std::optional<std::string>& provenance = {});
void write_corpus_file(const std::filesystem::path& path, const Corpus& corpus,
                       const std::optional<std::string>& provenance = {});

/// Blank lines are ignored. Regex strings are not validated here.
/// `source` names the input in error messages.
Corpus read_corpus(std::istream& in, const std::string& source = {});
Corpus read_corpus_file(const std::filesystem::path& path);

/// Returns the provenance object (serialized) from the first line, if any.
std::optional<std::string> read_provenance_file(const std::filesystem::path& path);

/// KB13 layout: `description<TAB>regex` per line; description becomes synthetic.
Corpus read_kb13(std::istream& in, const std::string& source = {});
Corpus read_kb13_file(const std::filesystem::path& path);

}  // namespace deepregex
