#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sciclass/label.hpp"

namespace sciclass {

struct Document {
  std::string id;
  std::string text;  // non-empty after whitespace trim
  std::optional<ClassLabel> label;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::string split_name;  // one of: train, validation, test
  std::vector<Document> documents;

  bool operator==(const Corpus&) const = default;
};

enum class CorpusFormat { Tsv, Csv, Jsonl };

// Parses "tsv" / "csv" / "jsonl".
std::optional<CorpusFormat> corpus_format_from_name(const std::string& name);

// Loads and validates a corpus file. Documents keep file order. Train and
// validation splits must be fully labeled; test rows may omit the label.
// Throws DataError citing the offending line / value on malformed rows,
// unknown label codes, duplicate ids, empty text, or an empty file.
Corpus load_corpus(const std::string& path, CorpusFormat format,
                   const std::string& split_name);

void save_corpus(const Corpus& corpus, const std::string& path,
                 CorpusFormat format);

// Per-class document counts; counts sum to corpus size.
// Throws DataError if any document is unlabeled.
std::map<ClassLabel, std::size_t> class_counts(const Corpus& corpus);

}  // namespace sciclass
