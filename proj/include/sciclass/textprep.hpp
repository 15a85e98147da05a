#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace sciclass {

struct TokenizedDoc {
  std::string doc_id;
  std::vector<std::string> tokens;
};

struct Sentence {
  std::string doc_id;
  std::size_t index = 0;   // ordinal within the document, from 0
  std::string text;
  std::size_t token_count = 0;  // |tokenize(text)|

  bool operator==(const Sentence&) const = default;
};

using StopwordSet = std::unordered_set<std::string>;

// Splits on Unicode whitespace, then strips leading/trailing ASCII
// punctuation from each piece; empty results are dropped.
std::vector<std::string> tokenize(std::string_view text);

// ASCII case folding; bytes outside A-Z are left untouched.
std::string lowercase(std::string_view token);

// Lowercases, drops stopwords, then applies Porter stemming when `stem`
// is set. The stopword set must already be lowercase. Order of surviving
// tokens is preserved.
std::vector<std::string> normalize(const std::vector<std::string>& tokens,
                                   const StopwordSet& stopwords, bool stem);

// Replaces newlines with spaces, then breaks after '.', '!' or '?' that is
// followed by whitespace and an ASCII uppercase letter or digit.
// Abbreviations get no special handling. Text without a boundary yields a
// single sentence; blank text yields none.
std::vector<Sentence> split_sentences(const std::string& doc_id,
                                      std::string_view text);

}  // namespace sciclass
