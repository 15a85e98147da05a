#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sciclass/sparse.hpp"
#include "sciclass/textprep.hpp"

namespace sciclass {

// All contiguous token windows of length min_n..max_n, joined by a single
// space, grouped by length in document order.
std::vector<std::string> ngrams(std::span<const std::string> tokens,
                                std::size_t min_n, std::size_t max_n);

// N-gram to feature-index table. Indices are assigned lexicographically
// over the n-gram text, 0..size-1 with no gaps.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Terms must be sorted and unique.
  Vocabulary(std::vector<std::string> sorted_terms, std::size_t min_n,
             std::size_t max_n, double min_df_fraction);

  std::size_t size() const { return terms_.size(); }
  std::size_t min_n() const { return min_n_; }
  std::size_t max_n() const { return max_n_; }
  double min_df_fraction() const { return min_df_fraction_; }
  const std::vector<std::string>& terms() const { return terms_; }

  // Returns the feature index, or -1 when out of vocabulary.
  std::int64_t index_of(const std::string& term) const;

 private:
  std::vector<std::string> terms_;  // index -> term, lexicographic
  std::unordered_map<std::string, std::uint32_t> index_;
  std::size_t min_n_ = 1;
  std::size_t max_n_ = 1;
  double min_df_fraction_ = 0.0;
};

struct TfidfModel {
  Vocabulary vocabulary;
  std::vector<double> idf;  // per index; every weight >= 1
  std::size_t corpus_doc_count = 0;
};

// Builds the vocabulary from every n-gram whose document frequency
// (fraction of docs containing it at least once) is >= min_df_fraction,
// and computes idf[t] = ln((1 + N) / (1 + df_count(t))) + 1.
// Throws DataError on an empty doc sequence or an empty vocabulary.
TfidfModel tfidf_fit(std::span<const TokenizedDoc> docs, std::size_t min_n,
                     std::size_t max_n, double min_df_fraction);

// Raw weight count(t) * idf[t], then L2-normalized. Out-of-vocabulary
// n-grams are ignored; a doc with no in-vocabulary term maps to the empty
// vector of the model's dimension.
SparseVector tfidf_transform(const TfidfModel& model, const TokenizedDoc& doc);

std::string tfidf_to_json(const TfidfModel& model);
TfidfModel tfidf_from_json(const std::string& text);

}  // namespace sciclass
