#include "sciclass/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

#include "sciclass/errors.hpp"

namespace sciclass {

using nlohmann::json;

std::vector<std::string> ngrams(std::span<const std::string> tokens,
                                std::size_t min_n, std::size_t max_n) {
  if (min_n < 1) throw std::invalid_argument("min_n must be >= 1");
  if (max_n < min_n) throw std::invalid_argument("max_n must be >= min_n");
  std::vector<std::string> out;
  for (std::size_t n = min_n; n <= max_n; ++n) {
    if (tokens.size() < n) break;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (std::size_t k = 1; k < n; ++k) {
        gram += ' ';
        gram += tokens[i + k];
      }
      out.push_back(std::move(gram));
    }
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> sorted_terms, std::size_t min_n,
                       std::size_t max_n, double min_df_fraction)
    : terms_(std::move(sorted_terms)),
      min_n_(min_n),
      max_n_(max_n),
      min_df_fraction_(min_df_fraction) {
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i)
    index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
  if (index_.size() != terms_.size())
    throw std::invalid_argument("duplicate vocabulary term");
}

std::int64_t Vocabulary::index_of(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

TfidfModel tfidf_fit(std::span<const TokenizedDoc> docs, std::size_t min_n,
                     std::size_t max_n, double min_df_fraction) {
  if (docs.empty()) throw DataError("tfidf fit: empty document sequence");
  if (min_n < 1 || max_n < min_n)
    throw std::invalid_argument("invalid n-gram range");
  if (min_df_fraction <= 0.0 || min_df_fraction >= 1.0)
    throw std::invalid_argument("min_df_fraction must be in (0,1)");

  const std::size_t doc_count = docs.size();
  std::unordered_map<std::string, std::size_t> df;
  std::unordered_set<std::string> seen_in_doc;
  for (const TokenizedDoc& doc : docs) {
    seen_in_doc.clear();
    for (std::string& gram : ngrams(doc.tokens, min_n, max_n))
      seen_in_doc.insert(std::move(gram));
    for (const std::string& gram : seen_in_doc) ++df[gram];
  }

  std::vector<std::string> kept;
  for (const auto& [term, count] : df) {
    const double fraction =
        static_cast<double>(count) / static_cast<double>(doc_count);
    if (fraction >= min_df_fraction) kept.push_back(term);
  }
  if (kept.empty()) throw DataError("tfidf fit: empty vocabulary");
  std::sort(kept.begin(), kept.end());

  TfidfModel model;
  model.corpus_doc_count = doc_count;
  model.idf.reserve(kept.size());
  for (const std::string& term : kept) {
    const double df_count = static_cast<double>(df.at(term));
    model.idf.push_back(
        std::log((1.0 + static_cast<double>(doc_count)) / (1.0 + df_count)) +
        1.0);
  }
  model.vocabulary =
      Vocabulary(std::move(kept), min_n, max_n, min_df_fraction);
  return model;
}

SparseVector tfidf_transform(const TfidfModel& model, const TokenizedDoc& doc) {
  std::unordered_map<std::uint32_t, double> counts;
  for (const std::string& gram :
       ngrams(doc.tokens, model.vocabulary.min_n(), model.vocabulary.max_n())) {
    const std::int64_t index = model.vocabulary.index_of(gram);
    if (index >= 0) counts[static_cast<std::uint32_t>(index)] += 1.0;
  }
  std::vector<SparseVector::Entry> entries;
  entries.reserve(counts.size());
  for (const auto& [index, count] : counts)
    entries.emplace_back(index, count * model.idf[index]);
  std::sort(entries.begin(), entries.end());
  SparseVector vec(model.vocabulary.size(), std::move(entries));
  vec.l2_normalize();
  return vec;
}

std::string tfidf_to_json(const TfidfModel& model) {
  json doc;
  doc["format"] = "sciclass.tfidf";
  doc["version"] = 1;
  doc["min_n"] = model.vocabulary.min_n();
  doc["max_n"] = model.vocabulary.max_n();
  doc["min_df_fraction"] = model.vocabulary.min_df_fraction();
  doc["corpus_doc_count"] = model.corpus_doc_count;
  doc["terms"] = model.vocabulary.terms();  // index order == lexicographic
  doc["idf"] = model.idf;
  return doc.dump();
}

TfidfModel tfidf_from_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw DataError("tfidf model: invalid JSON");
  if (doc.value("format", "") != "sciclass.tfidf")
    throw DataError("tfidf model: unexpected format tag");
  if (doc.value("version", 0) != 1)
    throw DataError("tfidf model: unsupported version");
  TfidfModel model;
  auto terms = doc.at("terms").get<std::vector<std::string>>();
  if (!std::is_sorted(terms.begin(), terms.end()))
    throw DataError("tfidf model: terms not in lexicographic order");
  model.vocabulary =
      Vocabulary(std::move(terms), doc.at("min_n").get<std::size_t>(),
                 doc.at("max_n").get<std::size_t>(),
                 doc.at("min_df_fraction").get<double>());
  model.idf = doc.at("idf").get<std::vector<double>>();
  model.corpus_doc_count = doc.at("corpus_doc_count").get<std::size_t>();
  if (model.idf.size() != model.vocabulary.size())
    throw DataError("tfidf model: idf length mismatch");
  for (double w : model.idf)
    if (!(w >= 1.0)) throw DataError("tfidf model: idf weight below 1");
  return model;
}

}  // namespace sciclass
