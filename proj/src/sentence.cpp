#include "sciclass/sentence.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "sciclass/errors.hpp"

namespace sciclass {

std::vector<SentenceExample> build_sentence_trainset(
    const Corpus& corpus, const AggregationConfig& cfg) {
  if (cfg.train_min_tokens < 1 || cfg.score_min_tokens < 1)
    throw std::invalid_argument("sentence thresholds must be >= 1");
  std::vector<SentenceExample> out;
  for (const Document& doc : corpus.documents) {
    if (!doc.label)
      throw DataError("sentence trainset: document \"" + doc.id +
                      "\" has no label");
    for (Sentence& sent : split_sentences(doc.id, doc.text)) {
      if (sent.token_count < cfg.train_min_tokens) continue;
      out.push_back(SentenceExample{doc.id, std::move(sent), *doc.label});
    }
  }
  return out;
}

AggregateResult aggregate(std::span<const std::vector<double>> dists,
                          AggregationMode mode) {
  if (dists.empty())
    throw DataError("sentence aggregate: no sentence distributions");
  const std::size_t K = dists.front().size();
  for (const std::vector<double>& p : dists) {
    if (p.size() != K)
      throw std::invalid_argument("sentence aggregate: ragged distributions");
    for (double v : p) {
      assert(v > 0.0);  // softmax output is strictly positive
      if (!(v > 0.0))
        throw std::invalid_argument(
            "sentence aggregate: nonpositive probability");
    }
  }

  AggregateResult result;
  result.scores.assign(K, 0.0);
  if (mode == AggregationMode::log_sum) {
    for (const std::vector<double>& p : dists)
      for (std::size_t k = 0; k < K; ++k) result.scores[k] += std::log(p[k]);
  } else {
    for (const std::vector<double>& p : dists)
      for (std::size_t k = 0; k < K; ++k) result.scores[k] += p[k];
    for (double& s : result.scores) s /= static_cast<double>(dists.size());
  }
  result.chosen = argmax_class(result.scores);
  return result;
}

std::vector<double> score_abstract(const SoftmaxModel& head,
                                   const SentenceScoringInput& input,
                                   AggregationMode mode) {
  std::vector<std::vector<double>> dists;
  if (input.sentence_features.empty()) {
    dists.push_back(predict_proba(head, input.whole_abstract));
  } else {
    dists.reserve(input.sentence_features.size());
    for (const SparseVector& x : input.sentence_features)
      dists.push_back(predict_proba(head, x));
  }
  const AggregateResult agg = aggregate(dists, mode);
  if (mode == AggregationMode::prob_mean) return agg.scores;
  return stable_softmax(agg.scores);
}

}  // namespace sciclass
