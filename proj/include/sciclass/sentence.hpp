#pragma once

#include <span>
#include <vector>

#include "sciclass/corpus.hpp"
#include "sciclass/label.hpp"
#include "sciclass/softmax.hpp"
#include "sciclass/textprep.hpp"

namespace sciclass {

enum class AggregationMode { log_sum, prob_mean };

struct AggregationConfig {
  std::size_t train_min_tokens = 10;  // sentence kept for training if >= this
  std::size_t score_min_tokens = 6;   // sentence kept for scoring if >= this
  AggregationMode mode = AggregationMode::log_sum;
};

struct SentenceExample {
  std::string parent_doc_id;
  Sentence sentence;
  ClassLabel label;  // inherited from the parent document
};

// Splits every abstract into sentences and keeps those meeting the training
// length threshold, labeled by their parent. May return an empty set; callers
// decide whether that is fatal.
std::vector<SentenceExample> build_sentence_trainset(
    const Corpus& corpus, const AggregationConfig& cfg);

struct AggregateResult {
  std::vector<double> scores;  // log-domain sums (log_sum) or mean probs
  int chosen = 0;              // argmax class index, ties to lowest
};

// Combines per-sentence class distributions for one abstract. log_sum:
// score[k] = sum of ln p_s[k]. prob_mean: score[k] = mean of p_s[k].
AggregateResult aggregate(std::span<const std::vector<double>> dists,
                          AggregationMode mode);

// Features for one abstract after the scoring-length filter. When no
// sentence survives, `whole_abstract` stands in as a single pseudo-sentence.
struct SentenceScoringInput {
  std::vector<SparseVector> sentence_features;
  SparseVector whole_abstract;
};

// Scores each surviving sentence with the head, aggregates, and returns a
// probability distribution over classes (softmax of log-sums, or the mean
// distribution under prob_mean).
std::vector<double> score_abstract(const SoftmaxModel& head,
                                   const SentenceScoringInput& input,
                                   AggregationMode mode);

}  // namespace sciclass
