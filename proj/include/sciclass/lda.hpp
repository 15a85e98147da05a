#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sciclass/textprep.hpp"

namespace sciclass {

struct LdaConfig {
  std::size_t num_topics = 50;
  std::optional<double> alpha;  // symmetric doc-topic prior; unset = 50/K
  double beta = 0.01;           // symmetric topic-term prior
  std::size_t train_iterations = 1000;
  std::size_t infer_iterations = 100;
  std::size_t burn_in = 200;  // must stay below train_iterations
  std::uint64_t seed = 0;
};

struct LdaModel {
  LdaConfig config;  // alpha resolved
  double alpha = 1.0;
  std::vector<std::string> vocab;  // index -> term, lexicographic
  std::unordered_map<std::string, std::uint32_t> vocab_index;
  std::vector<std::int64_t> topic_term_counts;  // num_topics x vocab size
  std::vector<std::int64_t> topic_totals;       // per topic

  std::size_t num_topics() const { return config.num_topics; }
  std::size_t vocab_size() const { return vocab.size(); }
  std::int64_t count(std::size_t k, std::size_t w) const {
    return topic_term_counts[k * vocab.size() + w];
  }
};

// Observer for the training loop. on_sweep fires after every full sweep;
// log_likelihood is filled only on sweeps hitting loglik_interval (NaN
// otherwise) because evaluating it costs O(K*V).
struct LdaSweepView {
  std::size_t sweep;  // 1-based
  const LdaModel& model;
  std::span<const std::int64_t> doc_topic_counts;  // docs x num_topics
  double log_likelihood;
};
struct LdaFitHooks {
  std::size_t loglik_interval = 0;  // 0 = never evaluate
  std::function<void(const LdaSweepView&)> on_sweep;
};

// Collapsed Gibbs sampling from the config seed. Tokens are taken as-is
// (callers normalize first); the vocabulary is the sorted set of unigrams.
LdaModel lda_fit(std::span<const TokenizedDoc> docs, const LdaConfig& config,
                 const LdaFitHooks* hooks = nullptr);

// Topic proportions for one document against a fitted model. Samples only
// in-vocabulary tokens with topic_term_counts held fixed, seeded from
// (model seed, doc id); theta averages the post-burn-in sweep counts.
// A document with no in-vocabulary tokens gets the uniform vector.
std::vector<double> lda_infer(const LdaModel& model, const TokenizedDoc& doc);

// Joint collapsed log-likelihood log p(w, z) of the current count state.
double lda_log_likelihood(const LdaModel& model,
                          std::span<const std::int64_t> doc_topic_counts,
                          std::size_t num_docs);

std::string lda_to_json(const LdaModel& model);
LdaModel lda_from_json(const std::string& text);

}  // namespace sciclass
