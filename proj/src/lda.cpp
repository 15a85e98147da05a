#include "sciclass/lda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "sciclass/errors.hpp"
#include "sciclass/rng.hpp"

namespace sciclass {

using nlohmann::json;

namespace {

void check_config(const LdaConfig& config) {
  if (config.num_topics < 1)
    throw std::invalid_argument("lda: num_topics must be >= 1");
  if (config.alpha && *config.alpha <= 0.0)
    throw std::invalid_argument("lda: alpha must be positive");
  if (config.beta <= 0.0)
    throw std::invalid_argument("lda: beta must be positive");
  if (config.train_iterations < 1)
    throw std::invalid_argument("lda: train_iterations must be >= 1");
  if (config.burn_in >= config.train_iterations)
    throw std::invalid_argument("lda: burn_in must be < train_iterations");
}

double resolve_alpha(const LdaConfig& config) {
  return config.alpha.value_or(50.0 / static_cast<double>(config.num_topics));
}

std::size_t sample_index(Rng& rng, std::span<const double> weights,
                         double total) {
  const double u = rng.next_double() * total;
  double running = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    running += weights[k];
    if (u < running) return k;
  }
  return weights.size() - 1;  // guard against rounding at the top end
}

}  // namespace

double lda_log_likelihood(const LdaModel& model,
                          std::span<const std::int64_t> doc_topic_counts,
                          std::size_t num_docs) {
  const std::size_t K = model.num_topics();
  const std::size_t V = model.vocab_size();
  const double alpha = model.alpha;
  const double beta = model.config.beta;

  double ll = static_cast<double>(K) *
              (std::lgamma(static_cast<double>(V) * beta) -
               static_cast<double>(V) * std::lgamma(beta));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t w = 0; w < V; ++w)
      ll += std::lgamma(static_cast<double>(model.count(k, w)) + beta);
    ll -= std::lgamma(static_cast<double>(model.topic_totals[k]) +
                      static_cast<double>(V) * beta);
  }
  ll += static_cast<double>(num_docs) *
        (std::lgamma(static_cast<double>(K) * alpha) -
         static_cast<double>(K) * std::lgamma(alpha));
  for (std::size_t d = 0; d < num_docs; ++d) {
    std::int64_t doc_total = 0;
    for (std::size_t k = 0; k < K; ++k) {
      const std::int64_t n = doc_topic_counts[d * K + k];
      doc_total += n;
      ll += std::lgamma(static_cast<double>(n) + alpha);
    }
    ll -= std::lgamma(static_cast<double>(doc_total) +
                      static_cast<double>(K) * alpha);
  }
  return ll;
}

LdaModel lda_fit(std::span<const TokenizedDoc> docs, const LdaConfig& config,
                 const LdaFitHooks* hooks) {
  check_config(config);
  if (docs.empty()) throw DataError("lda fit: empty corpus");

  std::set<std::string> term_set;
  for (const TokenizedDoc& doc : docs)
    term_set.insert(doc.tokens.begin(), doc.tokens.end());
  if (term_set.empty()) throw DataError("lda fit: all documents are empty");

  LdaModel model;
  model.config = config;
  model.alpha = resolve_alpha(config);
  model.config.alpha = model.alpha;
  model.vocab.assign(term_set.begin(), term_set.end());
  model.vocab_index.reserve(model.vocab.size());
  for (std::size_t w = 0; w < model.vocab.size(); ++w)
    model.vocab_index.emplace(model.vocab[w], static_cast<std::uint32_t>(w));

  const std::size_t K = config.num_topics;
  const std::size_t V = model.vocab.size();
  const std::size_t D = docs.size();
  model.topic_term_counts.assign(K * V, 0);
  model.topic_totals.assign(K, 0);

  // Flatten the corpus into word-id streams with per-token topic assignments.
  std::vector<std::vector<std::uint32_t>> word_ids(D);
  std::vector<std::vector<std::uint32_t>> assignments(D);
  std::vector<std::int64_t> doc_topic(D * K, 0);

  Rng rng(config.seed);
  for (std::size_t d = 0; d < D; ++d) {
    word_ids[d].reserve(docs[d].tokens.size());
    for (const std::string& tok : docs[d].tokens)
      word_ids[d].push_back(model.vocab_index.at(tok));
    assignments[d].resize(word_ids[d].size());
    for (std::size_t i = 0; i < word_ids[d].size(); ++i) {
      const auto z = static_cast<std::uint32_t>(rng.next_below(K));
      assignments[d][i] = z;
      ++doc_topic[d * K + z];
      ++model.topic_term_counts[z * V + word_ids[d][i]];
      ++model.topic_totals[z];
    }
  }

  const double alpha = model.alpha;
  const double beta = config.beta;
  const double v_beta = static_cast<double>(V) * beta;
  std::vector<double> weights(K);

  for (std::size_t sweep = 1; sweep <= config.train_iterations; ++sweep) {
    for (std::size_t d = 0; d < D; ++d) {
      for (std::size_t i = 0; i < word_ids[d].size(); ++i) {
        const std::uint32_t w = word_ids[d][i];
        const std::uint32_t old_z = assignments[d][i];
        --doc_topic[d * K + old_z];
        --model.topic_term_counts[old_z * V + w];
        --model.topic_totals[old_z];

        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          const double weight =
              (static_cast<double>(doc_topic[d * K + k]) + alpha) *
              (static_cast<double>(model.topic_term_counts[k * V + w]) + beta) /
              (static_cast<double>(model.topic_totals[k]) + v_beta);
          weights[k] = weight;
          total += weight;
        }
        const auto new_z =
            static_cast<std::uint32_t>(sample_index(rng, weights, total));
        assignments[d][i] = new_z;
        ++doc_topic[d * K + new_z];
        ++model.topic_term_counts[new_z * V + w];
        ++model.topic_totals[new_z];
      }
    }
    if (hooks && hooks->on_sweep) {
      double ll = std::numeric_limits<double>::quiet_NaN();
      if (hooks->loglik_interval > 0 && sweep % hooks->loglik_interval == 0)
        ll = lda_log_likelihood(model, doc_topic, D);
      hooks->on_sweep(LdaSweepView{sweep, model, doc_topic, ll});
    }
  }
  return model;
}

std::vector<double> lda_infer(const LdaModel& model, const TokenizedDoc& doc) {
  const std::size_t K = model.num_topics();
  const double alpha = model.alpha;

  std::vector<std::uint32_t> word_ids;
  word_ids.reserve(doc.tokens.size());
  for (const std::string& tok : doc.tokens) {
    auto it = model.vocab_index.find(tok);
    if (it != model.vocab_index.end()) word_ids.push_back(it->second);
  }
  if (word_ids.empty())
    return std::vector<double>(K, 1.0 / static_cast<double>(K));

  const std::size_t V = model.vocab_size();
  const double beta = model.config.beta;
  const double v_beta = static_cast<double>(V) * beta;
  const double n_d = static_cast<double>(word_ids.size());

  Rng rng(derive_seed(model.config.seed, doc.doc_id));
  std::vector<std::uint32_t> assignments(word_ids.size());
  std::vector<std::int64_t> doc_topic(K, 0);
  for (std::size_t i = 0; i < word_ids.size(); ++i) {
    const auto z = static_cast<std::uint32_t>(rng.next_below(K));
    assignments[i] = z;
    ++doc_topic[z];
  }

  const std::size_t sweeps = model.config.infer_iterations;
  const std::size_t burn = std::min(model.config.burn_in, sweeps / 2);
  std::vector<double> accumulated(K, 0.0);
  std::size_t samples = 0;
  std::vector<double> weights(K);

  for (std::size_t sweep = 1; sweep <= sweeps; ++sweep) {
    for (std::size_t i = 0; i < word_ids.size(); ++i) {
      const std::uint32_t w = word_ids[i];
      const std::uint32_t old_z = assignments[i];
      --doc_topic[old_z];
      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double weight =
            (static_cast<double>(doc_topic[k]) + alpha) *
            (static_cast<double>(model.count(k, w)) + beta) /
            (static_cast<double>(model.topic_totals[k]) + v_beta);
        weights[k] = weight;
        total += weight;
      }
      const auto new_z =
          static_cast<std::uint32_t>(sample_index(rng, weights, total));
      assignments[i] = new_z;
      ++doc_topic[new_z];
    }
    if (sweep > burn) {
      for (std::size_t k = 0; k < K; ++k)
        accumulated[k] += static_cast<double>(doc_topic[k]);
      ++samples;
    }
  }

  std::vector<double> theta(K);
  const double denom = n_d + static_cast<double>(K) * alpha;
  if (samples == 0) {  // infer_iterations == 0: fall back to the init state
    for (std::size_t k = 0; k < K; ++k)
      theta[k] = (static_cast<double>(doc_topic[k]) + alpha) / denom;
  } else {
    for (std::size_t k = 0; k < K; ++k)
      theta[k] =
          (accumulated[k] / static_cast<double>(samples) + alpha) / denom;
  }
  return theta;
}

std::string lda_to_json(const LdaModel& model) {
  json doc;
  doc["format"] = "sciclass.lda";
  doc["version"] = 1;
  doc["config"] = {
      {"num_topics", model.config.num_topics},
      {"alpha", model.alpha},
      {"beta", model.config.beta},
      {"train_iterations", model.config.train_iterations},
      {"infer_iterations", model.config.infer_iterations},
      {"burn_in", model.config.burn_in},
      {"seed", model.config.seed},
  };
  doc["vocab"] = model.vocab;
  doc["topic_term_counts"] = model.topic_term_counts;
  doc["topic_totals"] = model.topic_totals;
  return doc.dump();
}

LdaModel lda_from_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw DataError("lda model: invalid JSON");
  if (doc.value("format", "") != "sciclass.lda")
    throw DataError("lda model: unexpected format tag");
  if (doc.value("version", 0) != 1)
    throw DataError("lda model: unsupported version");
  LdaModel model;
  const json& cfg = doc.at("config");
  model.config.num_topics = cfg.at("num_topics").get<std::size_t>();
  model.alpha = cfg.at("alpha").get<double>();
  model.config.alpha = model.alpha;
  model.config.beta = cfg.at("beta").get<double>();
  model.config.train_iterations = cfg.at("train_iterations").get<std::size_t>();
  model.config.infer_iterations = cfg.at("infer_iterations").get<std::size_t>();
  model.config.burn_in = cfg.at("burn_in").get<std::size_t>();
  model.config.seed = cfg.at("seed").get<std::uint64_t>();
  model.vocab = doc.at("vocab").get<std::vector<std::string>>();
  model.topic_term_counts =
      doc.at("topic_term_counts").get<std::vector<std::int64_t>>();
  model.topic_totals = doc.at("topic_totals").get<std::vector<std::int64_t>>();

  const std::size_t K = model.config.num_topics;
  const std::size_t V = model.vocab.size();
  if (model.topic_term_counts.size() != K * V ||
      model.topic_totals.size() != K)
    throw DataError("lda model: shape mismatch");
  if (!std::is_sorted(model.vocab.begin(), model.vocab.end()))
    throw DataError("lda model: vocab not in lexicographic order");
  for (std::size_t k = 0; k < K; ++k) {
    std::int64_t row = 0;
    for (std::size_t w = 0; w < V; ++w) {
      if (model.topic_term_counts[k * V + w] < 0)
        throw DataError("lda model: negative count");
      row += model.topic_term_counts[k * V + w];
    }
    if (row != model.topic_totals[k])
      throw DataError("lda model: topic totals inconsistent");
  }
  model.vocab_index.reserve(V);
  for (std::size_t w = 0; w < V; ++w)
    model.vocab_index.emplace(model.vocab[w], static_cast<std::uint32_t>(w));
  return model;
}

}  // namespace sciclass
