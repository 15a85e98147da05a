#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "sciclass/corpus.hpp"
#include "sciclass/ensemble.hpp"
#include "sciclass/lda.hpp"
#include "sciclass/sentence.hpp"
#include "sciclass/softmax.hpp"

namespace sciclass {

inline constexpr const char* kModelIds[] = {"m1_embed", "m2_embed_lda",
                                            "m3_sentence", "m4_tfidf_lr"};
bool is_model_id(const std::string& id);

struct TextprepConfig {
  bool stopwords = true;           // drop stopwords during normalization
  std::string stopword_file;       // empty = builtin list
  bool stem = false;
};

struct TfidfParams {
  std::size_t min_n = 1;
  std::size_t max_n = 4;
  double min_df_fraction = 0.0005;
};

// Per-head softmax settings; unset fields fall back to [softmax] and then
// to builtin defaults.
struct HeadSettings {
  std::optional<std::size_t> max_iterations;
  std::optional<double> l2_lambda;
  std::optional<double> tolerance;
  std::optional<double> learning_rate;
  std::optional<double> dropout_rate;
};

struct RunConfig {
  std::map<std::string, std::filesystem::path> corpus_paths;  // by split name
  CorpusFormat corpus_format = CorpusFormat::Tsv;
  TextprepConfig textprep;
  TfidfParams tfidf;
  LdaConfig lda;  // seed ignored; fan-out fills it
  HeadSettings softmax_base;
  std::map<std::string, HeadSettings> softmax_overrides;  // by model id
  AggregationConfig sentence;
  TieRule tie_rule = TieRule::random_uniform;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  std::filesystem::path embeddings_path;  // empty = none attached

  // Resolved head settings for one model, seed fanned out from the run
  // seed. m2_embed_lda defaults to dropout 0.3 unless configured.
  SoftmaxTrainConfig head_config(const std::string& model_id) const;
  LdaConfig lda_config() const;      // with the fanned-out seed
  std::uint64_t ensemble_seed() const;
};

// Parses the TOML-like config text (sections, key = value, # comments;
// strings, integers, floats, booleans). Unknown sections or keys, type
// mismatches, and out-of-range values raise ConfigError with the line.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

// Existence checks for every referenced path. Raises ConfigError.
void validate_run_config_paths(const RunConfig& config);

}  // namespace sciclass
