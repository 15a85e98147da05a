#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sciclass/config.hpp"
#include "sciclass/ensemble.hpp"
#include "sciclass/eval.hpp"
#include "sciclass/lda.hpp"
#include "sciclass/softmax.hpp"
#include "sciclass/tfidf.hpp"

namespace sciclass {

// One trained sub-system in a single self-contained file: the classifier
// head plus whatever feature machinery the model id calls for, and an echo
// of the text preprocessing it was trained under.
struct ModelArtifact {
  std::string model_id;
  SoftmaxModel head;
  TextprepConfig textprep;
  std::optional<TfidfModel> tfidf;      // m3_sentence, m4_tfidf_lr
  std::optional<LdaModel> lda;          // m2_embed_lda
  std::size_t embedding_dim = 0;        // m1_embed, m2_embed_lda
  AggregationConfig sentence;           // m3_sentence
};

void save_model_artifact(const ModelArtifact& artifact,
                         const std::filesystem::path& path);
ModelArtifact load_model_artifact(const std::filesystem::path& path);

std::filesystem::path model_path(const RunConfig& config,
                                 const std::string& model_id);
std::filesystem::path train_log_path(const RunConfig& config,
                                     const std::string& model_id);
std::filesystem::path predictions_path(const RunConfig& config,
                                       const std::string& model_id,
                                       const std::string& split);
std::filesystem::path probabilities_path(const RunConfig& config,
                                         const std::string& model_id,
                                         const std::string& split);

struct TrainResult {
  std::filesystem::path model_file;
  std::filesystem::path log_file;
  std::string stop_reason;
  std::size_t iterations = 0;
  double final_loss = 0.0;
  std::size_t train_examples = 0;   // documents, or sentences for m3
  std::size_t feature_dimension = 0;
};

// Trains one sub-system on the train split and writes its artifact and a
// training log under config.output_dir.
TrainResult train_model(const RunConfig& config, const std::string& model_id);

struct PredictResult {
  std::filesystem::path predictions_file;   // doc_id <TAB> class code
  std::filesystem::path probabilities_file; // doc_id <TAB> p per class
  std::size_t documents = 0;
};

PredictResult predict_model(const RunConfig& config,
                            const std::string& model_id,
                            const std::string& split);

struct EnsembleResult {
  std::filesystem::path output_file;
  std::size_t documents = 0;
  std::size_t ties = 0;
};

// Majority-votes the given prediction files (model name = file stem) and
// writes doc_id, class code, max votes, tie flag.
EnsembleResult ensemble_predictions(
    const RunConfig& config,
    const std::vector<std::filesystem::path>& prediction_files);

struct EvaluateResult {
  EvalReport report;
  std::string table;
  std::filesystem::path json_file;
};

// Gold may be a corpus file (TSV/CSV/JSONL) or a prediction TSV; the
// prediction file is always a TSV whose first two columns are doc id and
// class code. The JSON report lands next to the prediction file unless an
// explicit path is given.
EvaluateResult evaluate_files(
    const std::filesystem::path& gold_file,
    const std::filesystem::path& prediction_file,
    const std::optional<std::filesystem::path>& json_out = std::nullopt);

// Prediction TSV helpers; extra columns beyond the first two are ignored
// on load, so ensemble output evaluates directly.
PredictionMap load_prediction_tsv(const std::filesystem::path& path);

std::string describe_model(const std::filesystem::path& model_file);

}  // namespace sciclass
