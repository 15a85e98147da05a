#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sciclass/config.hpp"
#include "sciclass/errors.hpp"
#include "sciclass/pipeline.hpp"

namespace {

sciclass::RunConfig load_config(const std::string& config_path,
                                const std::string& embeddings_override) {
  sciclass::RunConfig config = sciclass::load_run_config(config_path);
  if (!embeddings_override.empty())
    config.embeddings_path = embeddings_override;
  sciclass::validate_run_config_paths(config);
  return config;
}

int run(int argc, char** argv) {
  CLI::App app{"Seven-class abstract classification toolkit"};
  app.require_subcommand(1);

  std::string config_path, model_id, split = "validation";
  std::string embeddings_override, gold_file, pred_file, json_out, model_file;
  std::vector<std::string> prediction_files;

  CLI::App* train = app.add_subcommand("train", "Train one sub-model");
  train->add_option("--config", config_path, "Run config file")->required();
  train
      ->add_option("--model", model_id,
                   "m1_embed, m2_embed_lda, m3_sentence, or m4_tfidf_lr")
      ->required();
  train->add_option("--embeddings", embeddings_override,
                    "Embedding table, overrides run.embeddings");

  CLI::App* predict =
      app.add_subcommand("predict", "Score a split with a trained model");
  predict->add_option("--config", config_path, "Run config file")->required();
  predict->add_option("--model", model_id, "Model id")->required();
  predict->add_option("--split", split, "train, validation, or test");
  predict->add_option("--embeddings", embeddings_override,
                      "Embedding table, overrides run.embeddings");

  CLI::App* ensemble =
      app.add_subcommand("ensemble", "Majority-vote prediction files");
  ensemble->add_option("--config", config_path, "Run config file")->required();
  ensemble
      ->add_option("predictions", prediction_files,
                   "Two or more prediction TSV files")
      ->required()
      ->expected(-2);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score predictions against gold labels");
  evaluate->add_option("--gold", gold_file, "Corpus file or prediction TSV")
      ->required();
  evaluate->add_option("--pred", pred_file, "Prediction TSV")->required();
  evaluate->add_option("--json", json_out,
                       "Report path (default: <pred>.eval.json)");

  CLI::App* inspect =
      app.add_subcommand("inspect-model", "Summarize a model file");
  inspect->add_option("model", model_file, "Model JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (train->parsed()) {
    const sciclass::RunConfig config =
        load_config(config_path, embeddings_override);
    const sciclass::TrainResult result =
        sciclass::train_model(config, model_id);
    std::cout << "trained " << model_id << " on " << result.train_examples
              << " examples (" << result.feature_dimension << " features); "
              << result.stop_reason << " after " << result.iterations
              << " iterations, final loss " << result.final_loss << "\n";
    std::cout << "model: " << result.model_file.string() << "\n";
    std::cout << "log:   " << result.log_file.string() << "\n";
  } else if (predict->parsed()) {
    if (split != "train" && split != "validation" && split != "test")
      throw sciclass::ConfigError("unknown split name \"" + split + "\"");
    const sciclass::RunConfig config =
        load_config(config_path, embeddings_override);
    const sciclass::PredictResult result =
        sciclass::predict_model(config, model_id, split);
    std::cout << "predicted " << result.documents << " documents\n";
    std::cout << "classes:       " << result.predictions_file.string() << "\n";
    std::cout << "probabilities: " << result.probabilities_file.string()
              << "\n";
  } else if (ensemble->parsed()) {
    const sciclass::RunConfig config = load_config(config_path, "");
    std::vector<std::filesystem::path> files(prediction_files.begin(),
                                             prediction_files.end());
    const sciclass::EnsembleResult result =
        sciclass::ensemble_predictions(config, files);
    std::cout << "ensembled " << files.size() << " models over "
              << result.documents << " documents; " << result.ties
              << " ties broken\n";
    std::cout << "decisions: " << result.output_file.string() << "\n";
  } else if (evaluate->parsed()) {
    std::optional<std::filesystem::path> json_path;
    if (!json_out.empty()) json_path = json_out;
    const sciclass::EvaluateResult result =
        sciclass::evaluate_files(gold_file, pred_file, json_path);
    std::cout << result.table;
    std::cout << "report: " << result.json_file.string() << "\n";
  } else if (inspect->parsed()) {
    std::cout << sciclass::describe_model(model_file);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sciclass::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const sciclass::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
