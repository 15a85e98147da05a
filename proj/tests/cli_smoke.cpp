// End-to-end exercise of the command-line tool as a subprocess: exit codes
// for success, usage errors (1) and data errors (2), plus a full
// train/predict/ensemble/evaluate loop over the bundled fixtures.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

int run(const std::string& args) {
  const std::string cmd =
      std::string(SCICLASS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return 127;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return 128;
}

void expect(int want, const std::string& args, const std::string& what) {
  const int got = run(args);
  if (got == want) {
    std::cout << "PASS " << what << "\n";
  } else {
    std::cout << "FAIL " << what << " (expected exit " << want << ", got "
              << got << "): sciclass " << args << "\n";
    ++failures;
  }
}

void check(bool ok, const std::string& what) {
  std::cout << (ok ? "PASS " : "FAIL ") << what << "\n";
  if (!ok) ++failures;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

int main() {
  const fs::path fixtures = SCICLASS_FIXTURE_DIR;
  const fs::path dir =
      fs::temp_directory_path() / ("sciclass_cli_" + std::to_string(getpid()));
  fs::create_directories(dir);
  const fs::path out_dir = dir / "out";

  const std::string common =
      "[corpus]\n"
      "train = \"" + (fixtures / "fixture_train.tsv").string() + "\"\n"
      "validation = \"" + (fixtures / "fixture_valid.tsv").string() + "\"\n"
      "[tfidf]\nmin_df_fraction = 0.01\n"
      "[lda]\nnum_topics = 8\ntrain_iterations = 80\nburn_in = 20\n"
      "infer_iterations = 40\n"
      "[run]\nseed = 7\noutput_dir = \"" + out_dir.string() + "\"\n";
  const std::string embeddings_line =
      "embeddings = \"" + (fixtures / "fixture_embeddings.tsv").string() +
      "\"\n";

  const fs::path config = dir / "run.toml";
  write(config, common + embeddings_line);
  const std::string cfg = " --config " + config.string();

  // Usage-level behavior.
  expect(0, "--help", "help exits clean");
  expect(0, "train --help", "subcommand help exits clean");
  expect(1, "", "missing subcommand is a usage error");
  expect(1, "train", "train without --config is a usage error");
  expect(1, "no-such-command", "unknown subcommand is a usage error");
  expect(1, "train" + cfg + " --model m5_wrong",
         "unknown model id is rejected");
  expect(1, "train --config " + (dir / "absent.toml").string() +
             " --model m4_tfidf_lr",
         "missing config file is a config error");

  const fs::path bad_config = dir / "bad.toml";
  write(bad_config, "[tfidf]\nmystery_knob = 3\n");
  expect(1, "train --config " + bad_config.string() + " --model m4_tfidf_lr",
         "unknown config key is a config error");

  // Training all four models.
  expect(0, "train" + cfg + " --model m4_tfidf_lr", "m4 trains");
  expect(0, "train" + cfg + " --model m1_embed", "m1 trains");
  expect(0, "train" + cfg + " --model m2_embed_lda", "m2 trains");
  expect(0, "train" + cfg + " --model m3_sentence", "m3 trains");

  const fs::path no_embed_config = dir / "no_embed.toml";
  write(no_embed_config, common);
  expect(1, "train --config " + no_embed_config.string() +
             " --model m2_embed_lda",
         "m2 without embeddings is a config error");

  const fs::path short_config = dir / "short.toml";
  write(short_config,
        "[corpus]\ntrain = \"" + (fixtures / "fixture_short.tsv").string() +
            "\"\n[tfidf]\nmin_df_fraction = 0.01\n[run]\noutput_dir = \"" +
            (dir / "short_out").string() + "\"\n");
  expect(2, "train --config " + short_config.string() + " --model m3_sentence",
         "all-short corpus is a data error for the sentence model");

  const fs::path bad_corpus = dir / "bad_corpus.tsv";
  write(bad_corpus, "x1\tZZ\tsome text here\n");
  const fs::path bad_corpus_config = dir / "bad_corpus.toml";
  write(bad_corpus_config,
        "[corpus]\ntrain = \"" + bad_corpus.string() +
            "\"\n[run]\noutput_dir = \"" + (dir / "bc_out").string() + "\"\n");
  expect(2, "train --config " + bad_corpus_config.string() +
             " --model m4_tfidf_lr",
         "unknown label code is a data error");

  // Prediction.
  expect(0, "predict" + cfg + " --model m4_tfidf_lr", "m4 predicts");
  expect(0, "predict" + cfg + " --model m1_embed", "m1 predicts");
  expect(0, "predict" + cfg + " --model m2_embed_lda", "m2 predicts");
  expect(0, "predict" + cfg + " --model m3_sentence", "m3 predicts");
  expect(0, "predict" + cfg + " --model m4_tfidf_lr --split train",
         "prediction on the train split works");
  expect(1, "predict" + cfg + " --model m4_tfidf_lr --split test",
         "predicting a split the config lacks is a config error");

  const fs::path fresh_config = dir / "fresh.toml";
  write(fresh_config, common + embeddings_line);
  // Same corpus, untouched output directory: nothing has been trained there.
  {
    std::string text = slurp(fresh_config);
    const std::string needle = out_dir.string();
    text.replace(text.find(needle), needle.size(),
                 (dir / "fresh_out").string());
    write(fresh_config, text);
  }
  expect(2, "predict --config " + fresh_config.string() + " --model m4_tfidf_lr",
         "predicting before training is a data error");

  // Ensemble and evaluation.
  const fs::path preds = out_dir / "predictions";
  const std::string p1 = (preds / "m1_embed.validation.tsv").string();
  const std::string p2 = (preds / "m2_embed_lda.validation.tsv").string();
  const std::string p3 = (preds / "m3_sentence.validation.tsv").string();
  const std::string p4 = (preds / "m4_tfidf_lr.validation.tsv").string();
  expect(0, "ensemble" + cfg + " " + p1 + " " + p2 + " " + p3 + " " + p4,
         "four-model ensemble runs");
  expect(1, "ensemble" + cfg + " " + p4, "one-file ensemble is a usage error");
  check(fs::exists(out_dir / "ensemble.tsv"), "ensemble output file exists");

  const std::string gold = (fixtures / "fixture_valid.tsv").string();
  expect(0, "evaluate --gold " + gold + " --pred " + p4, "m4 evaluates");
  expect(0,
         "evaluate --gold " + gold + " --pred " +
             (out_dir / "ensemble.tsv").string() + " --json " +
             (dir / "ens_eval.json").string(),
         "ensemble evaluates with an explicit json path");
  check(fs::exists(dir / "ens_eval.json"), "evaluation json lands where asked");
  expect(2, "evaluate --gold " + gold + " --pred " +
             (dir / "absent.tsv").string(),
         "missing prediction file is a data error");

  // Model inspection.
  const fs::path m2_model = out_dir / "models" / "m2_embed_lda.json";
  expect(0, "inspect-model " + m2_model.string(), "inspect-model prints");
  expect(2, "inspect-model " + (dir / "absent.json").string(),
         "inspecting a missing model is a data error");

  // Retraining must reproduce the artifact byte for byte.
  const fs::path m4_model = out_dir / "models" / "m4_tfidf_lr.json";
  const std::string before = slurp(m4_model);
  expect(0, "train" + cfg + " --model m4_tfidf_lr", "m4 retrains");
  check(!before.empty() && before == slurp(m4_model),
        "retraining writes a byte-identical artifact");

  std::error_code ec;
  fs::remove_all(dir, ec);

  if (failures) {
    std::cout << failures << " check(s) failed\n";
    return 1;
  }
  std::cout << "all cli checks passed\n";
  return 0;
}
