#include "sciclass/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "sciclass/embedding.hpp"
#include "sciclass/errors.hpp"
#include "sciclass/rng.hpp"
#include "sciclass/sentence.hpp"
#include "sciclass/stopwords.hpp"

namespace sciclass {

using nlohmann::json;

namespace {

std::vector<std::string> class_code_names() {
  std::vector<std::string> names;
  names.reserve(kNumClasses);
  for (ClassLabel label : all_labels())
    names.emplace_back(label_code(label));
  return names;
}

std::string format_double(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  if (std::filesystem::exists(path))
    std::cout << "note: overwriting " << path.string() << "\n";
  else if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("write failed for " + path.string());
}

// Normalization pipeline bound to one textprep configuration.
struct Preprocessor {
  StopwordSet stopwords;
  bool stem = false;

  std::vector<std::string> run(std::string_view text) const {
    return normalize(tokenize(text), stopwords, stem);
  }
};

Preprocessor make_preprocessor(const TextprepConfig& config) {
  Preprocessor prep;
  prep.stem = config.stem;
  if (config.stopwords)
    prep.stopwords = config.stopword_file.empty()
                         ? builtin_stopwords()
                         : load_stopwords(config.stopword_file);
  return prep;
}

Corpus load_split(const RunConfig& config, const std::string& split) {
  auto it = config.corpus_paths.find(split);
  if (it == config.corpus_paths.end())
    throw ConfigError("config has no corpus." + split + " path");
  return load_corpus(it->second.string(), config.corpus_format, split);
}

std::vector<int> label_indices(const Corpus& corpus) {
  std::vector<int> labels;
  labels.reserve(corpus.documents.size());
  for (const Document& doc : corpus.documents) {
    if (!doc.label)
      throw DataError("document \"" + doc.id + "\" has no label");
    labels.push_back(label_index(*doc.label));
  }
  return labels;
}

EmbeddingTable require_embeddings(const RunConfig& config,
                                  const std::string& model_id) {
  if (config.embeddings_path.empty())
    throw ConfigError("embedding table required for " + model_id +
                      " (set run.embeddings or pass --embeddings)");
  return load_embeddings(config.embeddings_path);
}

const std::vector<double>& embedding_for(const EmbeddingTable& table,
                                         const std::string& doc_id) {
  auto it = table.vectors.find(doc_id);
  if (it == table.vectors.end())
    throw DataError("embedding table has no vector for document \"" + doc_id +
                    "\"");
  return it->second;
}

json textprep_to_json(const TextprepConfig& config) {
  return {{"stopwords", config.stopwords},
          {"stopword_file", config.stopword_file},
          {"stem", config.stem}};
}

TextprepConfig textprep_from_json(const json& doc) {
  TextprepConfig config;
  config.stopwords = doc.at("stopwords").get<bool>();
  config.stopword_file = doc.at("stopword_file").get<std::string>();
  config.stem = doc.at("stem").get<bool>();
  return config;
}

const char* aggregation_name(AggregationMode mode) {
  return mode == AggregationMode::log_sum ? "log_sum" : "prob_mean";
}

AggregationMode aggregation_from_name(const std::string& name) {
  if (name == "log_sum") return AggregationMode::log_sum;
  if (name == "prob_mean") return AggregationMode::prob_mean;
  throw DataError("model artifact: unknown aggregation \"" + name + "\"");
}

// Sentence-level features for one abstract at scoring time.
SentenceScoringInput sentence_scoring_input(const ModelArtifact& artifact,
                                            const Preprocessor& prep,
                                            const Document& doc) {
  SentenceScoringInput input;
  for (const Sentence& sent : split_sentences(doc.id, doc.text)) {
    if (sent.token_count < artifact.sentence.score_min_tokens) continue;
    TokenizedDoc tokens{doc.id, prep.run(sent.text)};
    input.sentence_features.push_back(tfidf_transform(*artifact.tfidf, tokens));
  }
  TokenizedDoc whole{doc.id, prep.run(doc.text)};
  input.whole_abstract = tfidf_transform(*artifact.tfidf, whole);
  return input;
}

std::vector<double> predict_document(const ModelArtifact& artifact,
                                     const Preprocessor& prep,
                                     const EmbeddingTable* embeddings,
                                     const Document& doc) {
  if (artifact.model_id == "m1_embed") {
    const std::vector<double>& emb = embedding_for(*embeddings, doc.id);
    return predict_proba(artifact.head, sparse_from_dense(emb));
  }
  if (artifact.model_id == "m2_embed_lda") {
    const std::vector<double>& emb = embedding_for(*embeddings, doc.id);
    TokenizedDoc tokens{doc.id, prep.run(doc.text)};
    const std::vector<double> theta = lda_infer(*artifact.lda, tokens);
    return predict_proba(artifact.head,
                         sparse_from_dense(concat_features(emb, theta)));
  }
  if (artifact.model_id == "m3_sentence") {
    return score_abstract(artifact.head,
                          sentence_scoring_input(artifact, prep, doc),
                          artifact.sentence.mode);
  }
  TokenizedDoc tokens{doc.id, prep.run(doc.text)};
  return predict_proba(artifact.head, tfidf_transform(*artifact.tfidf, tokens));
}

}  // namespace

std::filesystem::path model_path(const RunConfig& config,
                                 const std::string& model_id) {
  return config.output_dir / "models" / (model_id + ".json");
}
std::filesystem::path train_log_path(const RunConfig& config,
                                     const std::string& model_id) {
  return config.output_dir / "logs" / (model_id + ".train.json");
}
std::filesystem::path predictions_path(const RunConfig& config,
                                       const std::string& model_id,
                                       const std::string& split) {
  return config.output_dir / "predictions" / (model_id + "." + split + ".tsv");
}
std::filesystem::path probabilities_path(const RunConfig& config,
                                         const std::string& model_id,
                                         const std::string& split) {
  return config.output_dir / "predictions" /
         (model_id + "." + split + ".probs.tsv");
}

void save_model_artifact(const ModelArtifact& artifact,
                         const std::filesystem::path& path) {
  json doc;
  doc["format"] = "sciclass.model";
  doc["version"] = 1;
  doc["model_id"] = artifact.model_id;
  doc["class_order"] = class_code_names();
  doc["textprep"] = textprep_to_json(artifact.textprep);
  doc["head"] = json::parse(softmax_to_json(artifact.head));
  if (artifact.tfidf)
    doc["tfidf"] = json::parse(tfidf_to_json(*artifact.tfidf));
  if (artifact.lda) doc["lda"] = json::parse(lda_to_json(*artifact.lda));
  if (artifact.model_id == "m1_embed" || artifact.model_id == "m2_embed_lda")
    doc["embedding_dim"] = artifact.embedding_dim;
  if (artifact.model_id == "m3_sentence")
    doc["sentence"] = {
        {"train_min_tokens", artifact.sentence.train_min_tokens},
        {"score_min_tokens", artifact.sentence.score_min_tokens},
        {"aggregation", aggregation_name(artifact.sentence.mode)}};
  write_text_file(path, doc.dump());
}

ModelArtifact load_model_artifact(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  json doc = json::parse(buffer.str(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw DataError("model artifact " + path.string() + ": invalid JSON");
  if (doc.value("format", "") != "sciclass.model")
    throw DataError("model artifact " + path.string() +
                    ": unexpected format tag");
  if (doc.value("version", 0) != 1)
    throw DataError("model artifact " + path.string() +
                    ": unsupported version");

  ModelArtifact artifact;
  try {
    artifact.model_id = doc.at("model_id").get<std::string>();
    if (!is_model_id(artifact.model_id))
      throw DataError("model artifact: unknown model id \"" +
                      artifact.model_id + "\"");
    if (doc.at("class_order").get<std::vector<std::string>>() !=
        class_code_names())
      throw DataError("model artifact: class order mismatch");
    artifact.textprep = textprep_from_json(doc.at("textprep"));
    artifact.head = softmax_from_json(doc.at("head").dump());
    if (doc.contains("tfidf"))
      artifact.tfidf = tfidf_from_json(doc.at("tfidf").dump());
    if (doc.contains("lda")) artifact.lda = lda_from_json(doc.at("lda").dump());
    if (doc.contains("embedding_dim"))
      artifact.embedding_dim = doc.at("embedding_dim").get<std::size_t>();
    if (doc.contains("sentence")) {
      const json& s = doc.at("sentence");
      artifact.sentence.train_min_tokens =
          s.at("train_min_tokens").get<std::size_t>();
      artifact.sentence.score_min_tokens =
          s.at("score_min_tokens").get<std::size_t>();
      artifact.sentence.mode =
          aggregation_from_name(s.at("aggregation").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw DataError("model artifact " + path.string() + ": " + e.what());
  }

  if (artifact.head.num_classes != kNumClasses)
    throw DataError("model artifact: head has wrong class count");
  if (artifact.model_id == "m1_embed" &&
      artifact.head.num_features != artifact.embedding_dim)
    throw DataError("model artifact: m1 head/embedding dimension mismatch");
  if (artifact.model_id == "m2_embed_lda") {
    if (!artifact.lda) throw DataError("model artifact: m2 missing lda part");
    if (artifact.head.num_features !=
        artifact.embedding_dim + artifact.lda->num_topics())
      throw DataError("model artifact: m2 head dimension mismatch");
  }
  if ((artifact.model_id == "m3_sentence" ||
       artifact.model_id == "m4_tfidf_lr")) {
    if (!artifact.tfidf)
      throw DataError("model artifact: missing tfidf part");
    if (artifact.head.num_features != artifact.tfidf->vocabulary.size())
      throw DataError("model artifact: head/tfidf dimension mismatch");
  }
  return artifact;
}

TrainResult train_model(const RunConfig& config, const std::string& model_id) {
  if (!is_model_id(model_id))
    throw ConfigError("unknown model id \"" + model_id + "\"");
  const Corpus corpus = load_split(config, "train");
  const Preprocessor prep = make_preprocessor(config.textprep);
  const SoftmaxTrainConfig head_config = config.head_config(model_id);

  ModelArtifact artifact;
  artifact.model_id = model_id;
  artifact.textprep = config.textprep;

  std::vector<SparseVector> features;
  std::vector<int> labels;
  SoftmaxTrainLog head_log;
  json log;
  log["format"] = "sciclass.train_log";
  log["model_id"] = model_id;
  log["run_seed"] = config.seed;
  log["head_seed"] = head_config.seed;

  if (model_id == "m1_embed") {
    const EmbeddingTable table = require_embeddings(config, model_id);
    artifact.embedding_dim = table.dimension;
    features.reserve(corpus.documents.size());
    for (const Document& doc : corpus.documents)
      features.push_back(sparse_from_dense(embedding_for(table, doc.id)));
    labels = label_indices(corpus);
  } else if (model_id == "m2_embed_lda") {
    const EmbeddingTable table = require_embeddings(config, model_id);
    artifact.embedding_dim = table.dimension;
    std::vector<TokenizedDoc> docs;
    docs.reserve(corpus.documents.size());
    for (const Document& doc : corpus.documents)
      docs.push_back(TokenizedDoc{doc.id, prep.run(doc.text)});
    const LdaConfig lda_config = config.lda_config();
    log["lda_seed"] = lda_config.seed;
    artifact.lda = lda_fit(docs, lda_config);
    features.reserve(corpus.documents.size());
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
      const std::vector<double> theta = lda_infer(*artifact.lda, docs[i]);
      features.push_back(sparse_from_dense(concat_features(
          embedding_for(table, corpus.documents[i].id), theta)));
    }
    labels = label_indices(corpus);
  } else if (model_id == "m3_sentence") {
    const std::vector<SentenceExample> examples =
        build_sentence_trainset(corpus, config.sentence);
    if (examples.empty()) throw DataError("empty sentence training set");
    artifact.sentence = config.sentence;
    std::vector<TokenizedDoc> docs;
    docs.reserve(examples.size());
    for (const SentenceExample& ex : examples)
      docs.push_back(TokenizedDoc{
          ex.parent_doc_id + "#" + std::to_string(ex.sentence.index),
          prep.run(ex.sentence.text)});
    artifact.tfidf = tfidf_fit(docs, config.tfidf.min_n, config.tfidf.max_n,
                               config.tfidf.min_df_fraction);
    features.reserve(examples.size());
    for (const TokenizedDoc& doc : docs)
      features.push_back(tfidf_transform(*artifact.tfidf, doc));
    labels.reserve(examples.size());
    for (const SentenceExample& ex : examples)
      labels.push_back(label_index(ex.label));
    log["sentence_examples"] = examples.size();
  } else {  // m4_tfidf_lr
    std::vector<TokenizedDoc> docs;
    docs.reserve(corpus.documents.size());
    for (const Document& doc : corpus.documents)
      docs.push_back(TokenizedDoc{doc.id, prep.run(doc.text)});
    artifact.tfidf = tfidf_fit(docs, config.tfidf.min_n, config.tfidf.max_n,
                               config.tfidf.min_df_fraction);
    features.reserve(docs.size());
    for (const TokenizedDoc& doc : docs)
      features.push_back(tfidf_transform(*artifact.tfidf, doc));
    labels = label_indices(corpus);
  }

  artifact.head =
      softmax_train(features, labels, kNumClasses, head_config, &head_log);

  TrainResult result;
  result.model_file = model_path(config, model_id);
  result.log_file = train_log_path(config, model_id);
  result.stop_reason = head_log.stop_reason;
  result.iterations = head_log.iterations;
  result.final_loss = head_log.loss.back();
  result.train_examples = features.size();
  result.feature_dimension = artifact.head.num_features;

  save_model_artifact(artifact, result.model_file);
  log["train_examples"] = result.train_examples;
  log["feature_dimension"] = result.feature_dimension;
  log["effective_l2_lambda"] = head_log.effective_l2_lambda;
  log["stop_reason"] = head_log.stop_reason;
  log["iterations"] = head_log.iterations;
  log["loss"] = head_log.loss;
  write_text_file(result.log_file, log.dump(2));
  return result;
}

PredictResult predict_model(const RunConfig& config,
                            const std::string& model_id,
                            const std::string& split) {
  if (!is_model_id(model_id))
    throw ConfigError("unknown model id \"" + model_id + "\"");
  const std::filesystem::path artifact_path = model_path(config, model_id);
  if (!std::filesystem::exists(artifact_path))
    throw DataError("model file not found: " + artifact_path.string() +
                    " (train " + model_id + " first)");
  const ModelArtifact artifact = load_model_artifact(artifact_path);
  const Corpus corpus = load_split(config, split);
  const Preprocessor prep = make_preprocessor(artifact.textprep);

  EmbeddingTable table;
  const EmbeddingTable* embeddings = nullptr;
  if (model_id == "m1_embed" || model_id == "m2_embed_lda") {
    table = require_embeddings(config, model_id);
    if (table.dimension != artifact.embedding_dim)
      throw DataError("embedding table dimension " +
                      std::to_string(table.dimension) +
                      " does not match model (" +
                      std::to_string(artifact.embedding_dim) + ")");
    embeddings = &table;
  }

  std::string pred_out, prob_out;
  for (const Document& doc : corpus.documents) {
    const std::vector<double> probs =
        predict_document(artifact, prep, embeddings, doc);
    const ClassLabel chosen = label_from_index(argmax_class(probs));
    pred_out += doc.id;
    pred_out += '\t';
    pred_out += label_code(chosen);
    pred_out += '\n';
    prob_out += doc.id;
    for (double p : probs) {
      prob_out += '\t';
      prob_out += format_double(p);
    }
    prob_out += '\n';
  }

  PredictResult result;
  result.predictions_file = predictions_path(config, model_id, split);
  result.probabilities_file = probabilities_path(config, model_id, split);
  result.documents = corpus.documents.size();
  write_text_file(result.predictions_file, pred_out);
  write_text_file(result.probabilities_file, prob_out);
  return result;
}

PredictionMap load_prediction_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open prediction file " + path.string());
  PredictionMap predictions;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError(path.string() + ": line " + std::to_string(lineno) +
                      ": expected doc_id<TAB>class");
    const std::string id = line.substr(0, tab);
    std::size_t end = line.find('\t', tab + 1);
    if (end == std::string::npos) end = line.size();
    const std::string code = line.substr(tab + 1, end - tab - 1);
    const auto label = label_from_code(code);
    if (!label)
      throw DataError(path.string() + ": line " + std::to_string(lineno) +
                      ": unknown label code \"" + code + "\"");
    if (!predictions.emplace(id, *label).second)
      throw DataError(path.string() + ": line " + std::to_string(lineno) +
                      ": duplicate doc id \"" + id + "\"");
  }
  if (predictions.empty())
    throw DataError(path.string() + ": empty prediction file");
  return predictions;
}

EnsembleResult ensemble_predictions(
    const RunConfig& config,
    const std::vector<std::filesystem::path>& prediction_files) {
  if (prediction_files.size() < 2)
    throw ConfigError("ensemble needs at least 2 prediction files");
  std::map<std::string, PredictionMap> per_model;
  for (const std::filesystem::path& path : prediction_files) {
    const std::string name = path.stem().string();
    if (per_model.count(name))
      throw ConfigError("duplicate prediction file name \"" + name + "\"");
    per_model.emplace(name, load_prediction_tsv(path));
  }

  const std::map<std::string, EnsembleDecision> decisions =
      ensemble_run(per_model, config.ensemble_seed(), config.tie_rule);

  std::string out;
  std::size_t ties = 0;
  for (const auto& [id, decision] : decisions) {
    out += id;
    out += '\t';
    out += label_code(decision.chosen);
    out += '\t';
    out += std::to_string(decision.max_votes);
    out += '\t';
    out += decision.tie_broken ? '1' : '0';
    out += '\n';
    if (decision.tie_broken) ++ties;
  }

  EnsembleResult result;
  result.output_file = config.output_dir / "ensemble.tsv";
  result.documents = decisions.size();
  result.ties = ties;
  write_text_file(result.output_file, out);
  return result;
}

EvaluateResult evaluate_files(
    const std::filesystem::path& gold_file,
    const std::filesystem::path& prediction_file,
    const std::optional<std::filesystem::path>& json_out) {
  const std::string ext = gold_file.extension().string();
  std::map<std::string, int> gold;
  if (ext == ".csv" || ext == ".jsonl") {
    const CorpusFormat format =
        ext == ".csv" ? CorpusFormat::Csv : CorpusFormat::Jsonl;
    for (const Document& doc :
         load_corpus(gold_file.string(), format, "validation").documents)
      gold.emplace(doc.id, label_index(*doc.label));
  } else {
    // TSV: a corpus row has three columns, a prediction row two.
    std::ifstream in(gold_file, std::ios::binary);
    if (!in) throw DataError("cannot open gold file " + gold_file.string());
    std::string first_line;
    while (std::getline(in, first_line) && first_line.empty()) {
    }
    const std::size_t tabs =
        static_cast<std::size_t>(std::count(first_line.begin(),
                                            first_line.end(), '\t'));
    if (tabs >= 2) {
      for (const Document& doc :
           load_corpus(gold_file.string(), CorpusFormat::Tsv, "validation")
               .documents)
        gold.emplace(doc.id, label_index(*doc.label));
    } else {
      for (const auto& [id, label] : load_prediction_tsv(gold_file))
        gold.emplace(id, label_index(label));
    }
  }

  std::map<std::string, int> pred;
  for (const auto& [id, label] : load_prediction_tsv(prediction_file))
    pred.emplace(id, label_index(label));

  EvaluateResult result;
  result.report = evaluate(gold, pred, kNumClasses);
  const std::vector<std::string> names = class_code_names();
  result.table = eval_report_table(result.report, names);
  result.json_file = json_out.value_or(
      std::filesystem::path(prediction_file.string() + ".eval.json"));
  write_text_file(result.json_file, eval_report_to_json(result.report, names));
  return result;
}

std::string describe_model(const std::filesystem::path& model_file) {
  const ModelArtifact artifact = load_model_artifact(model_file);
  std::ostringstream out;
  out << "model_id: " << artifact.model_id << "\n";
  out << "classes:";
  for (ClassLabel label : all_labels()) out << " " << label_code(label);
  out << "\n";
  out << "head: " << artifact.head.num_classes << " x "
      << artifact.head.num_features << " weights, l2_lambda "
      << format_double(artifact.head.effective_l2_lambda) << ", dropout "
      << format_double(artifact.head.config_echo.dropout_rate) << ", seed "
      << artifact.head.config_echo.seed << "\n";
  out << "textprep: stopwords "
      << (artifact.textprep.stopwords ? "on" : "off") << ", stemming "
      << (artifact.textprep.stem ? "on" : "off") << "\n";
  if (artifact.tfidf)
    out << "tfidf: " << artifact.tfidf->vocabulary.size() << " terms, n-grams "
        << artifact.tfidf->vocabulary.min_n() << "-"
        << artifact.tfidf->vocabulary.max_n() << ", min_df "
        << format_double(artifact.tfidf->vocabulary.min_df_fraction())
        << ", fit on " << artifact.tfidf->corpus_doc_count << " docs\n";
  if (artifact.lda)
    out << "lda: " << artifact.lda->num_topics() << " topics, "
        << artifact.lda->vocab_size() << " terms, alpha "
        << format_double(artifact.lda->alpha) << ", beta "
        << format_double(artifact.lda->config.beta) << ", seed "
        << artifact.lda->config.seed << "\n";
  if (artifact.model_id == "m1_embed" || artifact.model_id == "m2_embed_lda")
    out << "embedding_dim: " << artifact.embedding_dim << "\n";
  if (artifact.model_id == "m3_sentence")
    out << "sentence: train_min_tokens "
        << artifact.sentence.train_min_tokens << ", score_min_tokens "
        << artifact.sentence.score_min_tokens << ", aggregation "
        << aggregation_name(artifact.sentence.mode) << "\n";
  return out.str();
}

}  // namespace sciclass
