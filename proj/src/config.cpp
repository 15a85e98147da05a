#include "sciclass/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "sciclass/errors.hpp"
#include "sciclass/rng.hpp"

namespace sciclass {

bool is_model_id(const std::string& id) {
  return std::find(std::begin(kModelIds), std::end(kModelIds), id) !=
         std::end(kModelIds);
}

namespace {

struct TomlValue {
  enum class Kind { Str, Int, Float, Bool } kind;
  std::string s;
  long long i = 0;
  double d = 0.0;
  bool b = false;
  std::size_t line = 0;
};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  return s;
}

bool bare_key_ok(std::string_view key) {
  if (key.empty()) return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

// The trailing part of a line after a parsed value: blanks or a comment.
void expect_rest_empty(std::string_view rest, std::size_t line) {
  rest = trim(rest);
  if (!rest.empty() && rest.front() != '#')
    fail(line, "unexpected trailing text \"" + std::string(rest) + "\"");
}

std::map<std::string, TomlValue> parse_toml(const std::string& text) {
  std::map<std::string, TomlValue> values;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      const std::size_t close = line.find(']');
      if (close == std::string_view::npos) fail(line_no, "unterminated [section]");
      const std::string_view name = trim(line.substr(1, close - 1));
      if (name.empty()) fail(line_no, "empty section name");
      for (std::string_view part = name; !part.empty();) {
        const std::size_t dot = part.find('.');
        const std::string_view seg =
            dot == std::string_view::npos ? part : part.substr(0, dot);
        if (!bare_key_ok(seg))
          fail(line_no, "bad section name \"" + std::string(name) + "\"");
        part = dot == std::string_view::npos ? std::string_view{}
                                             : part.substr(dot + 1);
      }
      section = std::string(name);
      expect_rest_empty(line.substr(close + 1), line_no);
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(line_no, "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    if (!bare_key_ok(key))
      fail(line_no, "bad key \"" + std::string(key) + "\"");
    std::string_view rest = trim(line.substr(eq + 1));
    if (rest.empty()) fail(line_no, "missing value");

    TomlValue value;
    value.line = line_no;
    if (rest.front() == '"') {
      std::string out;
      std::size_t i = 1;
      bool closed = false;
      for (; i < rest.size(); ++i) {
        const char c = rest[i];
        if (c == '\\') {
          if (i + 1 >= rest.size()) fail(line_no, "dangling escape");
          const char esc = rest[++i];
          switch (esc) {
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            default: fail(line_no, std::string("bad escape \\") + esc);
          }
        } else if (c == '"') {
          closed = true;
          ++i;
          break;
        } else {
          out += c;
        }
      }
      if (!closed) fail(line_no, "unterminated string");
      expect_rest_empty(rest.substr(i), line_no);
      value.kind = TomlValue::Kind::Str;
      value.s = std::move(out);
    } else {
      const std::size_t hash = rest.find('#');
      std::string_view scalar =
          trim(hash == std::string_view::npos ? rest : rest.substr(0, hash));
      if (scalar == "true" || scalar == "false") {
        value.kind = TomlValue::Kind::Bool;
        value.b = scalar == "true";
      } else {
        long long as_int = 0;
        auto [iend, ierr] = std::from_chars(
            scalar.data(), scalar.data() + scalar.size(), as_int);
        if (ierr == std::errc{} && iend == scalar.data() + scalar.size()) {
          value.kind = TomlValue::Kind::Int;
          value.i = as_int;
        } else {
          double as_float = 0.0;
          auto [fend, ferr] = std::from_chars(
              scalar.data(), scalar.data() + scalar.size(), as_float);
          if (ferr == std::errc{} && fend == scalar.data() + scalar.size()) {
            value.kind = TomlValue::Kind::Float;
            value.d = as_float;
          } else {
            fail(line_no, "cannot parse value \"" + std::string(scalar) + "\"");
          }
        }
      }
    }

    std::string full =
        section.empty() ? std::string(key) : section + "." + std::string(key);
    if (values.count(full)) fail(line_no, "duplicate key \"" + full + "\"");
    values.emplace(std::move(full), std::move(value));
  }
  return values;
}

class ConfigReader {
 public:
  explicit ConfigReader(std::map<std::string, TomlValue> values)
      : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::optional<std::string> get_string(const std::string& key) {
    const TomlValue* v = take(key);
    if (!v) return std::nullopt;
    if (v->kind != TomlValue::Kind::Str)
      fail(v->line, "\"" + key + "\" must be a string");
    return v->s;
  }

  std::optional<bool> get_bool(const std::string& key) {
    const TomlValue* v = take(key);
    if (!v) return std::nullopt;
    if (v->kind != TomlValue::Kind::Bool)
      fail(v->line, "\"" + key + "\" must be true or false");
    return v->b;
  }

  std::optional<long long> get_int(const std::string& key) {
    const TomlValue* v = take(key);
    if (!v) return std::nullopt;
    if (v->kind != TomlValue::Kind::Int)
      fail(v->line, "\"" + key + "\" must be an integer");
    return v->i;
  }

  std::optional<std::size_t> get_size(const std::string& key) {
    auto v = get_int(key);
    if (!v) return std::nullopt;
    if (*v < 0) throw ConfigError("\"" + key + "\" must be nonnegative");
    return static_cast<std::size_t>(*v);
  }

  std::optional<double> get_double(const std::string& key) {
    const TomlValue* v = take(key);
    if (!v) return std::nullopt;
    if (v->kind == TomlValue::Kind::Int) return static_cast<double>(v->i);
    if (v->kind != TomlValue::Kind::Float)
      fail(v->line, "\"" + key + "\" must be a number");
    return v->d;
  }

  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) {
    auto v = get_int(key);
    if (!v) return fallback;
    if (*v < 0) throw ConfigError("\"" + key + "\" must be nonnegative");
    return static_cast<std::uint64_t>(*v);
  }

  void finish() const {
    for (const auto& [key, value] : values_)
      if (!consumed_.count(key))
        fail(value.line, "unknown config key \"" + key + "\"");
  }

 private:
  const TomlValue* take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return nullptr;
    consumed_.insert(key);
    return &it->second;
  }

  std::map<std::string, TomlValue> values_;
  std::set<std::string> consumed_;
};

HeadSettings read_head(ConfigReader& reader, const std::string& prefix) {
  HeadSettings head;
  head.max_iterations = reader.get_size(prefix + ".max_iterations");
  head.l2_lambda = reader.get_double(prefix + ".l2_lambda");
  head.tolerance = reader.get_double(prefix + ".tolerance");
  head.learning_rate = reader.get_double(prefix + ".learning_rate");
  head.dropout_rate = reader.get_double(prefix + ".dropout_rate");
  if (head.l2_lambda && *head.l2_lambda < 0.0)
    throw ConfigError("\"" + prefix + ".l2_lambda\" must be nonnegative");
  if (head.tolerance && *head.tolerance <= 0.0)
    throw ConfigError("\"" + prefix + ".tolerance\" must be positive");
  if (head.learning_rate && *head.learning_rate <= 0.0)
    throw ConfigError("\"" + prefix + ".learning_rate\" must be positive");
  if (head.dropout_rate &&
      (*head.dropout_rate < 0.0 || *head.dropout_rate >= 1.0))
    throw ConfigError("\"" + prefix + ".dropout_rate\" must be in [0,1)");
  return head;
}

}  // namespace

SoftmaxTrainConfig RunConfig::head_config(const std::string& model_id) const {
  if (!is_model_id(model_id))
    throw ConfigError("unknown model id \"" + model_id + "\"");
  SoftmaxTrainConfig out;
  out.dropout_rate = model_id == "m2_embed_lda" ? 0.3 : 0.0;
  auto apply = [&out](const HeadSettings& h) {
    if (h.max_iterations) out.max_iterations = *h.max_iterations;
    if (h.l2_lambda) out.l2_lambda = *h.l2_lambda;
    if (h.tolerance) out.tolerance = *h.tolerance;
    if (h.learning_rate) out.learning_rate = *h.learning_rate;
    if (h.dropout_rate) out.dropout_rate = *h.dropout_rate;
  };
  apply(softmax_base);
  auto it = softmax_overrides.find(model_id);
  if (it != softmax_overrides.end()) apply(it->second);
  out.seed = derive_seed(seed, "softmax." + model_id);
  return out;
}

LdaConfig RunConfig::lda_config() const {
  LdaConfig out = lda;
  out.seed = derive_seed(seed, "lda");
  return out;
}

std::uint64_t RunConfig::ensemble_seed() const {
  return derive_seed(seed, "ensemble");
}

RunConfig parse_run_config(const std::string& text) {
  ConfigReader reader(parse_toml(text));
  RunConfig config;

  for (const char* split : {"train", "validation", "test"})
    if (auto path = reader.get_string(std::string("corpus.") + split))
      config.corpus_paths[split] = *path;
  if (auto format = reader.get_string("corpus.format")) {
    auto parsed = corpus_format_from_name(*format);
    if (!parsed)
      throw ConfigError("\"corpus.format\" must be tsv, csv, or jsonl");
    config.corpus_format = *parsed;
  }

  if (auto v = reader.get_bool("textprep.stopwords"))
    config.textprep.stopwords = *v;
  if (auto v = reader.get_string("textprep.stopword_file"))
    config.textprep.stopword_file = *v;
  if (auto v = reader.get_bool("textprep.stem")) config.textprep.stem = *v;

  if (auto v = reader.get_size("tfidf.min_n")) config.tfidf.min_n = *v;
  if (auto v = reader.get_size("tfidf.max_n")) config.tfidf.max_n = *v;
  if (auto v = reader.get_double("tfidf.min_df_fraction"))
    config.tfidf.min_df_fraction = *v;
  if (config.tfidf.min_n < 1 || config.tfidf.max_n < config.tfidf.min_n)
    throw ConfigError("tfidf n-gram range must satisfy 1 <= min_n <= max_n");
  if (config.tfidf.min_df_fraction <= 0.0 ||
      config.tfidf.min_df_fraction >= 1.0)
    throw ConfigError("\"tfidf.min_df_fraction\" must be in (0,1)");

  if (auto v = reader.get_size("lda.num_topics")) config.lda.num_topics = *v;
  config.lda.alpha = reader.get_double("lda.alpha");
  if (auto v = reader.get_double("lda.beta")) config.lda.beta = *v;
  if (auto v = reader.get_size("lda.train_iterations"))
    config.lda.train_iterations = *v;
  if (auto v = reader.get_size("lda.infer_iterations"))
    config.lda.infer_iterations = *v;
  if (auto v = reader.get_size("lda.burn_in")) config.lda.burn_in = *v;
  if (config.lda.num_topics < 1)
    throw ConfigError("\"lda.num_topics\" must be >= 1");
  if (config.lda.alpha && *config.lda.alpha <= 0.0)
    throw ConfigError("\"lda.alpha\" must be positive");
  if (config.lda.beta <= 0.0)
    throw ConfigError("\"lda.beta\" must be positive");
  if (config.lda.train_iterations < 1 ||
      config.lda.burn_in >= config.lda.train_iterations)
    throw ConfigError("lda burn_in must be < train_iterations");

  config.softmax_base = read_head(reader, "softmax");
  for (const char* model_id : kModelIds) {
    const std::string prefix = std::string("softmax.") + model_id;
    HeadSettings head = read_head(reader, prefix);
    if (head.max_iterations || head.l2_lambda || head.tolerance ||
        head.learning_rate || head.dropout_rate)
      config.softmax_overrides[model_id] = head;
  }

  if (auto v = reader.get_size("sentence.train_min_tokens"))
    config.sentence.train_min_tokens = *v;
  if (auto v = reader.get_size("sentence.score_min_tokens"))
    config.sentence.score_min_tokens = *v;
  if (auto v = reader.get_string("sentence.aggregation")) {
    if (*v == "log_sum")
      config.sentence.mode = AggregationMode::log_sum;
    else if (*v == "prob_mean")
      config.sentence.mode = AggregationMode::prob_mean;
    else
      throw ConfigError(
          "\"sentence.aggregation\" must be log_sum or prob_mean");
  }
  if (config.sentence.train_min_tokens < 1 ||
      config.sentence.score_min_tokens < 1)
    throw ConfigError("sentence token thresholds must be >= 1");

  if (auto v = reader.get_string("ensemble.tie_rule")) {
    if (*v == "random")
      config.tie_rule = TieRule::random_uniform;
    else if (*v == "lowest_index")
      config.tie_rule = TieRule::lowest_index;
    else
      throw ConfigError("\"ensemble.tie_rule\" must be random or lowest_index");
  }

  config.seed = reader.get_seed("run.seed", 0);
  if (auto v = reader.get_string("run.output_dir")) config.output_dir = *v;
  if (auto v = reader.get_string("run.embeddings"))
    config.embeddings_path = *v;
  if (config.output_dir.empty())
    throw ConfigError("\"run.output_dir\" must not be empty");

  reader.finish();
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str());
}

void validate_run_config_paths(const RunConfig& config) {
  for (const auto& [split, path] : config.corpus_paths)
    if (!std::filesystem::exists(path))
      throw ConfigError("corpus." + split + " path does not exist: " +
                        path.string());
  if (!config.textprep.stopword_file.empty() &&
      !std::filesystem::exists(config.textprep.stopword_file))
    throw ConfigError("textprep.stopword_file does not exist: " +
                      config.textprep.stopword_file);
  if (!config.embeddings_path.empty() &&
      !std::filesystem::exists(config.embeddings_path))
    throw ConfigError("run.embeddings path does not exist: " +
                      config.embeddings_path.string());
}

}  // namespace sciclass
