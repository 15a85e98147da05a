#include "sciclass/softmax.hpp"

#include <algorithm>
#include <cfloat>
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

void check_batch(std::span<const SparseVector> features,
                 std::span<const int> labels, std::size_t num_classes) {
  if (features.empty()) throw std::invalid_argument("softmax: empty batch");
  if (features.size() != labels.size())
    throw std::invalid_argument("softmax: feature/label length mismatch");
  if (num_classes < 2) throw std::invalid_argument("softmax: need >= 2 classes");
  const std::size_t dim = features.front().dimension();
  for (const SparseVector& x : features)
    if (x.dimension() != dim)
      throw std::invalid_argument("softmax: inconsistent feature dimension");
  for (int y : labels)
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes)
      throw std::invalid_argument("softmax: label out of range");
}

std::vector<double> logits_of(const SoftmaxModel& model, const SparseVector& x) {
  std::vector<double> z(model.bias);
  for (const auto& [j, v] : x.entries())
    for (std::size_t k = 0; k < model.num_classes; ++k)
      z[k] += model.weight(k, j) * v;
  return z;
}

// -log p[y] computed in the log domain so saturated models stay finite.
double neg_log_prob(std::span<const double> logits, int y) {
  const double zmax = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - zmax);
  return std::log(sum) - (logits[y] - zmax);
}

SparseVector apply_column_mask(const SparseVector& x,
                               const std::vector<bool>& keep, double scale) {
  std::vector<SparseVector::Entry> entries;
  entries.reserve(x.entries().size());
  for (const auto& [j, v] : x.entries())
    if (keep[j]) entries.emplace_back(j, v * scale);
  return SparseVector(x.dimension(), std::move(entries));
}

}  // namespace

std::vector<double> stable_softmax(std::span<const double> logits) {
  const double zmax = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::max(std::exp(logits[k] - zmax), DBL_MIN);
    sum += out[k];
  }
  for (double& p : out) p /= sum;
  return out;
}

std::vector<double> predict_proba(const SoftmaxModel& model,
                                  const SparseVector& x) {
  if (x.dimension() != model.num_features)
    throw std::invalid_argument("softmax: feature dimension mismatch");
  return stable_softmax(logits_of(model, x));
}

int argmax_class(std::span<const double> probs) {
  if (probs.empty()) throw std::invalid_argument("argmax_class: empty vector");
  std::size_t best = 0;
  for (std::size_t k = 1; k < probs.size(); ++k)
    if (probs[k] > probs[best]) best = k;
  return static_cast<int>(best);
}

double softmax_objective(const SoftmaxModel& model,
                         std::span<const SparseVector> features,
                         std::span<const int> labels, double l2_lambda) {
  check_batch(features, labels, model.num_classes);
  double total = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i)
    total += neg_log_prob(logits_of(model, features[i]), labels[i]);
  double penalty = 0.0;
  for (double w : model.weights) penalty += w * w;
  return total / static_cast<double>(features.size()) +
         0.5 * l2_lambda * penalty;
}

void softmax_gradient(const SoftmaxModel& model,
                      std::span<const SparseVector> features,
                      std::span<const int> labels, double l2_lambda,
                      std::vector<double>& weight_grad,
                      std::vector<double>& bias_grad) {
  check_batch(features, labels, model.num_classes);
  const std::size_t K = model.num_classes;
  weight_grad.assign(model.weights.size(), 0.0);
  bias_grad.assign(K, 0.0);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::vector<double> p = stable_softmax(logits_of(model, features[i]));
    for (std::size_t k = 0; k < K; ++k) {
      const double coeff = p[k] - (static_cast<int>(k) == labels[i] ? 1.0 : 0.0);
      bias_grad[k] += coeff;
      for (const auto& [j, v] : features[i].entries())
        weight_grad[k * model.num_features + j] += coeff * v;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(features.size());
  for (double& g : weight_grad) g *= inv_n;
  for (double& g : bias_grad) g *= inv_n;
  if (l2_lambda != 0.0)
    for (std::size_t t = 0; t < weight_grad.size(); ++t)
      weight_grad[t] += l2_lambda * model.weights[t];
}

SoftmaxModel softmax_train(std::span<const SparseVector> features,
                           std::span<const int> labels,
                           std::size_t num_classes,
                           const SoftmaxTrainConfig& config,
                           SoftmaxTrainLog* log) {
  check_batch(features, labels, num_classes);
  if (config.tolerance <= 0.0)
    throw std::invalid_argument("softmax: tolerance must be positive");
  if (config.learning_rate <= 0.0)
    throw std::invalid_argument("softmax: learning_rate must be positive");
  if (config.dropout_rate < 0.0 || config.dropout_rate >= 1.0)
    throw std::invalid_argument("softmax: dropout_rate must be in [0,1)");
  if (std::set<int>(labels.begin(), labels.end()).size() < 2)
    throw DataError("softmax train: fewer than 2 distinct labels");

  SoftmaxModel model;
  model.num_classes = num_classes;
  model.num_features = features.front().dimension();
  model.weights.assign(num_classes * model.num_features, 0.0);
  model.bias.assign(num_classes, 0.0);
  model.config_echo = config;

  const double lambda =
      config.l2_lambda.value_or(1.0 / static_cast<double>(features.size()));
  if (lambda < 0.0)
    throw std::invalid_argument("softmax: l2_lambda must be nonnegative");
  model.effective_l2_lambda = lambda;
  model.config_echo.l2_lambda = lambda;

  Rng rng(config.seed);
  std::vector<SparseVector> masked;  // storage for the epoch's dropout view
  std::vector<double> weight_grad, bias_grad;
  std::string stop_reason = "max_iterations";
  std::size_t epochs = 0;

  if (log) {
    log->loss.clear();
    log->loss.push_back(softmax_objective(model, features, labels, lambda));
    log->effective_l2_lambda = lambda;
  }

  for (std::size_t epoch = 0; epoch < config.max_iterations; ++epoch) {
    std::span<const SparseVector> active = features;
    if (config.dropout_rate > 0.0) {
      std::vector<bool> keep(model.num_features);
      for (std::size_t j = 0; j < model.num_features; ++j)
        keep[j] = !rng.bernoulli(config.dropout_rate);
      const double scale = 1.0 / (1.0 - config.dropout_rate);
      masked.clear();
      masked.reserve(features.size());
      for (const SparseVector& x : features)
        masked.push_back(apply_column_mask(x, keep, scale));
      active = masked;
    }

    softmax_gradient(model, active, labels, lambda, weight_grad, bias_grad);
    double grad_inf = 0.0;
    for (double g : weight_grad) grad_inf = std::max(grad_inf, std::abs(g));
    for (double g : bias_grad) grad_inf = std::max(grad_inf, std::abs(g));
    if (grad_inf < config.tolerance) {
      stop_reason = "converged";
      break;
    }

    double grad_sq = 0.0;
    for (double g : weight_grad) grad_sq += g * g;
    for (double g : bias_grad) grad_sq += g * g;

    const double base = softmax_objective(model, active, labels, lambda);
    constexpr double kArmijo = 1e-4;
    double step = config.learning_rate;
    SoftmaxModel candidate = model;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      for (std::size_t t = 0; t < model.weights.size(); ++t)
        candidate.weights[t] = model.weights[t] - step * weight_grad[t];
      for (std::size_t k = 0; k < num_classes; ++k)
        candidate.bias[k] = model.bias[k] - step * bias_grad[k];
      const double trial = softmax_objective(candidate, active, labels, lambda);
      if (trial <= base - kArmijo * step * grad_sq) {
        model.weights.swap(candidate.weights);
        model.bias.swap(candidate.bias);
        if (log) log->loss.push_back(trial);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      stop_reason = "step_underflow";
      break;
    }
    ++epochs;
  }

  if (log) {
    log->stop_reason = stop_reason;
    log->iterations = epochs;
  }
  return model;
}

std::string softmax_to_json(const SoftmaxModel& model) {
  json doc;
  doc["format"] = "sciclass.softmax";
  doc["version"] = 1;
  doc["num_classes"] = model.num_classes;
  doc["num_features"] = model.num_features;
  doc["weights"] = model.weights;
  doc["bias"] = model.bias;
  doc["train_config"] = {
      {"max_iterations", model.config_echo.max_iterations},
      {"l2_lambda", model.effective_l2_lambda},
      {"tolerance", model.config_echo.tolerance},
      {"learning_rate", model.config_echo.learning_rate},
      {"dropout_rate", model.config_echo.dropout_rate},
      {"seed", model.config_echo.seed},
  };
  return doc.dump();
}

SoftmaxModel softmax_from_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw DataError("softmax model: invalid JSON");
  if (doc.value("format", "") != "sciclass.softmax")
    throw DataError("softmax model: unexpected format tag");
  if (doc.value("version", 0) != 1)
    throw DataError("softmax model: unsupported version");
  SoftmaxModel model;
  model.num_classes = doc.at("num_classes").get<std::size_t>();
  model.num_features = doc.at("num_features").get<std::size_t>();
  model.weights = doc.at("weights").get<std::vector<double>>();
  model.bias = doc.at("bias").get<std::vector<double>>();
  if (model.weights.size() != model.num_classes * model.num_features ||
      model.bias.size() != model.num_classes)
    throw DataError("softmax model: shape mismatch");
  for (double w : model.weights)
    if (!std::isfinite(w)) throw DataError("softmax model: non-finite weight");
  for (double b : model.bias)
    if (!std::isfinite(b)) throw DataError("softmax model: non-finite bias");
  const json& tc = doc.at("train_config");
  model.config_echo.max_iterations = tc.at("max_iterations").get<std::size_t>();
  model.config_echo.l2_lambda = tc.at("l2_lambda").get<double>();
  model.config_echo.tolerance = tc.at("tolerance").get<double>();
  model.config_echo.learning_rate = tc.at("learning_rate").get<double>();
  model.config_echo.dropout_rate = tc.at("dropout_rate").get<double>();
  model.config_echo.seed = tc.at("seed").get<std::uint64_t>();
  model.effective_l2_lambda = *model.config_echo.l2_lambda;
  return model;
}

}  // namespace sciclass
