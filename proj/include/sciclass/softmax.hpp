#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sciclass/sparse.hpp"

namespace sciclass {

struct SoftmaxTrainConfig {
  std::size_t max_iterations = 100;
  // Ridge penalty on the weight matrix (bias excluded). Unset means 1/N,
  // resolved against the training batch size.
  std::optional<double> l2_lambda;
  double tolerance = 1e-4;       // stop when max |gradient component| < this
  double learning_rate = 1.0;    // initial step for the backtracking search
  double dropout_rate = 0.0;     // per-epoch input-feature dropout, [0,1)
  std::uint64_t seed = 0;
};

// Linear multi-class classifier: probs = softmax(W x + b).
struct SoftmaxModel {
  std::size_t num_classes = 0;
  std::size_t num_features = 0;
  std::vector<double> weights;  // num_classes x num_features, class-major
  std::vector<double> bias;     // num_classes
  SoftmaxTrainConfig config_echo;  // settings the model was trained with
  double effective_l2_lambda = 0.0;

  double weight(std::size_t k, std::size_t j) const {
    return weights[k * num_features + j];
  }
  double& weight(std::size_t k, std::size_t j) {
    return weights[k * num_features + j];
  }
};

struct SoftmaxTrainLog {
  std::vector<double> loss;  // objective before training, then per accepted step
  std::string stop_reason;   // "converged", "max_iterations", "step_underflow"
  std::size_t iterations = 0;
  double effective_l2_lambda = 0.0;
};

// Full-batch gradient descent on mean cross-entropy plus (lambda/2)*||W||^2,
// with Armijo backtracking from config.learning_rate. Stops when the gradient
// infinity norm drops below config.tolerance or after max_iterations epochs.
// With dropout_rate > 0 each epoch draws a fresh feature-column mask and
// trains on inverted-dropout inputs.
SoftmaxModel softmax_train(std::span<const SparseVector> features,
                           std::span<const int> labels,
                           std::size_t num_classes,
                           const SoftmaxTrainConfig& config,
                           SoftmaxTrainLog* log = nullptr);

// softmax(W x + b), max-subtracted; every component strictly positive.
std::vector<double> predict_proba(const SoftmaxModel& model,
                                  const SparseVector& x);

// Index of the largest probability; ties go to the lowest index.
int argmax_class(std::span<const double> probs);

double softmax_objective(const SoftmaxModel& model,
                         std::span<const SparseVector> features,
                         std::span<const int> labels, double l2_lambda);

// Analytic gradient of softmax_objective at `model`, written into
// weight_grad (num_classes x num_features) and bias_grad (num_classes).
void softmax_gradient(const SoftmaxModel& model,
                      std::span<const SparseVector> features,
                      std::span<const int> labels, double l2_lambda,
                      std::vector<double>& weight_grad,
                      std::vector<double>& bias_grad);

// Numerically stable softmax of an arbitrary real vector. Components are
// floored to the smallest positive normal double before normalizing, so the
// output is strictly positive and safe to take logarithms of.
std::vector<double> stable_softmax(std::span<const double> logits);

std::string softmax_to_json(const SoftmaxModel& model);
SoftmaxModel softmax_from_json(const std::string& text);

}  // namespace sciclass
