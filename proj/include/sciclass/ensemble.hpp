#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sciclass/label.hpp"

namespace sciclass {

enum class TieRule {
  random_uniform,  // uniform draw seeded by (seed, doc_id)
  lowest_index,    // deterministic fallback
};

struct EnsembleDecision {
  std::string doc_id;
  ClassLabel chosen = ClassLabel::CL;
  int max_votes = 0;
  std::vector<ClassLabel> tied_classes;  // all classes at max, ascending
  bool tie_broken = false;
};

using Vote = std::pair<std::string, ClassLabel>;  // model name, voted class

// Picks the class with the most votes. On a tie the winner is drawn
// uniformly from the tied set by a generator seeded from (seed, doc_id),
// so the outcome is order-independent and reproducible per document.
EnsembleDecision majority_vote(const std::string& doc_id,
                               std::span<const Vote> votes,
                               std::uint64_t seed,
                               TieRule rule = TieRule::random_uniform);

using PredictionMap = std::map<std::string, ClassLabel>;  // doc_id -> class

// Applies majority_vote document-by-document. Every model must cover the
// same doc id set; a mismatch raises an error listing what is missing.
std::map<std::string, EnsembleDecision> ensemble_run(
    const std::map<std::string, PredictionMap>& per_model_predictions,
    std::uint64_t seed, TieRule rule = TieRule::random_uniform);

}  // namespace sciclass
