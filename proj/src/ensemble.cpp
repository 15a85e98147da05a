#include "sciclass/ensemble.hpp"

#include <array>
#include <set>
#include <stdexcept>

#include "sciclass/errors.hpp"
#include "sciclass/rng.hpp"

namespace sciclass {

EnsembleDecision majority_vote(const std::string& doc_id,
                               std::span<const Vote> votes, std::uint64_t seed,
                               TieRule rule) {
  if (votes.empty()) throw DataError("majority vote: empty vote set");
  std::set<std::string> names;
  std::array<int, kNumClasses> counts{};
  for (const auto& [model, cls] : votes) {
    if (!names.insert(model).second)
      throw DataError("majority vote: duplicate model name \"" + model + "\"");
    ++counts[label_index(cls)];
  }

  int max_votes = 0;
  for (int c : counts) max_votes = std::max(max_votes, c);

  EnsembleDecision decision;
  decision.doc_id = doc_id;
  decision.max_votes = max_votes;
  for (std::size_t k = 0; k < kNumClasses; ++k)
    if (counts[k] == max_votes)
      decision.tied_classes.push_back(label_from_index(static_cast<int>(k)));

  decision.tie_broken = decision.tied_classes.size() > 1;
  if (!decision.tie_broken) {
    decision.chosen = decision.tied_classes.front();
  } else if (rule == TieRule::lowest_index) {
    decision.chosen = decision.tied_classes.front();
  } else {
    Rng rng(derive_seed(seed, doc_id));
    decision.chosen =
        decision.tied_classes[rng.next_below(decision.tied_classes.size())];
  }
  return decision;
}

std::map<std::string, EnsembleDecision> ensemble_run(
    const std::map<std::string, PredictionMap>& per_model_predictions,
    std::uint64_t seed, TieRule rule) {
  if (per_model_predictions.empty())
    throw DataError("ensemble: no prediction sets");

  std::set<std::string> all_ids;
  for (const auto& [model, preds] : per_model_predictions)
    for (const auto& [id, cls] : preds) all_ids.insert(id);

  std::string missing_report;
  for (const auto& [model, preds] : per_model_predictions) {
    std::vector<std::string> missing;
    for (const std::string& id : all_ids)
      if (!preds.count(id)) missing.push_back(id);
    if (missing.empty()) continue;
    missing_report += missing_report.empty() ? "" : "; ";
    missing_report += "model " + model + " missing";
    std::size_t shown = 0;
    for (const std::string& id : missing) {
      missing_report += (shown ? "," : "") + std::string(" ") + id;
      if (++shown == 5 && missing.size() > 5) {
        missing_report +=
            " and " + std::to_string(missing.size() - 5) + " more";
        break;
      }
    }
  }
  if (!missing_report.empty())
    throw DataError("ensemble coverage mismatch: " + missing_report);

  std::map<std::string, EnsembleDecision> decisions;
  for (const std::string& id : all_ids) {
    std::vector<Vote> votes;
    votes.reserve(per_model_predictions.size());
    for (const auto& [model, preds] : per_model_predictions)
      votes.emplace_back(model, preds.at(id));
    decisions.emplace(id, majority_vote(id, votes, seed, rule));
  }
  return decisions;
}

}  // namespace sciclass
