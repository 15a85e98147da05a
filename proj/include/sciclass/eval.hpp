#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace sciclass {

// Rows are gold classes, columns predicted.
struct ConfusionMatrix {
  std::size_t num_classes = 0;
  std::vector<std::size_t> counts;  // gold-major, num_classes^2

  std::size_t at(std::size_t gold, std::size_t pred) const {
    return counts[gold * num_classes + pred];
  }
  std::size_t& at(std::size_t gold, std::size_t pred) {
    return counts[gold * num_classes + pred];
  }
};

struct ClassMetrics {
  double precision = 0.0;  // 0 when TP+FP = 0
  double recall = 0.0;     // 0 when TP+FN = 0
  double f1 = 0.0;         // 0 when precision+recall = 0
  std::size_t support = 0;
};

struct EvalReport {
  std::vector<ClassMetrics> per_class;
  double weighted_f1 = 0.0;  // support-weighted mean of per-class f1
  double macro_f1 = 0.0;     // unweighted mean, supplementary
  double accuracy = 0.0;
  ConfusionMatrix confusion;
};

// Both maps must cover the same non-empty doc id set; class values are
// indices in [0, num_classes).
EvalReport evaluate(const std::map<std::string, int>& gold,
                    const std::map<std::string, int>& pred,
                    std::size_t num_classes);

std::string eval_report_to_json(const EvalReport& report,
                                std::span<const std::string> class_names);
std::string eval_report_table(const EvalReport& report,
                              std::span<const std::string> class_names);

}  // namespace sciclass
