#include "sciclass/eval.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sciclass/errors.hpp"

namespace sciclass {

using nlohmann::json;

EvalReport evaluate(const std::map<std::string, int>& gold,
                    const std::map<std::string, int>& pred,
                    std::size_t num_classes) {
  if (gold.empty()) throw DataError("evaluate: empty gold set");
  if (gold.size() != pred.size() ||
      !std::equal(gold.begin(), gold.end(), pred.begin(),
                  [](const auto& a, const auto& b) {
                    return a.first == b.first;
                  })) {
    std::string detail;
    std::size_t shown = 0;
    for (const auto& [id, cls] : gold)
      if (!pred.count(id) && shown < 5) {
        detail += " -" + id;
        ++shown;
      }
    for (const auto& [id, cls] : pred)
      if (!gold.count(id) && shown < 5) {
        detail += " +" + id;
        ++shown;
      }
    throw DataError("evaluate: gold/prediction id sets differ (" +
                    std::to_string(gold.size()) + " vs " +
                    std::to_string(pred.size()) + " docs;" + detail + ")");
  }

  EvalReport report;
  report.confusion.num_classes = num_classes;
  report.confusion.counts.assign(num_classes * num_classes, 0);
  std::size_t correct = 0;
  for (const auto& [id, g] : gold) {
    const int p = pred.at(id);
    if (g < 0 || static_cast<std::size_t>(g) >= num_classes || p < 0 ||
        static_cast<std::size_t>(p) >= num_classes)
      throw DataError("evaluate: class index out of range for doc " + id);
    ++report.confusion.at(static_cast<std::size_t>(g),
                          static_cast<std::size_t>(p));
    if (g == p) ++correct;
  }
  report.accuracy = static_cast<double>(correct) /
                    static_cast<double>(gold.size());

  report.per_class.resize(num_classes);
  double weighted_sum = 0.0, macro_sum = 0.0;
  std::size_t total_support = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::size_t tp = report.confusion.at(c, c), fp = 0, fn = 0;
    for (std::size_t o = 0; o < num_classes; ++o) {
      if (o == c) continue;
      fp += report.confusion.at(o, c);
      fn += report.confusion.at(c, o);
    }
    ClassMetrics& m = report.per_class[c];
    m.support = tp + fn;
    m.precision = (tp + fp) ? static_cast<double>(tp) /
                                  static_cast<double>(tp + fp)
                            : 0.0;
    m.recall = (tp + fn) ? static_cast<double>(tp) /
                               static_cast<double>(tp + fn)
                         : 0.0;
    m.f1 = (m.precision + m.recall > 0.0)
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    weighted_sum += static_cast<double>(m.support) * m.f1;
    macro_sum += m.f1;
    total_support += m.support;
  }
  report.weighted_f1 = weighted_sum / static_cast<double>(total_support);
  report.macro_f1 = macro_sum / static_cast<double>(num_classes);
  return report;
}

std::string eval_report_to_json(const EvalReport& report,
                                std::span<const std::string> class_names) {
  if (class_names.size() != report.per_class.size())
    throw std::invalid_argument("eval report: class name count mismatch");
  json doc;
  json per_class = json::object();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    per_class[class_names[c]] = {{"precision", m.precision},
                                 {"recall", m.recall},
                                 {"f1", m.f1},
                                 {"support", m.support}};
  }
  doc["per_class"] = per_class;
  doc["weighted_f1"] = report.weighted_f1;
  doc["macro_f1"] = report.macro_f1;
  doc["accuracy"] = report.accuracy;
  json rows = json::array();
  for (std::size_t g = 0; g < report.confusion.num_classes; ++g) {
    json row = json::array();
    for (std::size_t p = 0; p < report.confusion.num_classes; ++p)
      row.push_back(report.confusion.at(g, p));
    rows.push_back(row);
  }
  doc["confusion"] = rows;
  return doc.dump(2);
}

std::string eval_report_table(const EvalReport& report,
                              std::span<const std::string> class_names) {
  if (class_names.size() != report.per_class.size())
    throw std::invalid_argument("eval report: class name count mismatch");
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << std::setw(8) << "class" << std::setw(11) << "precision"
      << std::setw(9) << "recall" << std::setw(9) << "f1" << std::setw(9)
      << "support" << "\n";
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    out << std::setw(8) << class_names[c] << std::setw(11) << m.precision
        << std::setw(9) << m.recall << std::setw(9) << m.f1 << std::setw(9)
        << m.support << "\n";
  }
  out << "\n";
  out << "accuracy    " << report.accuracy << "\n";
  out << "weighted F1 " << report.weighted_f1 << "\n";
  out << "macro F1    " << report.macro_f1 << "\n";
  return out.str();
}

}  // namespace sciclass
