#include "mtal/metrics.hpp"

#include <string>

namespace mtal {

ConfusionCounts confusion(const std::vector<bool>& predictions, const std::vector<bool>& labels,
                          bool positive_class) {
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("predictions and labels differ in length (" +
                                std::to_string(predictions.size()) + " vs " +
                                std::to_string(labels.size()) + ")");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool pred = predictions[i] == positive_class;
    const bool gold = labels[i] == positive_class;
    if (pred && gold) {
      ++c.tp;
    } else if (pred) {
      ++c.fp;
    } else if (gold) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

double f1_score(const ConfusionCounts& c) {
  if (c.tp == 0) return (c.fp == 0 && c.fn == 0) ? 1.0 : 0.0;
  const double precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  const double recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  return 2.0 * precision * recall / (precision + recall);
}

double macro_f1(const std::vector<bool>& predictions, const std::vector<bool>& labels) {
  if (predictions.empty() && labels.empty()) {
    throw std::invalid_argument("macro F1 of an empty set is undefined");
  }
  const double positive = f1_score(confusion(predictions, labels, true));
  const double negative = f1_score(confusion(predictions, labels, false));
  return (positive + negative) / 2.0;
}

}  // namespace mtal
