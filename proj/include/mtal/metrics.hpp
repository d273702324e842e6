#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mtal {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Counts with `positive_class` treated as the positive label.
ConfusionCounts confusion(const std::vector<bool>& predictions, const std::vector<bool>& labels,
                          bool positive_class = true);

/// F1 of the class described by `c`: 2PR/(P+R); 0 when the class has support
/// or predictions but no true positives; 1 when the class is absent and never
/// predicted (tp = fp = fn = 0).
double f1_score(const ConfusionCounts& c);

/// Mean of the positive-class and negative-class F1. Throws
/// std::invalid_argument on empty input or a length mismatch.
double macro_f1(const std::vector<bool>& predictions, const std::vector<bool>& labels);

/// Decision rule: probability strictly above 0.5 is positive.
constexpr bool predict_positive(double probability) { return probability > 0.5; }

}  // namespace mtal
