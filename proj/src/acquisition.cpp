#include "mtal/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mtal {

std::string_view to_string(UncertaintyMode mode) {
  switch (mode) {
    case UncertaintyMode::none: return "none";
    case UncertaintyMode::equal: return "equal";
    case UncertaintyMode::weighted: return "weighted";
    case UncertaintyMode::dynamic: return "dynamic";
  }
  return "?";
}

UncertaintyMode parse_uncertainty_mode(std::string_view name) {
  if (name == "none") return UncertaintyMode::none;
  if (name == "equal") return UncertaintyMode::equal;
  if (name == "weighted") return UncertaintyMode::weighted;
  if (name == "dynamic") return UncertaintyMode::dynamic;
  throw std::invalid_argument("unknown uncertainty mode '" + std::string(name) +
                              "' (expected none, equal, weighted or dynamic)");
}

double binary_entropy(double p) {
  p = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

TaskEntropies task_entropies(const TaskTriple<double>& probabilities) {
  TaskEntropies h;
  for (Task t : kTasks) h[t] = binary_entropy(probabilities[t]);
  return h;
}

double combine_equal(const TaskEntropies& h) {
  return (h.offensive() + h.violent() + h.vulgar()) / 3.0;
}

double combine_weighted(const TaskEntropies& h, const UncertaintyWeights& w) {
  return (w.offensive() * h.offensive() + w.violent() * h.violent() + w.vulgar() * h.vulgar()) /
         (w.offensive() + w.violent() + w.vulgar());
}

double dynamic_offensive_weight(double f1_offensive, const DynamicWeightConfig& cfg) {
  const double threshold = cfg.min_acceptable_f1;
  if (f1_offensive < threshold) {
    return std::min(cfg.max_weight, (threshold - f1_offensive) + 1.0);
  }
  return std::max(cfg.min_weight, 1.0 - (f1_offensive - threshold));
}

double combine_dynamic(const TaskEntropies& h, double w_off, const DynamicWeightConfig& cfg) {
  return w_off * h.offensive() + cfg.violent_coefficient * w_off * h.violent() +
         cfg.vulgar_coefficient * w_off * h.vulgar();
}

double combine_focus(const TaskEntropies& h, const TaskTriple<double>& focus) {
  return focus.offensive() * h.offensive() + focus.violent() * h.violent() +
         focus.vulgar() * h.vulgar();
}

std::vector<std::size_t> select_top_k(std::span<const double> scores, std::size_t k) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto before = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    before);
  order.resize(take);
  return order;
}

}  // namespace mtal
