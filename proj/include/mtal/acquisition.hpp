#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mtal/task_triple.hpp"

namespace mtal {

using TaskEntropies = TaskTriple<double>;
using UncertaintyWeights = TaskTriple<double>;

/// How per-task entropies are merged into one acquisition score.
enum class UncertaintyMode { none, equal, weighted, dynamic };

std::string_view to_string(UncertaintyMode mode);
UncertaintyMode parse_uncertainty_mode(std::string_view name);

/// Performance-driven schedule for the offensive focus weight.
struct DynamicWeightConfig {
  double min_acceptable_f1 = 0.75;
  double min_weight = 0.5;
  double max_weight = 2.0;
  // Focus weights used before any validation F1 exists.
  TaskTriple<double> initial_weights{2.0, 2.0 / 3.0, 0.5};
  // Violent and vulgar scores are these multiples of the offensive weight.
  double violent_coefficient = 2.0 / 3.0;
  double vulgar_coefficient = 0.5;
};

inline constexpr double kProbabilityClamp = 1e-12;

/// Binary entropy in nats; p is clamped to [1e-12, 1 - 1e-12] first.
double binary_entropy(double p);

TaskEntropies task_entropies(const TaskTriple<double>& probabilities);

double combine_equal(const TaskEntropies& h);

/// Weighted mean of the task entropies. Weights must be positive.
double combine_weighted(const TaskEntropies& h, const UncertaintyWeights& w);

/// Offensive focus weight for the next epoch given the offensive macro F1.
double dynamic_offensive_weight(double f1_offensive, const DynamicWeightConfig& cfg = {});

/// w_off*H_off + c_vio*w_off*H_vio + c_vul*w_off*H_vul (unnormalized).
double combine_dynamic(const TaskEntropies& h, double w_off, const DynamicWeightConfig& cfg = {});

/// Unnormalized weighted sum with explicit per-task focus weights; used for the
/// first epoch of dynamic sampling.
double combine_focus(const TaskEntropies& h, const TaskTriple<double>& focus);

/// Indices of the k largest scores ordered by descending score, ties broken
/// by lower index. Returns every index when k >= scores.size().
std::vector<std::size_t> select_top_k(std::span<const double> scores, std::size_t k);

}  // namespace mtal
