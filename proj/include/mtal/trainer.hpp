#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtal/acquisition.hpp"
#include "mtal/corpus.hpp"
#include "mtal/encoder.hpp"
#include "mtal/model.hpp"
#include "mtal/textprep.hpp"

namespace mtal {

enum class LossMode { equal, fixed, dynamic };

std::string_view to_string(LossMode mode);
/// Accepts "equal", "static" and "dynamic".
LossMode parse_loss_mode(std::string_view name);

struct TrainConfig {
  std::size_t batch_size = 64;
  std::optional<std::size_t> k_selected = 10;  // nullopt means every sample in the batch
  UncertaintyMode uncertainty_mode = UncertaintyMode::equal;
  LossMode loss_mode = LossMode::dynamic;
  TaskTriple<double> static_loss_weights{0.7, 0.15, 0.15};
  UncertaintyWeights uncertainty_weights{2.0, 1.0, 1.0};
  DynamicWeightConfig dynamic_weights;
  std::size_t patience = 3;
  std::size_t max_epochs = 20;
  std::uint64_t seed = 42;
  double min_improvement = 1e-6;
  std::size_t hidden = 64;
  OptimizerConfig optimizer;
  EmojiPolicy emoji{EmojiMode::weighted, default_emoji_lexicon(), 1.0};
  EncoderConfig encoder;

  /// Every violated constraint, empty when valid.
  std::vector<std::string> validate() const;

  /// Samples trained per batch of `batch_len` under this config.
  std::size_t selected_per_batch(std::size_t batch_len) const;
};

TaskTriple<double> loss_weights_equal();
/// Normalizes to sum 1. Throws std::invalid_argument for negative or all-zero weights.
TaskTriple<double> loss_weights_static(const TaskTriple<double>& weights);
/// Proportional to the previous epoch's per-task losses; equal when all are zero.
TaskTriple<double> loss_weights_dynamic(const TaskTriple<double>& previous_losses);

/// A split after preprocessing and encoding.
struct EncodedSplit {
  std::vector<FeatureVector> features;
  std::vector<TaskTriple<OptionalLabel>> labels;

  std::size_t size() const { return features.size(); }
};

EncodedSplit encode_split(const std::vector<Sample>& samples, const EmojiPolicy& policy,
                          const Encoder& encoder);

/// Macro F1 per task over the samples labeled for that task; nullopt for a
/// task with no labeled samples.
TaskTriple<std::optional<double>> evaluate(const Parameters& params, const EncodedSplit& split);

struct EpochRecord {
  std::size_t epoch = 0;
  TaskTriple<double> train_loss{0.0, 0.0, 0.0};
  TaskTriple<std::optional<double>> dev_macro_f1;
  std::uint64_t selected = 0;
  std::uint64_t cumulative_selected = 0;
  TaskTriple<double> loss_weights{0.0, 0.0, 0.0};
  double uncertainty_w_off = 0.0;
  std::uint64_t selection_digest = 0;  // hash of the selected train indices, in order
  std::vector<std::size_t> selected_indices;  // filled only when requested
  bool improved = false;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct RunReport {
  std::size_t train_size = 0;
  std::size_t dev_size = 0;
  std::optional<std::size_t> test_size;
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_dev_offensive_f1 = 0.0;
  bool stopped_early = false;
  std::uint64_t cumulative_selected = 0;
  std::optional<TaskTriple<std::optional<double>>> test_macro_f1;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

struct TrainOptions {
  bool record_selected_indices = false;
  std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainOutcome {
  RunReport report;
  ModelState best_state;  // reloaded checkpoint used for test evaluation
};

/// Joint multi-task training with per-batch uncertainty selection, task loss
/// weighting and early stopping on dev offensive macro F1. Throws
/// std::invalid_argument for an invalid config and DivergenceError when the
/// loss stops being finite.
TrainOutcome train(const TrainConfig& cfg, const EncodedSplit& train_split,
                   const EncodedSplit& dev_split, const EncodedSplit* test_split = nullptr,
                   const TrainOptions& options = {});

}  // namespace mtal
