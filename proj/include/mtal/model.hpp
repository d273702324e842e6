#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "mtal/corpus.hpp"
#include "mtal/encoder.hpp"
#include "mtal/random.hpp"
#include "mtal/task_triple.hpp"

namespace mtal {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a loss or gradient stops being finite.
class DivergenceError : public ModelError {
 public:
  using ModelError::ModelError;
};

using TaskLogits = TaskTriple<double>;
using TaskProbabilities = TaskTriple<double>;

/// Shared ReLU layer (dim -> hidden) feeding one linear logit head per task.
/// shared_weights is row-major with one row of `hidden` values per input
/// feature, so a sparse input touches only its own rows.
struct Parameters {
  std::size_t dim = 0;
  std::size_t hidden = 0;
  std::vector<double> shared_weights;
  std::vector<double> shared_bias;
  TaskTriple<std::vector<double>> head_weights;
  TaskTriple<double> head_bias{0.0, 0.0, 0.0};

  static Parameters zeros(std::size_t dim, std::size_t hidden);

  /// Flat view used by gradient checks: shared weights, shared bias, then
  /// per-task head weights, then the three head biases.
  std::size_t size() const { return dim * hidden + hidden + 3 * hidden + 3; }
  double& at(std::size_t flat);
  double at(std::size_t flat) const;

  bool all_finite() const;

  friend bool operator==(const Parameters&, const Parameters&) = default;
};

struct ModelState {
  Parameters params;
  Parameters first_moment;
  Parameters second_moment;
  // Rows of shared_weights that have ever received a gradient. Untouched rows
  // have zero moments, so their optimizer update reduces to weight decay.
  std::vector<std::uint8_t> touched_rows;
  std::uint64_t step = 0;

  /// Glorot-uniform weights, zero biases, zero moments.
  static ModelState initialize(std::size_t dim, std::size_t hidden, Rng& rng);
  static ModelState zeros(std::size_t dim, std::size_t hidden);

  friend bool operator==(const ModelState&, const ModelState&) = default;
};

struct OptimizerConfig {
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
};

/// One training example as seen by the model. Missing labels are masked out
/// of that task's loss.
struct LabeledVector {
  const FeatureVector* features = nullptr;
  TaskTriple<OptionalLabel> labels;
};

struct Gradients {
  std::size_t dim = 0;
  std::size_t hidden = 0;
  std::map<std::uint32_t, std::vector<double>> shared_rows;  // sparse rows of shared_weights
  std::vector<double> shared_bias;
  TaskTriple<std::vector<double>> head_weights;
  TaskTriple<double> head_bias{0.0, 0.0, 0.0};

  /// Same flat layout as Parameters::at.
  double at(std::size_t flat) const;
};

double sigmoid(double z);

/// Binary cross-entropy on a logit, max(z,0) - z*y + log1p(exp(-|z|)).
double bce_loss(double logit, bool label);

TaskLogits forward(const Parameters& params, const FeatureVector& x);
TaskProbabilities predict_proba(const Parameters& params, const FeatureVector& x);

struct BatchLoss {
  TaskTriple<double> per_task{0.0, 0.0, 0.0};  // unweighted means over labeled samples
  TaskTriple<std::size_t> labeled{0, 0, 0};
  double total = 0.0;                          // sum of weight * mean
};

/// Loss of a batch without gradients.
BatchLoss batch_loss(const Parameters& params, std::span<const LabeledVector> batch,
                     const TaskTriple<double>& task_weights);

/// Loss and analytic gradient of sum_t w_t * mean_i BCE(z_ti, y_ti).
BatchLoss compute_gradients(const Parameters& params, std::span<const LabeledVector> batch,
                            const TaskTriple<double>& task_weights, Gradients& grads);

/// One decoupled-weight-decay Adam step on the weighted multi-task loss.
/// Heads whose task weight is zero are left untouched (no moment update, no
/// decay). Returns the unweighted per-task mean losses.
TaskTriple<double> backward_and_step(ModelState& state, std::span<const LabeledVector> batch,
                                     const TaskTriple<double>& task_weights,
                                     const OptimizerConfig& opt);

/// Binary checkpoint: magic, version, shapes, step, config hash, then all
/// parameters and optimizer moments as little-endian IEEE-754 doubles.
void save_checkpoint(const std::filesystem::path& path, const ModelState& state,
                     std::uint64_t config_hash);

struct Checkpoint {
  ModelState state;
  std::uint64_t config_hash = 0;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace mtal
