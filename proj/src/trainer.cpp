#include "mtal/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mtal/metrics.hpp"
#include "mtal/random.hpp"

namespace mtal {

std::string_view to_string(LossMode mode) {
  switch (mode) {
    case LossMode::equal: return "equal";
    case LossMode::fixed: return "static";
    case LossMode::dynamic: return "dynamic";
  }
  return "?";
}

LossMode parse_loss_mode(std::string_view name) {
  if (name == "equal") return LossMode::equal;
  if (name == "static") return LossMode::fixed;
  if (name == "dynamic") return LossMode::dynamic;
  throw std::invalid_argument("unknown loss mode '" + std::string(name) +
                              "' (expected equal, static or dynamic)");
}

std::vector<std::string> TrainConfig::validate() const {
  std::vector<std::string> errors;
  if (batch_size == 0) errors.emplace_back("batch_size must be positive");
  if (k_selected) {
    if (*k_selected == 0) errors.emplace_back("k_selected must be positive or 'all'");
    if (*k_selected > batch_size) {
      errors.push_back("k_selected (" + std::to_string(*k_selected) + ") exceeds batch_size (" +
                       std::to_string(batch_size) + ")");
    }
  }
  double static_sum = 0.0;
  for (double w : static_loss_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      errors.emplace_back("static loss weights must be finite and non-negative");
    }
    static_sum += w;
  }
  if (!(static_sum > 0.0)) errors.emplace_back("static loss weights must not all be zero");
  for (double w : uncertainty_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      errors.emplace_back("uncertainty weights must be positive");
      break;
    }
  }
  const auto& dyn = dynamic_weights;
  if (!(dyn.min_weight > 0.0 && dyn.min_weight <= dyn.max_weight)) {
    errors.emplace_back("dynamic weights need 0 < min_weight <= max_weight");
  }
  if (!(dyn.min_acceptable_f1 > 0.0 && dyn.min_acceptable_f1 < 1.0)) {
    errors.emplace_back("dynamic min_acceptable_f1 must lie in (0, 1)");
  }
  for (double w : dyn.initial_weights) {
    if (!(w > 0.0)) {
      errors.emplace_back("dynamic initial weights must be positive");
      break;
    }
  }
  if (!(dyn.violent_coefficient > 0.0) || !(dyn.vulgar_coefficient > 0.0)) {
    errors.emplace_back("dynamic task coefficients must be positive");
  }
  if (patience == 0) errors.emplace_back("patience must be positive");
  if (max_epochs == 0) errors.emplace_back("max_epochs must be positive");
  if (hidden == 0) errors.emplace_back("hidden width must be positive");
  if (!(optimizer.learning_rate > 0.0)) errors.emplace_back("learning rate must be positive");
  if (!(optimizer.weight_decay >= 0.0)) errors.emplace_back("weight decay must be non-negative");
  if (!(emoji.default_weight > 0.0)) errors.emplace_back("emoji default weight must be positive");
  for (const auto& [key, w] : emoji.lexicon) {
    if (!(w > 0.0)) {
      errors.push_back("emoji lexicon weight for " + key + " must be positive");
    }
  }
  try {
    encoder.validate();
  } catch (const std::invalid_argument& e) {
    errors.emplace_back(e.what());
  }
  return errors;
}

std::size_t TrainConfig::selected_per_batch(std::size_t batch_len) const {
  if (uncertainty_mode == UncertaintyMode::none || !k_selected) return batch_len;
  return std::min(*k_selected, batch_len);
}

TaskTriple<double> loss_weights_equal() { return TaskTriple<double>::filled(1.0 / 3.0); }

TaskTriple<double> loss_weights_static(const TaskTriple<double>& weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("static loss weights must be finite and non-negative");
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("static loss weights must not all be zero");
  TaskTriple<double> out;
  for (Task t : kTasks) out[t] = weights[t] / sum;
  return out;
}

TaskTriple<double> loss_weights_dynamic(const TaskTriple<double>& previous_losses) {
  double sum = 0.0;
  for (double l : previous_losses) sum += std::max(l, 0.0);
  if (!(sum > 0.0)) return loss_weights_equal();
  TaskTriple<double> out;
  for (Task t : kTasks) out[t] = std::max(previous_losses[t], 0.0) / sum;
  return out;
}

EncodedSplit encode_split(const std::vector<Sample>& samples, const EmojiPolicy& policy,
                          const Encoder& encoder) {
  EncodedSplit split;
  split.features.reserve(samples.size());
  split.labels.reserve(samples.size());
  for (const auto& s : samples) {
    split.features.push_back(encoder.encode(normalize(s.raw_text, policy)));
    split.labels.push_back(s.labels);
  }
  return split;
}

TaskTriple<std::optional<double>> evaluate(const Parameters& params, const EncodedSplit& split) {
  TaskTriple<std::vector<bool>> predictions;
  TaskTriple<std::vector<bool>> gold;
  for (std::size_t i = 0; i < split.size(); ++i) {
    const auto probs = predict_proba(params, split.features[i]);
    for (Task t : kTasks) {
      if (!split.labels[i][t]) continue;
      predictions[t].push_back(predict_positive(probs[t]));
      gold[t].push_back(*split.labels[i][t]);
    }
  }
  TaskTriple<std::optional<double>> f1;
  for (Task t : kTasks) {
    if (!gold[t].empty()) f1[t] = macro_f1(predictions[t], gold[t]);
  }
  return f1;
}

namespace {

double acquisition_score(const TrainConfig& cfg, const TaskEntropies& h, bool first_epoch,
                         double w_off) {
  switch (cfg.uncertainty_mode) {
    case UncertaintyMode::none:
      return 0.0;
    case UncertaintyMode::equal:
      return combine_equal(h);
    case UncertaintyMode::weighted:
      return combine_weighted(h, cfg.uncertainty_weights);
    case UncertaintyMode::dynamic:
      return first_epoch ? combine_focus(h, cfg.dynamic_weights.initial_weights)
                         : combine_dynamic(h, w_off, cfg.dynamic_weights);
  }
  return 0.0;
}

std::uint64_t extend_digest(std::uint64_t digest, std::size_t index) {
  return splitmix64(digest ^ splitmix64(static_cast<std::uint64_t>(index)));
}

}  // namespace

TrainOutcome train(const TrainConfig& cfg, const EncodedSplit& train_split,
                   const EncodedSplit& dev_split, const EncodedSplit* test_split,
                   const TrainOptions& options) {
  if (const auto errors = cfg.validate(); !errors.empty()) {
    std::string msg = "invalid training config:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  if (train_split.size() == 0) throw std::invalid_argument("training split is empty");
  if (dev_split.size() == 0) throw std::invalid_argument("dev split is empty");
  for (const auto* split : {&train_split, &dev_split, test_split}) {
    if (split == nullptr) continue;
    for (const auto& fv : split->features) {
      if (fv.dim != cfg.encoder.dim) {
        throw std::invalid_argument("encoded features do not match encoder dim");
      }
    }
  }

  Rng init_rng = Rng::stream(cfg.seed, "init");
  Rng shuffle_rng = Rng::stream(cfg.seed, "shuffle");

  TrainOutcome outcome;
  RunReport& report = outcome.report;
  report.train_size = train_split.size();
  report.dev_size = dev_split.size();
  if (test_split != nullptr) report.test_size = test_split->size();

  ModelState state = ModelState::initialize(cfg.encoder.dim, cfg.hidden, init_rng);
  outcome.best_state = state;

  TaskTriple<double> loss_weights = cfg.loss_mode == LossMode::fixed
                                        ? loss_weights_static(cfg.static_loss_weights)
                                        : loss_weights_equal();
  double w_off = cfg.dynamic_weights.initial_weights.offensive();
  double best_f1 = -1.0;
  std::size_t epochs_without_improvement = 0;

  std::vector<std::size_t> order(train_split.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<LabeledVector> selected;
  std::vector<double> scores;

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    EpochRecord record;
    record.epoch = epoch;
    record.loss_weights = loss_weights;
    record.uncertainty_w_off = w_off;

    shuffle_rng.shuffle(std::span<std::size_t>(order));

    TaskTriple<double> loss_sum{0.0, 0.0, 0.0};
    TaskTriple<std::size_t> loss_count{0, 0, 0};

    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, end - start);
      const std::size_t take = cfg.selected_per_batch(batch.size());

      std::vector<std::size_t> picks;
      if (take >= batch.size()) {
        picks.assign(batch.begin(), batch.end());
      } else {
        scores.clear();
        for (std::size_t idx : batch) {
          const auto probs = predict_proba(state.params, train_split.features[idx]);
          scores.push_back(acquisition_score(cfg, task_entropies(probs), epoch == 0, w_off));
        }
        for (std::size_t pos : select_top_k(scores, take)) picks.push_back(batch[pos]);
      }

      selected.clear();
      for (std::size_t idx : picks) {
        selected.push_back({&train_split.features[idx], train_split.labels[idx]});
        record.selection_digest = extend_digest(record.selection_digest, idx);
        if (options.record_selected_indices) record.selected_indices.push_back(idx);
        for (Task t : kTasks) {
          if (train_split.labels[idx][t]) ++loss_count[t];
        }
      }

      const auto losses = backward_and_step(state, selected, loss_weights, cfg.optimizer);
      for (Task t : kTasks) {
        std::size_t labeled = 0;
        for (const auto& ex : selected) labeled += ex.labels[t].has_value() ? 1 : 0;
        loss_sum[t] += losses[t] * static_cast<double>(labeled);
      }
      record.selected += picks.size();
    }

    for (Task t : kTasks) {
      record.train_loss[t] =
          loss_count[t] > 0 ? loss_sum[t] / static_cast<double>(loss_count[t]) : 0.0;
    }
    report.cumulative_selected += record.selected;
    record.cumulative_selected = report.cumulative_selected;

    record.dev_macro_f1 = evaluate(state.params, dev_split);
    if (!record.dev_macro_f1.offensive()) {
      throw std::invalid_argument("dev split has no offensive labels; early stopping needs them");
    }
    const double dev_f1 = *record.dev_macro_f1.offensive();

    if (epoch == 0 || dev_f1 >= best_f1 + cfg.min_improvement) {
      best_f1 = dev_f1;
      report.best_epoch = epoch;
      outcome.best_state = state;
      epochs_without_improvement = 0;
      record.improved = true;
    } else {
      ++epochs_without_improvement;
    }

    // Schedules for the next epoch.
    w_off = dynamic_offensive_weight(dev_f1, cfg.dynamic_weights);
    if (cfg.loss_mode == LossMode::dynamic) loss_weights = loss_weights_dynamic(record.train_loss);

    if (options.on_epoch) options.on_epoch(record);
    report.epochs.push_back(std::move(record));

    if (epochs_without_improvement >= cfg.patience) {
      report.stopped_early = epoch + 1 < cfg.max_epochs;
      break;
    }
  }

  report.best_dev_offensive_f1 = best_f1;
  if (test_split != nullptr) report.test_macro_f1 = evaluate(outcome.best_state.params, *test_split);
  return outcome;
}

}  // namespace mtal
