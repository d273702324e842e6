#include "mtal/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mtal {

namespace {

void check_batch(std::span<const LabeledVector> batch, const TaskTriple<double>& weights,
                 const Parameters& params) {
  if (batch.empty()) throw std::invalid_argument("training batch is empty");
  bool any_positive = false;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("task weights must be finite and non-negative");
    }
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw std::invalid_argument("at least one task weight must be positive");
  for (const auto& ex : batch) {
    if (ex.features == nullptr || ex.features->dim != params.dim) {
      throw ModelError("feature dimensionality does not match the model");
    }
  }
}

// Pre-activations of the shared layer.
void shared_preactivation(const Parameters& p, const FeatureVector& x, std::vector<double>& pre) {
  pre.assign(p.shared_bias.begin(), p.shared_bias.end());
  const std::size_t h = p.hidden;
  for (std::size_t k = 0; k < x.nnz(); ++k) {
    const double xv = x.values[k];
    const double* row = p.shared_weights.data() + static_cast<std::size_t>(x.indices[k]) * h;
    for (std::size_t j = 0; j < h; ++j) pre[j] += xv * row[j];
  }
}

TaskLogits head_logits(const Parameters& p, const std::vector<double>& activation) {
  TaskLogits logits;
  for (Task t : kTasks) {
    const auto& w = p.head_weights[t];
    double z = p.head_bias[t];
    for (std::size_t j = 0; j < p.hidden; ++j) z += w[j] * activation[j];
    logits[t] = z;
  }
  return logits;
}

TaskTriple<std::size_t> count_labeled(std::span<const LabeledVector> batch) {
  TaskTriple<std::size_t> n{0, 0, 0};
  for (const auto& ex : batch) {
    for (Task t : kTasks) {
      if (ex.labels[t]) ++n[t];
    }
  }
  return n;
}

bool gradients_finite(const Gradients& g) {
  const auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(g.shared_bias)) return false;
  for (const auto& [row, values] : g.shared_rows) {
    if (!finite(values)) return false;
  }
  for (Task t : kTasks) {
    if (!finite(g.head_weights[t]) || !std::isfinite(g.head_bias[t])) return false;
  }
  return true;
}

// --- checkpoint encoding ---------------------------------------------------

constexpr char kMagic[8] = {'M', 'T', 'A', 'L', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kCheckpointVersion = 1;

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_params(std::string& out, const Parameters& p) {
  for (double v : p.shared_weights) put_f64(out, v);
  for (double v : p.shared_bias) put_f64(out, v);
  for (Task t : kTasks) {
    for (double v : p.head_weights[t]) put_f64(out, v);
  }
  for (Task t : kTasks) put_f64(out, p.head_bias[t]);
}

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}

  std::uint64_t u64() {
    if (data_.size() - pos_ < 8) throw ModelError("checkpoint is truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += 8;
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::string bytes(std::size_t n) {
    if (data_.size() - pos_ < n) throw ModelError("checkpoint is truncated");
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  void params(Parameters& p) {
    for (double& v : p.shared_weights) v = f64();
    for (double& v : p.shared_bias) v = f64();
    for (Task t : kTasks) {
      for (double& v : p.head_weights[t]) v = f64();
    }
    for (Task t : kTasks) p.head_bias[t] = f64();
  }

  bool at_end() const { return pos_ == data_.size(); }

 private:
  std::string data_;
  std::size_t pos_ = 0;
};

}  // namespace

Parameters Parameters::zeros(std::size_t dim, std::size_t hidden) {
  Parameters p;
  p.dim = dim;
  p.hidden = hidden;
  p.shared_weights.assign(dim * hidden, 0.0);
  p.shared_bias.assign(hidden, 0.0);
  for (Task t : kTasks) p.head_weights[t].assign(hidden, 0.0);
  return p;
}

double& Parameters::at(std::size_t flat) {
  const std::size_t n_shared = dim * hidden;
  if (flat < n_shared) return shared_weights[flat];
  flat -= n_shared;
  if (flat < hidden) return shared_bias[flat];
  flat -= hidden;
  if (flat < 3 * hidden) return head_weights[flat / hidden][flat % hidden];
  flat -= 3 * hidden;
  if (flat < 3) return head_bias[flat];
  throw std::out_of_range("parameter index out of range");
}

double Parameters::at(std::size_t flat) const { return const_cast<Parameters&>(*this).at(flat); }

bool Parameters::all_finite() const {
  const auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(shared_weights) || !finite(shared_bias)) return false;
  for (Task t : kTasks) {
    if (!finite(head_weights[t]) || !std::isfinite(head_bias[t])) return false;
  }
  return true;
}

double Gradients::at(std::size_t flat) const {
  const std::size_t n_shared = dim * hidden;
  if (flat < n_shared) {
    const auto it = shared_rows.find(static_cast<std::uint32_t>(flat / hidden));
    return it == shared_rows.end() ? 0.0 : it->second[flat % hidden];
  }
  flat -= n_shared;
  if (flat < hidden) return shared_bias[flat];
  flat -= hidden;
  if (flat < 3 * hidden) return head_weights[flat / hidden][flat % hidden];
  flat -= 3 * hidden;
  if (flat < 3) return head_bias[flat];
  throw std::out_of_range("gradient index out of range");
}

ModelState ModelState::zeros(std::size_t dim, std::size_t hidden) {
  ModelState s;
  s.params = Parameters::zeros(dim, hidden);
  s.first_moment = Parameters::zeros(dim, hidden);
  s.second_moment = Parameters::zeros(dim, hidden);
  s.touched_rows.assign(dim, 0);
  return s;
}

ModelState ModelState::initialize(std::size_t dim, std::size_t hidden, Rng& rng) {
  ModelState s = zeros(dim, hidden);
  const double shared_limit = std::sqrt(6.0 / static_cast<double>(dim + hidden));
  for (double& w : s.params.shared_weights) w = rng.uniform(-shared_limit, shared_limit);
  const double head_limit = std::sqrt(6.0 / static_cast<double>(hidden + 1));
  for (Task t : kTasks) {
    for (double& w : s.params.head_weights[t]) w = rng.uniform(-head_limit, head_limit);
  }
  return s;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double bce_loss(double logit, bool label) {
  const double y = label ? 1.0 : 0.0;
  return std::max(logit, 0.0) - logit * y + std::log1p(std::exp(-std::abs(logit)));
}

TaskLogits forward(const Parameters& params, const FeatureVector& x) {
  if (x.dim != params.dim) {
    throw ModelError("feature dimensionality " + std::to_string(x.dim) +
                     " does not match model dimensionality " + std::to_string(params.dim));
  }
  std::vector<double> pre;
  shared_preactivation(params, x, pre);
  for (double& v : pre) v = std::max(v, 0.0);
  return head_logits(params, pre);
}

TaskProbabilities predict_proba(const Parameters& params, const FeatureVector& x) {
  TaskLogits z = forward(params, x);
  for (double& v : z) v = sigmoid(v);
  return z;
}

BatchLoss batch_loss(const Parameters& params, std::span<const LabeledVector> batch,
                     const TaskTriple<double>& task_weights) {
  BatchLoss out;
  out.labeled = count_labeled(batch);
  for (const auto& ex : batch) {
    const TaskLogits z = forward(params, *ex.features);
    for (Task t : kTasks) {
      if (ex.labels[t]) out.per_task[t] += bce_loss(z[t], *ex.labels[t]);
    }
  }
  for (Task t : kTasks) {
    if (out.labeled[t] > 0) out.per_task[t] /= static_cast<double>(out.labeled[t]);
    out.total += task_weights[t] * out.per_task[t];
  }
  return out;
}

BatchLoss compute_gradients(const Parameters& params, std::span<const LabeledVector> batch,
                            const TaskTriple<double>& task_weights, Gradients& grads) {
  const std::size_t h = params.hidden;
  grads.dim = params.dim;
  grads.hidden = h;
  grads.shared_rows.clear();
  grads.shared_bias.assign(h, 0.0);
  for (Task t : kTasks) {
    grads.head_weights[t].assign(h, 0.0);
    grads.head_bias[t] = 0.0;
  }

  BatchLoss out;
  out.labeled = count_labeled(batch);

  std::vector<double> pre;
  std::vector<double> act(h);
  std::vector<double> delta(h);
  for (const auto& ex : batch) {
    const FeatureVector& x = *ex.features;
    if (x.dim != params.dim) throw ModelError("feature dimensionality does not match the model");
    shared_preactivation(params, x, pre);
    for (std::size_t j = 0; j < h; ++j) act[j] = std::max(pre[j], 0.0);
    const TaskLogits z = head_logits(params, act);

    std::fill(delta.begin(), delta.end(), 0.0);
    for (Task t : kTasks) {
      if (!ex.labels[t]) continue;
      const bool y = *ex.labels[t];
      out.per_task[t] += bce_loss(z[t], y);
      if (task_weights[t] == 0.0) continue;
      const double dz = task_weights[t] * (sigmoid(z[t]) - (y ? 1.0 : 0.0)) /
                        static_cast<double>(out.labeled[t]);
      auto& gw = grads.head_weights[t];
      const auto& w = params.head_weights[t];
      for (std::size_t j = 0; j < h; ++j) {
        gw[j] += dz * act[j];
        delta[j] += dz * w[j];
      }
      grads.head_bias[t] += dz;
    }
    for (std::size_t j = 0; j < h; ++j) {
      if (pre[j] <= 0.0) delta[j] = 0.0;
      grads.shared_bias[j] += delta[j];
    }
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      auto [it, inserted] = grads.shared_rows.try_emplace(x.indices[k]);
      if (inserted) it->second.assign(h, 0.0);
      const double xv = x.values[k];
      for (std::size_t j = 0; j < h; ++j) it->second[j] += xv * delta[j];
    }
  }

  for (Task t : kTasks) {
    if (out.labeled[t] > 0) out.per_task[t] /= static_cast<double>(out.labeled[t]);
    out.total += task_weights[t] * out.per_task[t];
  }
  return out;
}

TaskTriple<double> backward_and_step(ModelState& state, std::span<const LabeledVector> batch,
                                     const TaskTriple<double>& task_weights,
                                     const OptimizerConfig& opt) {
  Parameters& p = state.params;
  check_batch(batch, task_weights, p);

  Gradients g;
  const BatchLoss loss = compute_gradients(p, batch, task_weights, g);
  if (!std::isfinite(loss.total) || !gradients_finite(g)) {
    std::ostringstream msg;
    msg << "non-finite loss or gradient at step " << state.step + 1 << " (losses "
        << loss.per_task.offensive() << ", " << loss.per_task.violent() << ", "
        << loss.per_task.vulgar() << ")";
    throw DivergenceError(msg.str());
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(opt.beta1, t);
  const double bc2 = 1.0 - std::pow(opt.beta2, t);
  const double lr = opt.learning_rate;
  const double decay = lr * opt.weight_decay;
  const auto update = [&](double& param, double& m, double& v, double grad) {
    m = opt.beta1 * m + (1.0 - opt.beta1) * grad;
    v = opt.beta2 * v + (1.0 - opt.beta2) * grad * grad;
    param -= decay * param;
    param -= lr * (m / bc1) / (std::sqrt(v / bc2) + opt.epsilon);
  };

  Parameters& m = state.first_moment;
  Parameters& v = state.second_moment;
  const std::size_t h = p.hidden;
  auto next_row = g.shared_rows.begin();
  for (std::size_t row = 0; row < p.dim; ++row) {
    const std::size_t base = row * h;
    if (next_row != g.shared_rows.end() && next_row->first == row) {
      state.touched_rows[row] = 1;
      const auto& grow = next_row->second;
      for (std::size_t j = 0; j < h; ++j) {
        update(p.shared_weights[base + j], m.shared_weights[base + j], v.shared_weights[base + j],
               grow[j]);
      }
      ++next_row;
    } else if (state.touched_rows[row]) {
      for (std::size_t j = 0; j < h; ++j) {
        update(p.shared_weights[base + j], m.shared_weights[base + j], v.shared_weights[base + j],
               0.0);
      }
    } else {
      // zero moments: the adaptive term is exactly zero
      for (std::size_t j = 0; j < h; ++j) p.shared_weights[base + j] -= decay * p.shared_weights[base + j];
    }
  }
  for (std::size_t j = 0; j < h; ++j) {
    update(p.shared_bias[j], m.shared_bias[j], v.shared_bias[j], g.shared_bias[j]);
  }
  for (Task task : kTasks) {
    if (task_weights[task] == 0.0) continue;
    for (std::size_t j = 0; j < h; ++j) {
      update(p.head_weights[task][j], m.head_weights[task][j], v.head_weights[task][j],
             g.head_weights[task][j]);
    }
    update(p.head_bias[task], m.head_bias[task], v.head_bias[task], g.head_bias[task]);
  }

  if (!p.all_finite()) {
    throw DivergenceError("parameters became non-finite at step " + std::to_string(state.step));
  }
  return loss.per_task;
}

void save_checkpoint(const std::filesystem::path& path, const ModelState& state,
                     std::uint64_t config_hash) {
  std::string out(kMagic, sizeof(kMagic));
  put_u64(out, kCheckpointVersion);
  put_u64(out, state.params.dim);
  put_u64(out, state.params.hidden);
  put_u64(out, state.step);
  put_u64(out, config_hash);
  put_params(out, state.params);
  put_params(out, state.first_moment);
  put_params(out, state.second_moment);
  out.append(reinterpret_cast<const char*>(state.touched_rows.data()), state.touched_rows.size());

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ModelError("cannot write checkpoint: " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw ModelError("failed writing checkpoint: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ModelError("cannot open checkpoint: " + path.string());
  std::ostringstream buf;
  buf << file.rdbuf();
  Reader in(buf.str());

  if (in.bytes(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) {
    throw ModelError("not a checkpoint file: " + path.string());
  }
  if (const auto version = in.u64(); version != kCheckpointVersion) {
    throw ModelError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto dim = static_cast<std::size_t>(in.u64());
  const auto hidden = static_cast<std::size_t>(in.u64());
  Checkpoint ck;
  ck.state = ModelState::zeros(dim, hidden);
  ck.state.step = in.u64();
  ck.config_hash = in.u64();
  in.params(ck.state.params);
  in.params(ck.state.first_moment);
  in.params(ck.state.second_moment);
  const std::string touched = in.bytes(dim);
  std::memcpy(ck.state.touched_rows.data(), touched.data(), dim);
  if (!in.at_end()) throw ModelError("trailing bytes in checkpoint: " + path.string());
  return ck;
}

}  // namespace mtal
