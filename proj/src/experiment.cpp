#include "mtal/experiment.hpp"

#include <atomic>
#include <mutex>
#include <thread>

namespace mtal {

namespace {

std::vector<Sample> load_checked(const std::filesystem::path& path, const ColumnSchema& schema) {
  LoadResult result = load_split(path, schema);
  if (!result.ok()) {
    std::string msg = path.string() + ": " + std::to_string(result.errors.size()) +
                      " malformed line(s)";
    for (const auto& e : result.errors) {
      msg += "\n  line " + std::to_string(e.line) + ": " + e.message;
    }
    throw CorpusError(msg);
  }
  return std::move(result.samples);
}

}  // namespace

RawSplits load_splits(const ExperimentConfig& cfg, const std::filesystem::path& train,
                      const std::filesystem::path& dev,
                      const std::optional<std::filesystem::path>& test) {
  if (!cfg.corpus) throw ConfigError({"a [corpus] section with the column mapping is required"});
  RawSplits splits;
  splits.train = load_checked(train, *cfg.corpus);
  splits.dev = load_checked(dev, *cfg.corpus);
  if (test) splits.test = load_checked(*test, *cfg.schema_for_test());
  return splits;
}

TrainOutcome run_experiment(const ExperimentConfig& cfg, const RawSplits& splits,
                            const TrainOptions& options) {
  const HashedNgramEncoder encoder(cfg.train.encoder);
  const auto& policy = cfg.train.emoji;
  const EncodedSplit train_split = encode_split(splits.train, policy, encoder);
  const EncodedSplit dev_split = encode_split(splits.dev, policy, encoder);
  std::optional<EncodedSplit> test_split;
  if (splits.test) test_split = encode_split(*splits.test, policy, encoder);
  return train(cfg.train, train_split, dev_split, test_split ? &*test_split : nullptr, options);
}

std::vector<GridRow> run_grid(const ExperimentConfig& cfg, const RawSplits& splits,
                              std::size_t jobs, const std::function<void(const GridRow&)>& on_cell) {
  if (!cfg.grid) throw ConfigError({"a [grid] section is required for a sweep"});
  const std::size_t n = cfg.grid->cell_count();
  std::vector<GridRow> rows(n);
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;

  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      GridRow& row = rows[i];
      row.cell = i;
      row.config = cfg.grid_cell(i);
      try {
        row.report = run_experiment(row.config, splits).report;
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
      if (on_cell) {
        std::lock_guard lock(callback_mutex);
        on_cell(row);
      }
    }
  };

  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return rows;
}

}  // namespace mtal
