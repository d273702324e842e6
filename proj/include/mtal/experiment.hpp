#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "mtal/config.hpp"
#include "mtal/corpus.hpp"
#include "mtal/report.hpp"
#include "mtal/trainer.hpp"

namespace mtal {

struct RawSplits {
  std::vector<Sample> train;
  std::vector<Sample> dev;
  std::optional<std::vector<Sample>> test;
};

/// Loads the splits with the config's column mapping. Throws CorpusError
/// (listing every malformed line) or ConfigError when no mapping is configured.
RawSplits load_splits(const ExperimentConfig& cfg, const std::filesystem::path& train,
                      const std::filesystem::path& dev,
                      const std::optional<std::filesystem::path>& test);

/// Preprocesses, encodes and trains one configuration.
TrainOutcome run_experiment(const ExperimentConfig& cfg, const RawSplits& splits,
                            const TrainOptions& options = {});

/// Runs every grid cell, `jobs` at a time. A failing cell is recorded and the
/// sweep continues. Rows come back in cell order regardless of scheduling.
std::vector<GridRow> run_grid(const ExperimentConfig& cfg, const RawSplits& splits,
                              std::size_t jobs = 1,
                              const std::function<void(const GridRow&)>& on_cell = {});

}  // namespace mtal
