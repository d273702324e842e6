#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mtal/corpus.hpp"
#include "mtal/trainer.hpp"

namespace mtal {

inline constexpr int kConfigSchemaVersion = 1;

/// All problems found in a config file, reported together.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Axes of an experiment sweep. Cells are the cross product, enumerated with
/// emoji mode outermost, then k, static weights, loss mode and uncertainty
/// mode innermost.
struct GridAxes {
  std::vector<LossMode> loss_modes;
  std::vector<UncertaintyMode> uncertainty_modes;
  std::vector<EmojiMode> emoji_modes;
  std::vector<std::optional<std::size_t>> k_values;
  std::vector<TaskTriple<double>> static_loss_weights;

  std::size_t cell_count() const {
    return loss_modes.size() * uncertainty_modes.size() * emoji_modes.size() * k_values.size() *
           static_loss_weights.size();
  }
};

struct ExperimentConfig {
  TrainConfig train;
  std::optional<ColumnSchema> corpus;       // train/dev layout
  std::optional<ColumnSchema> test_corpus;  // defaults to `corpus`
  std::optional<GridAxes> grid;

  const ColumnSchema* schema_for_test() const {
    if (test_corpus) return &*test_corpus;
    return corpus ? &*corpus : nullptr;
  }

  /// One cell of the grid as a standalone config (grid section removed).
  ExperimentConfig grid_cell(std::size_t index) const;
};

/// Parses the sectioned key = value format. `base_dir` resolves relative
/// lexicon paths. Throws ConfigError listing every problem.
ExperimentConfig parse_config(std::string_view text,
                              const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical, fully resolved rendering; parse_config(render_config(c)) == c.
/// The emoji lexicon is written inline so the text is self-contained.
std::string render_config(const ExperimentConfig& cfg);

std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string hex64(std::uint64_t value);

}  // namespace mtal
