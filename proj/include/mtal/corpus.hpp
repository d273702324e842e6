#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mtal/task_triple.hpp"

namespace mtal {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A binary label that may be absent (test splits only carry offensive labels).
using OptionalLabel = std::optional<bool>;

struct Sample {
  std::string id;
  std::string raw_text;
  TaskTriple<OptionalLabel> labels;

  bool fully_labeled() const {
    return labels.offensive().has_value() && labels.violent().has_value() &&
           labels.vulgar().has_value();
  }

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Positive/negative token pair for one task, e.g. OFF / NOT_OFF.
struct LabelTokens {
  std::string positive;
  std::string negative;
};

/// Where each field lives in a tab-separated record. Absent label columns
/// produce unlabeled samples for that task.
struct ColumnSchema {
  std::size_t id_column = 0;
  std::size_t text_column = 1;
  std::optional<std::size_t> offensive_column;
  std::optional<std::size_t> hate_column;
  std::optional<std::size_t> vulgar_column;
  std::optional<std::size_t> violent_column;
  // 0 means "highest referenced column + 1".
  std::size_t num_columns = 0;
  bool has_header = false;
  TaskTriple<LabelTokens> tokens{LabelTokens{"OFF", "NOT_OFF"}, LabelTokens{"V", "NOT_V"},
                                 LabelTokens{"VLG", "NOT_VLG"}};

  std::size_t expected_columns() const;
  std::optional<std::size_t> label_column(Task t) const;
};

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct LoadResult {
  std::vector<Sample> samples;
  std::vector<LineError> errors;

  bool ok() const { return errors.empty(); }
};

/// Parses one split. A missing or unreadable file throws CorpusError; malformed
/// records are skipped and reported in LoadResult::errors with their line numbers.
LoadResult load_split(const std::filesystem::path& path, const ColumnSchema& schema);

/// Same as load_split, reading from an in-memory buffer.
LoadResult parse_split(std::string_view content, const ColumnSchema& schema);

struct TaskCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t unlabeled = 0;

  std::size_t labeled() const { return positive + negative; }
  friend bool operator==(const TaskCounts&, const TaskCounts&) = default;
};

struct SplitStats {
  std::size_t total = 0;
  TaskTriple<TaskCounts> tasks;

  friend bool operator==(const SplitStats&, const SplitStats&) = default;
};

SplitStats split_stats(const std::vector<Sample>& samples);

/// key=value lines, one per field, prefixed with `prefix.` when non-empty:
///   total=N
///   offensive.positive=N  offensive.negative=N  offensive.unlabeled=N  (and so on per task)
std::string dump_stats(const SplitStats& stats, const std::string& prefix = "");

}  // namespace mtal
