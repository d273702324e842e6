#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtal/config.hpp"
#include "mtal/trainer.hpp"

namespace mtal {

/// RunReport as JSON text (schema "mtal-run-report/1", see docs/formats.md).
/// Contains no timing, so identical runs serialize to identical bytes.
std::string serialize_report(const RunReport& report, const ExperimentConfig& cfg);

/// One row of a grid summary.
struct GridRow {
  std::size_t cell = 0;
  ExperimentConfig config;
  bool ok = false;
  std::string error;  // set when !ok
  RunReport report;   // valid when ok
};

/// Long-form tab-separated summary, one line per cell, full-precision values
/// identical to those in the per-cell reports.
std::string render_summary_tsv(const std::vector<GridRow>& rows);

/// Pivot tables (loss mode rows x uncertainty mode columns) of the test
/// offensive macro F1 in percent, one table per emoji/k/static-weight group.
/// Falls back to dev F1 when no test split was supplied.
std::string render_summary_markdown(const std::vector<GridRow>& rows);

}  // namespace mtal
