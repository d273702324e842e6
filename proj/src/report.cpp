#include "mtal/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace mtal {

namespace {

using Json = nlohmann::ordered_json;

Json triple_json(const TaskTriple<double>& t) {
  Json j;
  for (Task task : kTasks) j[std::string(task_name(task))] = t[task];
  return j;
}

Json optional_triple_json(const TaskTriple<std::optional<double>>& t) {
  Json j;
  for (Task task : kTasks) {
    const std::string name(task_name(task));
    if (t[task]) {
      j[name] = *t[task];
    } else {
      j[name] = nullptr;
    }
  }
  return j;
}

std::string full_precision(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string k_label(const std::optional<std::size_t>& k) {
  return k ? std::to_string(*k) : std::string("all");
}

std::string weights_label(const TaskTriple<double>& w) {
  return full_precision(w.offensive()) + "/" + full_precision(w.violent()) + "/" +
         full_precision(w.vulgar());
}

// Value shown in summaries: test offensive F1 when available, else best dev.
std::pair<double, const char*> headline(const RunReport& r) {
  if (r.test_macro_f1 && r.test_macro_f1->offensive()) {
    return {*r.test_macro_f1->offensive(), "test"};
  }
  return {r.best_dev_offensive_f1, "dev"};
}

}  // namespace

std::string serialize_report(const RunReport& report, const ExperimentConfig& cfg) {
  Json j;
  j["schema"] = "mtal-run-report/1";
  j["config_hash"] = hex64(config_hash(cfg));
  j["config"] = render_config(cfg);

  Json data;
  data["train"] = report.train_size;
  data["dev"] = report.dev_size;
  if (report.test_size) {
    data["test"] = *report.test_size;
  } else {
    data["test"] = nullptr;
  }
  j["data"] = data;

  Json epochs = Json::array();
  for (const auto& e : report.epochs) {
    Json ej;
    ej["epoch"] = e.epoch;
    ej["train_loss"] = triple_json(e.train_loss);
    ej["dev_macro_f1"] = optional_triple_json(e.dev_macro_f1);
    ej["selected"] = e.selected;
    ej["cumulative_selected"] = e.cumulative_selected;
    ej["loss_weights"] = triple_json(e.loss_weights);
    ej["uncertainty_w_off"] = e.uncertainty_w_off;
    ej["selection_digest"] = hex64(e.selection_digest);
    ej["improved"] = e.improved;
    if (!e.selected_indices.empty()) ej["selected_indices"] = e.selected_indices;
    epochs.push_back(std::move(ej));
  }
  j["epochs"] = std::move(epochs);
  j["epochs_run"] = report.epochs.size();
  j["best_epoch"] = report.best_epoch;
  j["best_dev_offensive_macro_f1"] = report.best_dev_offensive_f1;
  j["stopped_early"] = report.stopped_early;
  j["cumulative_selected"] = report.cumulative_selected;
  if (report.test_macro_f1) {
    j["test_macro_f1"] = optional_triple_json(*report.test_macro_f1);
  } else {
    j["test_macro_f1"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string render_summary_tsv(const std::vector<GridRow>& rows) {
  std::ostringstream out;
  out << "cell\tstatus\tloss_mode\tuncertainty_mode\temoji_mode\tk\tstatic_loss_weights\t"
         "config_hash\tepochs_run\tbest_epoch\tbest_dev_offensive_macro_f1\t"
         "test_offensive_macro_f1\tcumulative_selected\terror\n";
  for (const auto& row : rows) {
    const auto& tc = row.config.train;
    out << row.cell << '\t' << (row.ok ? "ok" : "failed") << '\t' << to_string(tc.loss_mode)
        << '\t' << to_string(tc.uncertainty_mode) << '\t' << to_string(tc.emoji.mode) << '\t'
        << k_label(tc.k_selected) << '\t' << weights_label(tc.static_loss_weights) << '\t'
        << hex64(config_hash(row.config)) << '\t';
    if (row.ok) {
      const auto& r = row.report;
      out << r.epochs.size() << '\t' << r.best_epoch << '\t'
          << full_precision(r.best_dev_offensive_f1) << '\t';
      if (r.test_macro_f1 && r.test_macro_f1->offensive()) {
        out << full_precision(*r.test_macro_f1->offensive());
      }
      out << '\t' << r.cumulative_selected << '\t';
    } else {
      out << "\t\t\t\t\t";
      std::string msg = row.error;
      for (char& c : msg) {
        if (c == '\t' || c == '\n') c = ' ';
      }
      out << msg;
    }
    out << '\n';
  }
  return out.str();
}

std::string render_summary_markdown(const std::vector<GridRow>& rows) {
  // group -> (loss, uncertainty) -> row
  using Group = std::tuple<std::string, std::string, std::string>;
  std::map<Group, std::vector<const GridRow*>> groups;
  std::vector<Group> group_order;
  std::vector<LossMode> losses;
  std::vector<UncertaintyMode> uncertainties;
  for (const auto& row : rows) {
    const auto& tc = row.config.train;
    Group g{std::string(to_string(tc.emoji.mode)), k_label(tc.k_selected),
            weights_label(tc.static_loss_weights)};
    if (!groups.count(g)) group_order.push_back(g);
    groups[g].push_back(&row);
    if (std::find(losses.begin(), losses.end(), tc.loss_mode) == losses.end()) {
      losses.push_back(tc.loss_mode);
    }
    if (std::find(uncertainties.begin(), uncertainties.end(), tc.uncertainty_mode) ==
        uncertainties.end()) {
      uncertainties.push_back(tc.uncertainty_mode);
    }
  }

  std::ostringstream out;
  out << "# Grid summary\n\nOffensive macro F1 (%) of the best checkpoint.\n";
  for (const auto& g : group_order) {
    const auto& [emoji, k, weights] = g;
    out << "\n## emoji=" << emoji << ", k=" << k << ", static weights=" << weights << "\n\n";
    out << "| MTL \\ uncertainty |";
    for (auto u : uncertainties) out << ' ' << to_string(u) << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < uncertainties.size(); ++i) out << "---|";
    out << '\n';
    for (auto l : losses) {
      out << "| " << to_string(l) << " |";
      for (auto u : uncertainties) {
        std::string cell = " - ";
        for (const GridRow* row : groups[g]) {
          if (row->config.train.loss_mode != l || row->config.train.uncertainty_mode != u) continue;
          if (!row->ok) {
            cell = " failed ";
          } else {
            const auto [value, source] = headline(row->report);
            char buf[32];
            std::snprintf(buf, sizeof(buf), " %.2f%s ", 100.0 * value,
                          std::string(source) == "dev" ? " (dev)" : "");
            cell = buf;
          }
        }
        out << cell << '|';
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace mtal
