// mtal: multi-task active learning experiments from the command line.
//
//   mtal validate   --config C --train T [--dev D] [--test E] [--expect osact2022]
//   mtal train      --config C --train T --dev D [--test E] --out DIR [--seed-override S]
//   mtal grid       --grid G --train T --dev D [--test E] --out DIR [--jobs N] [--seed-override S]
//   mtal preprocess --input IN --out OUT [--config C] [--emoji-mode M] [--lexicon L]
//   mtal synth      --out DIR [--train-size N] [--dev-size N] [--test-size N] [--seed S]
//
// Exit codes: 0 success, 1 runtime failure, 2 input or configuration error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mtal/config.hpp"
#include "mtal/corpus.hpp"
#include "mtal/experiment.hpp"
#include "mtal/model.hpp"
#include "mtal/report.hpp"
#include "mtal/synthetic.hpp"
#include "mtal/textprep.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;

// Thrown for problems with user input that are not config/corpus errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_epoch(const mtal::EpochRecord& e) {
  std::fprintf(stderr,
               "epoch %zu  loss off/vio/vul %.4f/%.4f/%.4f  dev off F1 %.4f  selected %llu "
               "(cumulative %llu)%s\n",
               e.epoch, e.train_loss.offensive(), e.train_loss.violent(), e.train_loss.vulgar(),
               e.dev_macro_f1.offensive().value_or(0.0),
               static_cast<unsigned long long>(e.selected),
               static_cast<unsigned long long>(e.cumulative_selected), e.improved ? "  *" : "");
}

std::string timing_json(double seconds) {
  std::ostringstream out;
  out << "{\n  \"wall_clock_seconds\": " << seconds << "\n}\n";
  return out.str();
}

// Published OSACT2022 split sizes and label counts.
struct ExpectedSplit {
  const char* name;
  std::size_t total;
  std::optional<std::size_t> offensive_pos, offensive_neg, vulgar_pos, vulgar_neg, violent_pos,
      violent_neg;
};

constexpr ExpectedSplit kOsact2022[] = {
    {"train", 8557, 3066, 5491, 132, 8425, 60, 8497},
    {"dev", 1266, 403, 863, 16, 1250, 6, 1260},
    {"test", 2541, 887, 1654, std::nullopt, std::nullopt, std::nullopt, std::nullopt},
};

std::vector<std::string> compare_expected(const ExpectedSplit& want, const mtal::SplitStats& got) {
  std::vector<std::string> diffs;
  const auto check = [&](const std::string& what, std::optional<std::size_t> expected,
                         std::size_t actual) {
    if (expected && *expected != actual) {
      diffs.push_back(std::string(want.name) + "." + what + ": expected " +
                      std::to_string(*expected) + ", found " + std::to_string(actual));
    }
  };
  check("total", want.total, got.total);
  check("offensive.positive", want.offensive_pos, got.tasks.offensive().positive);
  check("offensive.negative", want.offensive_neg, got.tasks.offensive().negative);
  check("vulgar.positive", want.vulgar_pos, got.tasks.vulgar().positive);
  check("vulgar.negative", want.vulgar_neg, got.tasks.vulgar().negative);
  check("violent.positive", want.violent_pos, got.tasks.violent().positive);
  check("violent.negative", want.violent_neg, got.tasks.violent().negative);
  return diffs;
}

struct DataPaths {
  std::string train;
  std::string dev;
  std::string test;

  std::optional<fs::path> test_path() const {
    return test.empty() ? std::nullopt : std::optional<fs::path>(test);
  }
};

int cmd_validate(const std::string& config_path, const DataPaths& data, const std::string& expect) {
  const auto cfg = mtal::load_config(config_path);
  if (!cfg.corpus) throw mtal::ConfigError({"a [corpus] section with the column mapping is required"});
  if (!expect.empty() && expect != "osact2022") {
    throw UsageError("unknown --expect preset '" + expect + "' (known: osact2022)");
  }

  bool clean = true;
  std::vector<std::string> mismatches;
  const std::pair<const char*, const std::string*> splits[] = {
      {"train", &data.train}, {"dev", &data.dev}, {"test", &data.test}};
  bool any = false;
  for (const auto& [name, path] : splits) {
    if (path->empty()) continue;
    any = true;
    const std::string split_name = name;
    const auto& schema = split_name == "test" ? *cfg.schema_for_test() : *cfg.corpus;
    const auto result = mtal::load_split(*path, schema);
    for (const auto& e : result.errors) {
      std::cerr << *path << ":" << e.line << ": " << e.message << '\n';
    }
    clean = clean && result.ok();
    const auto stats = mtal::split_stats(result.samples);
    std::cout << mtal::dump_stats(stats, split_name);
    std::cout << split_name << ".errors=" << result.errors.size() << '\n';
    if (!expect.empty()) {
      for (const auto& want : kOsact2022) {
        if (split_name == want.name) {
          for (auto& d : compare_expected(want, stats)) mismatches.push_back(std::move(d));
        }
      }
    }
  }
  if (!any) throw UsageError("give at least one of --train, --dev, --test");
  for (const auto& m : mismatches) std::cerr << "mismatch: " << m << '\n';
  return clean && mismatches.empty() ? kExitOk : kExitInput;
}

int cmd_train(const std::string& config_path, const DataPaths& data, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override, bool quiet) {
  auto cfg = mtal::load_config(config_path);
  if (cfg.grid) throw mtal::ConfigError({"config has a [grid] section; use the grid command"});
  if (seed_override) cfg.train.seed = *seed_override;
  const auto splits = mtal::load_splits(cfg, data.train, data.dev, data.test_path());

  fs::create_directories(out_dir);
  mtal::TrainOptions options;
  if (!quiet) options.on_epoch = print_epoch;
  const auto start = std::chrono::steady_clock::now();
  const auto outcome = mtal::run_experiment(cfg, splits, options);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path out(out_dir);
  write_file(out / "report.json", mtal::serialize_report(outcome.report, cfg));
  write_file(out / "config.resolved", mtal::render_config(cfg));
  write_file(out / "timing.json", timing_json(seconds));
  mtal::save_checkpoint(out / "model.ckpt", outcome.best_state, mtal::config_hash(cfg));

  const auto& r = outcome.report;
  std::cout << "best_epoch=" << r.best_epoch << '\n'
            << "best_dev_offensive_macro_f1=" << r.best_dev_offensive_f1 << '\n'
            << "cumulative_selected=" << r.cumulative_selected << '\n';
  if (r.test_macro_f1 && r.test_macro_f1->offensive()) {
    std::cout << "test_offensive_macro_f1=" << *r.test_macro_f1->offensive() << '\n';
  }
  std::cout << "report=" << (out / "report.json").string() << '\n';
  return kExitOk;
}

int cmd_grid(const std::string& grid_path, const DataPaths& data, const std::string& out_dir,
             std::size_t jobs, std::optional<std::uint64_t> seed_override, bool quiet) {
  auto cfg = mtal::load_config(grid_path);
  if (!cfg.grid) throw mtal::ConfigError({"grid config needs a [grid] section"});
  if (seed_override) cfg.train.seed = *seed_override;
  const auto splits = mtal::load_splits(cfg, data.train, data.dev, data.test_path());

  const fs::path out(out_dir);
  fs::create_directories(out);
  const std::size_t total = cfg.grid->cell_count();
  const auto start = std::chrono::steady_clock::now();
  const auto rows = mtal::run_grid(cfg, splits, jobs, [&](const mtal::GridRow& row) {
    char name[32];
    std::snprintf(name, sizeof(name), "cell-%03zu", row.cell);
    const fs::path dir = out / name;
    fs::create_directories(dir);
    write_file(dir / "config.resolved", mtal::render_config(row.config));
    if (row.ok) {
      write_file(dir / "report.json", mtal::serialize_report(row.report, row.config));
    } else {
      write_file(dir / "error.txt", row.error + "\n");
    }
    if (!quiet) {
      std::fprintf(stderr, "[%zu/%zu] %s %s\n", row.cell + 1, total, name,
                   row.ok ? "ok" : ("failed: " + row.error).c_str());
    }
  });
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  write_file(out / "summary.tsv", mtal::render_summary_tsv(rows));
  write_file(out / "summary.md", mtal::render_summary_markdown(rows));
  write_file(out / "grid.resolved", mtal::render_config(cfg));
  write_file(out / "timing.json", timing_json(seconds));

  std::size_t failed = 0;
  for (const auto& row : rows) failed += row.ok ? 0 : 1;
  std::cout << "cells=" << rows.size() << '\n' << "failed=" << failed << '\n'
            << "summary=" << (out / "summary.tsv").string() << '\n';
  return failed == 0 ? kExitOk : kExitRuntime;
}

int cmd_preprocess(const std::string& input, const std::string& output,
                   const std::string& config_path, const std::string& emoji_mode,
                   const std::string& lexicon) {
  mtal::EmojiPolicy policy = mtal::TrainConfig{}.emoji;
  if (!config_path.empty()) policy = mtal::load_config(config_path).train.emoji;
  if (!emoji_mode.empty()) {
    try {
      policy.mode = mtal::parse_emoji_mode(emoji_mode);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (!lexicon.empty()) policy.lexicon = mtal::load_emoji_lexicon(lexicon);

  const std::string content = read_file(input);
  std::string cleaned;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto eol = content.find('\n', pos);
    if (eol == std::string::npos) eol = content.size();
    std::string_view line(content.data() + pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    cleaned += mtal::render_weighted(mtal::normalize(line, policy));
    cleaned += '\n';
    pos = eol + 1;
  }
  write_file(output, cleaned);
  return kExitOk;
}

int cmd_synth(const std::string& out_dir, std::size_t train_size, std::size_t dev_size,
              std::size_t test_size, std::uint64_t seed) {
  const fs::path out(out_dir);
  fs::create_directories(out);
  const auto make = [&](std::size_t n, const char* prefix) {
    mtal::SyntheticSpec spec;
    spec.size = n;
    spec.seed = seed;
    spec.id_prefix = prefix;
    return mtal::generate_synthetic(spec);
  };
  mtal::write_tsv(make(train_size, "train"), out / "train.tsv");
  mtal::write_tsv(make(dev_size, "dev"), out / "dev.tsv");
  mtal::write_tsv(make(test_size, "test"), out / "test.tsv", true);

  write_file(out / "corpus.cfg",
             "# Column mapping for the generated files.\n"
             "schema_version = 1\n\n"
             "[corpus]\n"
             "id_column = 0\ntext_column = 1\noffensive_column = 2\nhate_column = 3\n"
             "vulgar_column = 4\nviolent_column = 5\n\n"
             "[corpus.test]\n"
             "vulgar_column = none\nviolent_column = none\n");
  std::cout << "wrote " << (out / "train.tsv").string() << ", dev.tsv, test.tsv, corpus.cfg\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-task active learning for offensive speech detection"};
  app.require_subcommand(1);

  DataPaths data;
  std::string config_path;
  std::string grid_path;
  std::string out_dir;
  std::string expect;
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed_override;
  bool quiet = false;

  const auto add_data = [&](CLI::App* cmd, bool need_dev) {
    cmd->add_option("--train", data.train, "Training split (tab-separated)")->required(need_dev);
    auto* dev = cmd->add_option("--dev", data.dev, "Development split");
    if (need_dev) dev->required();
    cmd->add_option("--test", data.test, "Test split");
  };

  auto* validate = app.add_subcommand("validate", "Parse splits and print label statistics");
  validate->add_option("--config", config_path, "Config with the [corpus] column mapping")->required();
  add_data(validate, false);
  validate->add_option("--expect", expect, "Check counts against a known release (osact2022)");

  auto* train = app.add_subcommand("train", "Run one experiment");
  train->add_option("--config", config_path, "Experiment config")->required();
  add_data(train, true);
  train->add_option("--out", out_dir, "Output directory")->required();
  train->add_option("--seed-override", seed_override, "Replace the config seed");
  train->add_flag("--quiet", quiet, "No per-epoch progress");

  auto* grid = app.add_subcommand("grid", "Run an experiment grid");
  grid->add_option("--grid", grid_path, "Config with a [grid] section")->required();
  add_data(grid, true);
  grid->add_option("--out", out_dir, "Output directory")->required();
  grid->add_option("--jobs", jobs, "Cells run in parallel")->check(CLI::PositiveNumber);
  grid->add_option("--seed-override", seed_override, "Replace the config seed");
  grid->add_flag("--quiet", quiet, "No per-cell progress");

  std::string input;
  std::string output;
  std::string emoji_mode;
  std::string lexicon;
  auto* preprocess = app.add_subcommand("preprocess", "Clean raw tweets, one per line");
  preprocess->add_option("--input", input, "Raw text file")->required();
  preprocess->add_option("--out", output, "Cleaned output file")->required();
  preprocess->add_option("--config", config_path, "Take the emoji policy from this config");
  preprocess->add_option("--emoji-mode", emoji_mode, "strip, keep or weighted");
  preprocess->add_option("--lexicon", lexicon, "Emoji lexicon file (emoji<TAB>weight)");

  std::size_t train_size = 2000;
  std::size_t dev_size = 500;
  std::size_t test_size = 500;
  std::uint64_t synth_seed = 42;
  auto* synth = app.add_subcommand("synth", "Write a synthetic labeled corpus");
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--train-size", train_size, "Training samples");
  synth->add_option("--dev-size", dev_size, "Development samples");
  synth->add_option("--test-size", test_size, "Test samples");
  synth->add_option("--seed", synth_seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*validate) return cmd_validate(config_path, data, expect);
    if (*train) return cmd_train(config_path, data, out_dir, seed_override, quiet);
    if (*grid) return cmd_grid(grid_path, data, out_dir, jobs, seed_override, quiet);
    if (*preprocess) return cmd_preprocess(input, output, config_path, emoji_mode, lexicon);
    if (*synth) return cmd_synth(out_dir, train_size, dev_size, test_size, synth_seed);
  } catch (const mtal::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const mtal::CorpusError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const mtal::LexiconError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
