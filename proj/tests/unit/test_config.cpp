#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "mtal/config.hpp"

using namespace mtal;

namespace {

const char* kCorpus =
    "[corpus]\n"
    "id_column = 0\n"
    "text_column = 1\n"
    "offensive_column = 2\n"
    "hate_column = 3\n"
    "vulgar_column = 4\n"
    "violent_column = 5\n";

std::vector<std::string> problems_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config takes the documented defaults") {
  const auto cfg = parse_config("schema_version = 1\n");
  const auto& t = cfg.train;
  CHECK(t.batch_size == 64);
  CHECK(t.k_selected == std::optional<std::size_t>{10});
  CHECK(t.uncertainty_mode == UncertaintyMode::equal);
  CHECK(t.loss_mode == LossMode::dynamic);
  CHECK(t.static_loss_weights == TaskTriple<double>{0.7, 0.15, 0.15});
  CHECK(t.uncertainty_weights == TaskTriple<double>{2, 1, 1});
  CHECK(t.patience == 3);
  CHECK(t.max_epochs == 20);
  CHECK(t.seed == 42);
  CHECK(t.hidden == 64);
  CHECK(t.optimizer.learning_rate == 0.01);
  CHECK(t.dynamic_weights.min_acceptable_f1 == 0.75);
  CHECK(t.emoji.mode == EmojiMode::weighted);
  CHECK(t.emoji.lexicon == default_emoji_lexicon());
  CHECK(t.encoder.dim == std::size_t{1} << 18);
  CHECK_FALSE(cfg.corpus.has_value());
  CHECK_FALSE(cfg.grid.has_value());
}

TEST_CASE("full config parses and the canonical form round-trips") {
  const std::string text = std::string(
                               "# experiment\n"
                               "schema_version = 1\n"
                               "[train]\n"
                               "k_selected = all\n"
                               "uncertainty_mode = dynamic\n"
                               "loss_mode = static\n"
                               "static_loss_weights = 0.5, 0.25, 0.25\n"
                               "seed = 7\n"
                               "[optimizer]\n"
                               "learning_rate = 0.005\n"
                               "[uncertainty]\n"
                               "violent_coefficient = 0.3333333333333333\n"
                               "[emoji]\n"
                               "mode = keep\n"
                               "lexicon = none\n"
                               "[emoji.lexicon]\n"
                               "😡 = 3\n"
                               "[encoder]\n"
                               "dim = 1024\n"
                               "char_ngrams = none\n") +
                           kCorpus + "[corpus.test]\nvulgar_column = none\nviolent_column = none\n";
  const auto cfg = parse_config(text);
  CHECK_FALSE(cfg.train.k_selected.has_value());
  CHECK(cfg.train.uncertainty_mode == UncertaintyMode::dynamic);
  CHECK(cfg.train.loss_mode == LossMode::fixed);
  CHECK(cfg.train.seed == 7);
  CHECK(cfg.train.optimizer.learning_rate == 0.005);
  CHECK(cfg.train.dynamic_weights.violent_coefficient == doctest::Approx(1.0 / 3.0));
  CHECK(cfg.train.emoji.lexicon == EmojiLexicon{{"😡", 3.0}});
  CHECK(cfg.train.encoder.char_ngrams.empty());
  REQUIRE(cfg.corpus.has_value());
  CHECK(cfg.corpus->violent_column == std::optional<std::size_t>{5});
  REQUIRE(cfg.test_corpus.has_value());
  CHECK_FALSE(cfg.test_corpus->violent_column.has_value());
  CHECK(cfg.test_corpus->offensive_column == std::optional<std::size_t>{2});

  const auto rendered = render_config(cfg);
  const auto again = parse_config(rendered);
  CHECK(render_config(again) == rendered);
  CHECK(config_hash(again) == config_hash(cfg));
}

TEST_CASE("every problem is reported at once") {
  const auto problems = problems_of(
      "schema_version = 1\n"
      "[train]\n"
      "batch_size = 8\n"
      "k_selected = 10\n"
      "learning_rat = 0.1\n"
      "patience = soon\n"
      "[optimiser]\n"
      "x = 1\n"
      "[emoji]\n"
      "mode = loud\n");
  CHECK(problems.size() >= 4);
  std::string all;
  for (const auto& p : problems) all += p + "\n";
  CHECK(all.find("learning_rat") != std::string::npos);
  CHECK(all.find("optimiser") != std::string::npos);
  CHECK(all.find("patience") != std::string::npos);
  CHECK(all.find("loud") != std::string::npos);
  CHECK(all.find("exceeds batch_size") != std::string::npos);
}

TEST_CASE("schema version is required and checked") {
  CHECK_FALSE(problems_of("[train]\nseed = 1\n").empty());
  CHECK_FALSE(problems_of("schema_version = 2\n").empty());
  CHECK_FALSE(problems_of("schema_version = 1\nschema_version = 1\n").empty());
  CHECK_FALSE(problems_of("schema_version = 1\n[train\n").empty());
  CHECK_FALSE(problems_of("schema_version = 1\n[train]\njust words\n").empty());
  CHECK_FALSE(problems_of("schema_version = 1\n[corpus]\ntext_column = 1\n").empty());
  CHECK_FALSE(problems_of("schema_version = 1\n[encoder]\ndim = 1000\n").empty());
}

TEST_CASE("lexicon paths resolve against the config directory") {
  const auto dir = std::filesystem::temp_directory_path() / "mtal_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "lex.tsv") << "🔪\t4.0\n";
    std::ofstream(dir / "exp.cfg") << "schema_version = 1\n[emoji]\nlexicon = lex.tsv\n";
  }
  const auto cfg = load_config(dir / "exp.cfg");
  CHECK(cfg.train.emoji.lexicon == EmojiLexicon{{"🔪", 4.0}});
  CHECK_THROWS_AS(parse_config("schema_version = 1\n[emoji]\nlexicon = nope.tsv\n", dir), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.cfg"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("grid enumeration order and cells") {
  const auto cfg = parse_config(
      "schema_version = 1\n"
      "[grid]\n"
      "loss_modes = equal, static, dynamic\n"
      "uncertainty_modes = none, equal, weighted, dynamic\n"
      "emoji_modes = strip, weighted\n"
      "k_values = 10, all\n"
      "static_loss_weights = 0.7, 0.15, 0.15 ; 0.5, 0.25, 0.25\n");
  REQUIRE(cfg.grid.has_value());
  CHECK(cfg.grid->cell_count() == 3 * 4 * 2 * 2 * 2);

  const auto c0 = cfg.grid_cell(0);
  CHECK_FALSE(c0.grid.has_value());
  CHECK(c0.train.uncertainty_mode == UncertaintyMode::none);
  CHECK(c0.train.loss_mode == LossMode::equal);
  CHECK(c0.train.emoji.mode == EmojiMode::strip);
  CHECK(cfg.grid_cell(1).train.uncertainty_mode == UncertaintyMode::equal);
  CHECK(cfg.grid_cell(4).train.loss_mode == LossMode::fixed);
  CHECK(cfg.grid_cell(12).train.static_loss_weights == TaskTriple<double>{0.5, 0.25, 0.25});
  CHECK_FALSE(cfg.grid_cell(24).train.k_selected.has_value());
  CHECK(cfg.grid_cell(48).train.emoji.mode == EmojiMode::weighted);
  CHECK_THROWS_AS(cfg.grid_cell(96), std::out_of_range);

  // distinct cells hash differently
  CHECK(config_hash(cfg.grid_cell(0)) != config_hash(cfg.grid_cell(1)));
  CHECK_FALSE(problems_of("schema_version = 1\n[grid]\nk_values = 10, 100\n").empty());
  CHECK_FALSE(problems_of("schema_version = 1\n[grid]\nloss_modes = equal, best\n").empty());
}

TEST_CASE("hex rendering") {
  CHECK(hex64(0) == "0000000000000000");
  CHECK(hex64(0xDEADBEEFULL) == "00000000deadbeef");
  const auto a = parse_config("schema_version = 1\n");
  const auto b = parse_config("schema_version = 1\n[train]\nseed = 43\n");
  CHECK(config_hash(a) != config_hash(b));
}
