#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "mtal/corpus.hpp"
#include "mtal/random.hpp"

using namespace mtal;

namespace {

ColumnSchema full_schema() {
  ColumnSchema s;
  s.id_column = 0;
  s.text_column = 1;
  s.offensive_column = 2;
  s.hate_column = 3;
  s.vulgar_column = 4;
  s.violent_column = 5;
  return s;
}

}  // namespace

TEST_CASE("three well-formed lines") {
  const std::string data =
      "1\tيا كلب\tOFF\tNOT_HS\tNOT_VLG\tNOT_V\n"
      "2\tصباح الخير\tNOT_OFF\tNOT_HS\tNOT_VLG\tNOT_V\n"
      "3\tسأقتلك\tOFF\tHS1\tVLG\tV\n";
  const auto r = parse_split(data, full_schema());
  REQUIRE(r.ok());
  REQUIRE(r.samples.size() == 3);
  CHECK(r.samples[0].id == "1");
  CHECK(r.samples[0].raw_text == "يا كلب");
  CHECK(r.samples[0].labels == TaskTriple<OptionalLabel>{true, false, false});
  CHECK(r.samples[1].labels == TaskTriple<OptionalLabel>{false, false, false});
  CHECK(r.samples[2].labels == TaskTriple<OptionalLabel>{true, true, true});
  CHECK(r.samples[2].fully_labeled());
}

TEST_CASE("empty input gives no samples and no errors") {
  const auto r = parse_split("", full_schema());
  CHECK(r.samples.empty());
  CHECK(r.ok());
  CHECK(split_stats(r.samples) == SplitStats{});
}

TEST_CASE("malformed lines are reported with their line numbers") {
  const std::string data =
      "1\tok\tOFF\tNOT_HS\tNOT_VLG\tNOT_V\n"
      "2\ttoo few\tOFF\n"
      "\n"
      "4\t  \tOFF\tNOT_HS\tNOT_VLG\tNOT_V\n"
      "5\tbad label\tMAYBE\tNOT_HS\tNOT_VLG\tNOT_V\n"
      "6\tfine\tNOT_OFF\tNOT_HS\tNOT_VLG\tNOT_V\r\n"
      "7\tbad violent\tOFF\tNOT_HS\tNOT_VLG\tVIOLENT\n";
  const auto r = parse_split(data, full_schema());
  CHECK(r.samples.size() == 2);
  REQUIRE(r.errors.size() == 4);
  CHECK(r.errors[0].line == 2);
  CHECK(r.errors[0].message.find("columns") != std::string::npos);
  CHECK(r.errors[1].line == 4);
  CHECK(r.errors[2].line == 5);
  CHECK(r.errors[2].message.find("MAYBE") != std::string::npos);
  CHECK(r.errors[3].line == 7);
  CHECK(r.errors[3].message.find("violent") != std::string::npos);
}

TEST_CASE("offensive-only test layout leaves other tasks unlabeled") {
  ColumnSchema s = full_schema();
  s.vulgar_column.reset();
  s.violent_column.reset();
  const auto r = parse_split("a\tx\tOFF\tNOT_HS\nb\ty\tNOT_OFF\tNOT_HS\n", s);
  REQUIRE(r.ok());
  const auto stats = split_stats(r.samples);
  CHECK(stats.total == 2);
  CHECK(stats.tasks.offensive() == TaskCounts{1, 1, 0});
  CHECK(stats.tasks.violent() == TaskCounts{0, 0, 2});
  CHECK_FALSE(r.samples[0].fully_labeled());
}

TEST_CASE("header, byte order mark and custom tokens") {
  ColumnSchema s;
  s.id_column = 2;
  s.text_column = 0;
  s.offensive_column = 1;
  s.has_header = true;
  s.tokens.offensive() = {"1", "0"};
  const auto r = parse_split("\xEF\xBB\xBFtext\tlabel\tid\nhello\t1\tz9\nbye\t0\tz10\n", s);
  REQUIRE(r.ok());
  REQUIRE(r.samples.size() == 2);
  CHECK(r.samples[0].id == "z9");
  CHECK(r.samples[0].labels.offensive() == true);
  CHECK(r.samples[1].labels.offensive() == false);
  CHECK_FALSE(r.samples[1].labels.vulgar().has_value());
}

TEST_CASE("stats of a hand-counted list") {
  std::vector<Sample> samples(4);
  samples[0].labels = {true, false, false};
  samples[1].labels = {true, true, false};
  samples[2].labels = {false, false, false};
  samples[3].labels = {false, false, true};
  const auto stats = split_stats(samples);
  CHECK(stats.tasks.offensive() == TaskCounts{2, 2, 0});
  CHECK(stats.tasks.violent() == TaskCounts{1, 3, 0});
  CHECK(stats.tasks.vulgar() == TaskCounts{1, 3, 0});
  const auto text = dump_stats(stats, "dev");
  CHECK(text.find("dev.total=4\n") == 0);
  CHECK(text.find("dev.offensive.positive=2\n") != std::string::npos);
}

TEST_CASE("positive plus negative equals labeled count") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    std::vector<Sample> samples(rng.below(50));
    for (auto& s : samples) {
      for (Task t : kTasks) {
        const auto r = rng.below(3);
        if (r < 2) s.labels[t] = r == 0;
      }
    }
    const auto stats = split_stats(samples);
    for (Task t : kTasks) {
      std::size_t labeled = 0;
      for (const auto& s : samples) labeled += s.labels[t].has_value() ? 1 : 0;
      CHECK(stats.tasks[t].labeled() == labeled);
      CHECK(stats.tasks[t].labeled() + stats.tasks[t].unlabeled == samples.size());
    }
  }
}

TEST_CASE("missing file throws, real file loads") {
  CHECK_THROWS_AS(load_split("/nonexistent/train.tsv", full_schema()), CorpusError);
  const auto path = std::filesystem::temp_directory_path() / "mtal_corpus_test.tsv";
  {
    std::ofstream(path) << "1\tنص\tOFF\tNOT_HS\tVLG\tNOT_V\n";
  }
  const auto r = load_split(path, full_schema());
  CHECK(r.samples.size() == 1);
  CHECK(r.samples[0].labels.vulgar() == true);
  std::filesystem::remove(path);
}
