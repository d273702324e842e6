#include "doctest.h"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "mtal/random.hpp"
#include "mtal/textprep.hpp"
#include "mtal/unicode.hpp"
#include "../common/golden_text.hpp"

using namespace mtal;
using mtal::testing::kGolden;
using mtal::testing::random_text;

namespace {

EmojiPolicy keep_policy() { return EmojiPolicy{EmojiMode::keep, {}, 1.0}; }

std::string cleaned(const std::string& raw) { return render(normalize(raw, keep_policy())); }


bool has_run_of_three(std::u32string_view s) {
  for (std::size_t i = 2; i < s.size(); ++i) {
    if (s[i] == s[i - 1] && s[i] == s[i - 2]) return true;
  }
  return false;
}

// Random strings biased toward characters the cleaning rules care about.

}  // namespace

TEST_CASE("golden cleaning pairs") {
  CHECK(std::size(kGolden) >= 30);
  for (const auto& g : kGolden) {
    CAPTURE(g.raw);
    CHECK(cleaned(g.raw) == g.expected);
  }
}

TEST_CASE("hashtag content is kept as separate tokens") {
  const auto t = normalize("#وسم_جديد", keep_policy());
  REQUIRE(t.tokens.size() == 2);
  CHECK(t.tokens[0].text == "وسم");
  CHECK(t.tokens[1].text == "جديد");
}

TEST_CASE("weighted policy uses lexicon weights and the default for others") {
  EmojiPolicy policy{EmojiMode::weighted, {{"😡", 2.0}}, 1.0};
  const auto t = normalize("جميل 😡", policy);
  REQUIRE(t.tokens.size() == 2);
  CHECK(t.tokens[0] == WeightedToken{"جميل", 1.0, false});
  CHECK(t.tokens[1] == WeightedToken{"😡", 2.0, true});

  policy.default_weight = 0.5;
  const auto other = normalize("🌹", policy);
  REQUIRE(other.tokens.size() == 1);
  CHECK(other.tokens[0].weight == 0.5);
}

TEST_CASE("lexicon lookup ignores the emoji variation selector") {
  EmojiPolicy policy{EmojiMode::weighted, {{"❤", 3.0}}, 1.0};
  const auto t = normalize("❤️", policy);
  REQUIRE(t.tokens.size() == 1);
  CHECK(t.tokens[0].weight == 3.0);
}

TEST_CASE("strip drops emoji tokens, keep preserves them at weight 1") {
  const std::string raw = "يا 😡 ولد 🔪🔪 👍🏽";
  const auto stripped = normalize(raw, EmojiPolicy{EmojiMode::strip, default_emoji_lexicon(), 1.0});
  CHECK(render(stripped) == "يا ولد");
  for (const auto& tok : stripped.tokens) CHECK_FALSE(tok.emoji);

  const auto kept = normalize(raw, EmojiPolicy{EmojiMode::keep, default_emoji_lexicon(), 1.0});
  std::vector<std::string> emojis;
  for (const auto& tok : kept.tokens) {
    if (tok.emoji) emojis.push_back(tok.text);
    CHECK(tok.weight == 1.0);
  }
  CHECK(emojis == std::vector<std::string>{"😡", "🔪", "🔪", "👍🏽"});
}

TEST_CASE("render_weighted marks non-unit weights") {
  EmojiPolicy policy{EmojiMode::weighted, default_emoji_lexicon(), 1.0};
  CHECK(render_weighted(normalize("كلب 😡 🌹", policy)) == "كلب 😡|2.0 🌹");
  policy.default_weight = 1.5;
  CHECK(render_weighted(normalize("🌹", policy)) == "🌹|1.5");
  CHECK(format_weight(2.0) == "2.0");
  CHECK(format_weight(0.25) == "0.25");
}

TEST_CASE("lexicon file parsing") {
  const auto lex = parse_emoji_lexicon("# seed list\n😡\t2.0\n\n🔪\t1.5\r\n");
  CHECK(lex.size() == 2);
  CHECK(lex.at("😡") == 2.0);
  CHECK(lex.at("🔪") == 1.5);
  CHECK_THROWS_AS(parse_emoji_lexicon("😡 2.0\n"), LexiconError);
  CHECK_THROWS_AS(parse_emoji_lexicon("abc\t2.0\n"), LexiconError);
  CHECK_THROWS_AS(parse_emoji_lexicon("😡\t0\n"), LexiconError);
  CHECK_THROWS_AS(parse_emoji_lexicon("😡\t-1\n"), LexiconError);
  CHECK_THROWS_AS(parse_emoji_lexicon("😡\tbig\n"), LexiconError);
  CHECK_THROWS_AS(load_emoji_lexicon("/nonexistent/lexicon.tsv"), LexiconError);
  try {
    parse_emoji_lexicon("😡\t2\nxx\t1\n");
    FAIL("expected an error");
  } catch (const LexiconError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("shipped lexicon file matches the built-in list") {
  const auto lex = load_emoji_lexicon(MTAL_SOURCE_DIR "/data/emoji_lexicon.tsv");
  CHECK(lex == default_emoji_lexicon());
  for (const auto& [emoji, weight] : lex) CHECK(weight == 2.0);
}

TEST_CASE("emoji mode names round-trip") {
  for (auto mode : {EmojiMode::strip, EmojiMode::keep, EmojiMode::weighted}) {
    CHECK(parse_emoji_mode(to_string(mode)) == mode);
  }
  CHECK_THROWS_AS(parse_emoji_mode("loud"), std::invalid_argument);
}

TEST_CASE("pipeline properties over random unicode strings") {
  Rng rng(7);
  const EmojiPolicy policies[] = {
      {EmojiMode::strip, default_emoji_lexicon(), 1.0},
      {EmojiMode::keep, default_emoji_lexicon(), 1.0},
      {EmojiMode::weighted, default_emoji_lexicon(), 1.0},
  };
  for (int i = 0; i < 1000; ++i) {
    const std::string raw = random_text(rng);
    CAPTURE(raw);
    for (const auto& policy : policies) {
      CHECK(is_idempotent_check(raw, policy));
      const auto out = normalize(raw, policy);
      for (const auto& tok : out.tokens) {
        const auto cps = unicode::decode(tok.text);
        CHECK_FALSE(tok.text.empty());
        CHECK_FALSE(has_run_of_three(cps));
        CHECK(std::none_of(cps.begin(), cps.end(), unicode::is_arabic_diacritic_or_tatweel));
        CHECK(std::none_of(cps.begin(), cps.end(), unicode::is_whitespace));
        CHECK(tok.weight > 0.0);
        if (!tok.emoji) CHECK(tok.weight == 1.0);
        if (policy.mode == EmojiMode::strip) CHECK_FALSE(tok.emoji);
      }
    }
    const auto once = clean(raw);
    CHECK(clean(once) == once);
    CHECK_FALSE(has_run_of_three(unicode::decode(once)));
  }
}

TEST_CASE("keep mode preserves the emoji multiset of space-separated input") {
  Rng rng(11);
  const std::vector<std::string> emojis = {"😡", "🌹", "👍🏽", "🇸🇦", "❤️", "🔪"};
  const std::vector<std::string> words = {"كلب", "جميل", "word", "يا"};
  for (int i = 0; i < 200; ++i) {
    std::string raw;
    std::map<std::string, int> expected;
    std::string last;
    for (std::size_t n = rng.below(10); n > 0; --n) {
      std::string piece;
      if (rng.uniform() < 0.5) {
        piece = emojis[rng.below(emojis.size())];
        if (piece == last) continue;  // a run of 3 would be condensed
        ++expected[piece];
      } else {
        piece = words[rng.below(words.size())];
      }
      last = piece;
      raw += piece + " ";
    }
    std::map<std::string, int> got;
    for (const auto& tok : normalize(raw, keep_policy()).tokens) {
      if (tok.emoji) ++got[tok.text];
    }
    CHECK(got == expected);
  }
}

TEST_CASE("clean trims what removed mentions and URLs leave behind") {
  CHECK(clean("@user يا كلب http://t.co/x") == "يا كلب");
  CHECK(clean("   ") == "");
  CHECK(clean("\t٣٣ نص") == "نص");
}
