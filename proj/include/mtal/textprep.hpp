#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mtal {

class LexiconError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EmojiMode { strip, keep, weighted };

std::string_view to_string(EmojiMode mode);
/// Throws std::invalid_argument on an unknown name.
EmojiMode parse_emoji_mode(std::string_view name);

using EmojiLexicon = std::map<std::string, double>;

struct EmojiPolicy {
  EmojiMode mode = EmojiMode::keep;
  EmojiLexicon lexicon;
  double default_weight = 1.0;

  /// Weight an emoji token receives under this policy. Variation selector
  /// U+FE0F is ignored when matching lexicon keys.
  double weight_of(std::string_view emoji) const;
};

struct WeightedToken {
  std::string text;
  double weight = 1.0;
  bool emoji = false;

  friend bool operator==(const WeightedToken&, const WeightedToken&) = default;
};

struct CleanText {
  std::vector<WeightedToken> tokens;

  friend bool operator==(const CleanText&, const CleanText&) = default;
};

/// Runs the character-level cleaning rules (URL and mention removal,
/// whitespace collapsing, digit removal, hashtag/underscore splitting,
/// repeat condensation, diacritic and tatweel removal) in that order, repeated
/// until the text stops changing, then trims. Emoji handling happens at
/// tokenization.
std::string clean(std::string_view raw);

/// Full pipeline: clean, tokenize on whitespace with emoji sequences split
/// into their own tokens, then apply the emoji policy.
CleanText normalize(std::string_view raw, const EmojiPolicy& policy);

/// Tokens joined by single spaces.
std::string render(const CleanText& text);

/// Like render, but tokens whose weight differs from 1 are written as
/// `token|weight`.
std::string render_weighted(const CleanText& text);

/// Shortest round-tripping decimal form, always with a fractional part ("2.0").
std::string format_weight(double weight);

/// normalize(render(normalize(raw))) == normalize(raw)
bool is_idempotent_check(std::string_view raw, const EmojiPolicy& policy);

/// Lexicon file: one `emoji<TAB>weight` entry per line; `#` starts a comment
/// line; blank lines are ignored. Invalid keys or non-positive weights throw
/// LexiconError naming the line.
EmojiLexicon parse_emoji_lexicon(std::string_view content);
EmojiLexicon load_emoji_lexicon(const std::filesystem::path& path);

/// Seed list shipped with the project (mirrors data/emoji_lexicon.tsv).
const EmojiLexicon& default_emoji_lexicon();

}  // namespace mtal
