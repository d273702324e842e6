#include "mtal/textprep.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mtal/unicode.hpp"

namespace mtal {

namespace {

using unicode::decode;
using unicode::encode;

bool is_ascii_word(char32_t cp) {
  return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || (cp >= U'0' && cp <= U'9') ||
         cp == U'_';
}

char32_t ascii_lower(char32_t cp) { return (cp >= U'A' && cp <= U'Z') ? cp + 32 : cp; }

bool starts_with_ci(std::u32string_view text, std::size_t pos, std::u32string_view prefix) {
  if (text.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (ascii_lower(text[pos + i]) != prefix[i]) return false;
  }
  return true;
}

// Length of a URL starting at pos, or 0.
std::size_t url_length(std::u32string_view text, std::size_t pos) {
  std::size_t prefix = 0;
  if (starts_with_ci(text, pos, U"https://")) {
    prefix = 8;
  } else if (starts_with_ci(text, pos, U"http://")) {
    prefix = 7;
  } else {
    const bool boundary = pos == 0 || !is_ascii_word(text[pos - 1]);
    if (boundary && starts_with_ci(text, pos, U"www.")) {
      prefix = 4;
    } else if (boundary && starts_with_ci(text, pos, U"t.co/")) {
      prefix = 5;
    }
  }
  if (prefix == 0) return 0;
  std::size_t end = pos + prefix;
  while (end < text.size() && !unicode::is_whitespace(text[end])) ++end;
  return end - pos;
}

std::u32string remove_urls_and_mentions(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (const auto n = url_length(text, i); n > 0) {
      out.push_back(U' ');
      i += n;
      continue;
    }
    if (text[i] == U'@' && i + 1 < text.size() && is_ascii_word(text[i + 1])) {
      std::size_t end = i + 1;
      while (end < text.size() && is_ascii_word(text[end])) ++end;
      out.push_back(U' ');
      i = end;
      continue;
    }
    out.push_back(text[i++]);
  }
  return out;
}

std::u32string collapse_whitespace(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  bool in_space = false;
  for (char32_t cp : text) {
    if (unicode::is_whitespace(cp)) {
      if (!in_space) out.push_back(U' ');
      in_space = true;
    } else {
      out.push_back(cp);
      in_space = false;
    }
  }
  return out;
}

std::u32string remove_digits(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (!unicode::is_digit(cp)) out.push_back(cp);
  }
  return out;
}

std::u32string split_joined_words(std::u32string_view text) {
  std::u32string out(text);
  for (char32_t& cp : out) {
    if (cp == U'#' || cp == U'_') cp = U' ';
  }
  return out;
}

// Runs of three or more identical characters become one; doubles survive.
std::u32string condense_repeats(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i + 1;
    while (j < text.size() && text[j] == text[i]) ++j;
    const std::size_t run = j - i;
    out.append(run >= 3 ? 1 : run, text[i]);
    i = j;
  }
  return out;
}

std::u32string remove_diacritics(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (!unicode::is_arabic_diacritic_or_tatweel(cp)) out.push_back(cp);
  }
  return out;
}

std::u32string clean_pass(std::u32string_view text) {
  auto s = remove_urls_and_mentions(text);
  s = collapse_whitespace(s);
  s = remove_digits(s);
  s = split_joined_words(s);
  s = condense_repeats(s);
  return remove_diacritics(s);
}

std::u32string clean_codepoints(std::string_view raw) {
  // Later rules can expose new matches for earlier ones (removing a tatweel
  // can create a run of three), so iterate to a fixed point. Every pass that
  // changes the text either shortens it or removes a '#'/'_', so this ends.
  std::u32string current = decode(raw);
  while (true) {
    auto next = clean_pass(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

std::string without_variation_selector(std::string_view emoji) {
  std::u32string cps = decode(emoji);
  std::erase(cps, char32_t{0xFE0F});
  return encode(cps);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string_view to_string(EmojiMode mode) {
  switch (mode) {
    case EmojiMode::strip: return "strip";
    case EmojiMode::keep: return "keep";
    case EmojiMode::weighted: return "weighted";
  }
  return "?";
}

EmojiMode parse_emoji_mode(std::string_view name) {
  if (name == "strip") return EmojiMode::strip;
  if (name == "keep") return EmojiMode::keep;
  if (name == "weighted") return EmojiMode::weighted;
  throw std::invalid_argument("unknown emoji mode '" + std::string(name) +
                              "' (expected strip, keep or weighted)");
}

double EmojiPolicy::weight_of(std::string_view emoji) const {
  switch (mode) {
    case EmojiMode::strip:
    case EmojiMode::keep:
      return 1.0;
    case EmojiMode::weighted: {
      if (const auto it = lexicon.find(std::string(emoji)); it != lexicon.end()) return it->second;
      const auto bare = without_variation_selector(emoji);
      for (const auto& [key, weight] : lexicon) {
        if (without_variation_selector(key) == bare) return weight;
      }
      return default_weight;
    }
  }
  return 1.0;
}

std::string clean(std::string_view raw) {
  std::u32string text = clean_codepoints(raw);
  // collapsing leaves at most one space at either end
  if (!text.empty() && text.back() == U' ') text.pop_back();
  if (!text.empty() && text.front() == U' ') text.erase(0, 1);
  return encode(text);
}

CleanText normalize(std::string_view raw, const EmojiPolicy& policy) {
  const std::u32string text = clean_codepoints(raw);
  CleanText result;

  const auto emit = [&](std::u32string_view piece, bool emoji) {
    if (piece.empty()) return;
    if (emoji && policy.mode == EmojiMode::strip) return;
    WeightedToken token;
    token.text = encode(piece);
    token.emoji = emoji;
    token.weight = emoji ? policy.weight_of(token.text) : 1.0;
    result.tokens.push_back(std::move(token));
  };

  std::size_t i = 0;
  while (i < text.size()) {
    if (unicode::is_whitespace(text[i])) {
      ++i;
      continue;
    }
    std::size_t word_start = i;
    while (i < text.size() && !unicode::is_whitespace(text[i])) {
      if (const auto n = unicode::emoji_sequence_length(text, i); n > 0) {
        emit(std::u32string_view(text).substr(word_start, i - word_start), false);
        emit(std::u32string_view(text).substr(i, n), true);
        i += n;
        word_start = i;
      } else {
        ++i;
      }
    }
    emit(std::u32string_view(text).substr(word_start, i - word_start), false);
  }
  return result;
}

std::string render(const CleanText& text) {
  std::string out;
  for (const auto& token : text.tokens) {
    if (!out.empty()) out.push_back(' ');
    out += token.text;
  }
  return out;
}

std::string format_weight(double weight) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), weight);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string render_weighted(const CleanText& text) {
  std::string out;
  for (const auto& token : text.tokens) {
    if (!out.empty()) out.push_back(' ');
    out += token.text;
    if (token.weight != 1.0) {
      out.push_back('|');
      out += format_weight(token.weight);
    }
  }
  return out;
}

bool is_idempotent_check(std::string_view raw, const EmojiPolicy& policy) {
  const CleanText once = normalize(raw, policy);
  return normalize(render(once), policy) == once;
}

EmojiLexicon parse_emoji_lexicon(std::string_view content) {
  EmojiLexicon lexicon;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);
  while (pos < content.size()) {
    auto eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    std::string_view line = content.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;

    const auto fail = [&](const std::string& why) {
      throw LexiconError("emoji lexicon line " + std::to_string(line_no) + ": " + why);
    };
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) fail("expected 'emoji<TAB>weight'");
    const auto key = trim(line.substr(0, tab));
    const auto value = trim(line.substr(tab + 1));
    if (!unicode::is_single_emoji(decode(key))) fail("'" + std::string(key) + "' is not an emoji");
    double weight = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), weight);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      fail("invalid weight '" + std::string(value) + "'");
    }
    if (!(weight > 0.0) || !std::isfinite(weight)) fail("weight must be positive");
    lexicon[std::string(key)] = weight;
  }
  return lexicon;
}

EmojiLexicon load_emoji_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LexiconError("cannot open emoji lexicon: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_emoji_lexicon(buf.str());
}

const EmojiLexicon& default_emoji_lexicon() {
  static const EmojiLexicon lexicon = {
      {"\U0001F621", 2.0},  // pouting face
      {"\U0001F92C", 2.0},  // face with symbols on mouth
      {"\U0001F620", 2.0},  // angry face
      {"\U0001F595", 2.0},  // middle finger
      {"\U0001F4A9", 2.0},  // pile of poo
      {"\U0001F92E", 2.0},  // face vomiting
      {"\U0001F52A", 2.0},  // kitchen knife
      {"\U0001F52B", 2.0},  // pistol
      {"\U0001F44A", 2.0},  // oncoming fist
      {"\U0001F44E", 2.0},  // thumbs down
      {"\U0001F437", 2.0},  // pig face
      {"\U0001F415", 2.0},  // dog
      {"\U0001F40D", 2.0},  // snake
      {"\U0001F921", 2.0},  // clown face
      {"\U0001F45E", 2.0},  // man's shoe
      {"\U0001F480", 2.0},  // skull
  };
  return lexicon;
}

}  // namespace mtal
