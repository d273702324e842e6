#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mtal::unicode {

/// Decodes UTF-8. Malformed sequences, surrogates and overlongs become U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

bool is_whitespace(char32_t cp);
bool is_digit(char32_t cp);                    // ASCII and Arabic-Indic
bool is_arabic_diacritic_or_tatweel(char32_t cp);  // U+064B..U+0652, U+0640
bool is_extended_pictographic(char32_t cp);
bool is_emoji_modifier(char32_t cp);           // skin tones U+1F3FB..U+1F3FF
bool is_regional_indicator(char32_t cp);

/// Length of the emoji sequence starting at text[pos], or 0 when text[pos]
/// does not start one. Covers modifier, variation-selector, tag and ZWJ
/// sequences plus regional-indicator flags.
std::size_t emoji_sequence_length(std::u32string_view text, std::size_t pos);

/// True when the whole string is exactly one emoji sequence.
bool is_single_emoji(std::u32string_view text);

}  // namespace mtal::unicode
