#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mtal/corpus.hpp"

namespace mtal {

/// Generator for labeled tweet-like corpora with a known, separable signal:
/// a sample is offensive exactly when it contains an offensive marker word,
/// violent/vulgar samples are offensive samples that also carry a violent or
/// vulgar marker. Texts are sprinkled with mentions, URLs, hashtags,
/// elongations, diacritics, digits and emojis so the cleaning pipeline has
/// work to do.
struct SyntheticSpec {
  std::size_t size = 2000;
  std::uint64_t seed = 42;
  double offensive_rate = 0.35;
  double violent_given_offensive = 0.15;
  double vulgar_given_offensive = 0.15;
  std::size_t neutral_vocabulary = 120;
  // Neutral filler words per text, inclusive range.
  std::size_t min_neutral_words = 3;
  std::size_t max_neutral_words = 8;
  bool noisy = true;
  std::string id_prefix = "syn";
};

std::vector<Sample> generate_synthetic(const SyntheticSpec& spec);

/// Column layout written by write_tsv: id, text, offensive, hate, vulgar, violent.
ColumnSchema synthetic_schema();

/// Writes samples as tab-separated records using the default label tokens
/// (hate is written as HS/NOT_HS, positive only for some offensive samples).
/// Unlabeled tasks are omitted only when `offensive_only` is set.
void write_tsv(const std::vector<Sample>& samples, const std::filesystem::path& path,
               bool offensive_only = false);

}  // namespace mtal
