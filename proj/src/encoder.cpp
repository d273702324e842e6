#include "mtal/encoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "mtal/random.hpp"
#include "mtal/unicode.hpp"

namespace mtal {

namespace {

constexpr char kSep = '\x1f';

}  // namespace

double FeatureVector::norm() const {
  double sq = 0.0;
  for (double v : values) sq += v * v;
  return std::sqrt(sq);
}

FeatureVector FeatureVector::from_pairs(std::size_t dim,
                                        std::vector<std::pair<std::uint32_t, double>> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  FeatureVector fv;
  fv.dim = dim;
  for (std::size_t i = 0; i < pairs.size();) {
    const auto index = pairs[i].first;
    double sum = 0.0;
    for (; i < pairs.size() && pairs[i].first == index; ++i) sum += pairs[i].second;
    if (sum != 0.0) {
      fv.indices.push_back(index);
      fv.values.push_back(sum);
    }
  }
  return fv;
}

void EncoderConfig::validate() const {
  if (dim == 0 || !std::has_single_bit(dim) || dim > (std::size_t{1} << 32)) {
    throw std::invalid_argument("encoder dim must be a power of two no larger than 2^32, got " +
                                std::to_string(dim));
  }
  for (int n : word_ngrams) {
    if (n < 1) throw std::invalid_argument("word n-gram orders must be >= 1");
  }
  for (int n : char_ngrams) {
    if (n < 1) throw std::invalid_argument("character n-gram orders must be >= 1");
  }
}

HashedNgramEncoder::HashedNgramEncoder(EncoderConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
}

FeatureVector HashedNgramEncoder::encode_unnormalized(const CleanText& text) const {
  const auto& tokens = text.tokens;
  const std::uint64_t mask = cfg_.dim - 1;
  std::vector<std::pair<std::uint32_t, double>> pairs;

  const auto add = [&](const std::string& key, double weight) {
    const std::uint64_t h = hash_bytes(key, cfg_.hash_seed);
    const double sign = (h >> 63) ? -1.0 : 1.0;
    pairs.emplace_back(static_cast<std::uint32_t>(h & mask), sign * weight);
  };

  for (int n : cfg_.word_ngrams) {
    const auto order = static_cast<std::size_t>(n);
    if (tokens.size() < order) continue;
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
      std::string key = "w" + std::to_string(n);
      double weight = 1.0;
      for (std::size_t j = i; j < i + order; ++j) {
        key += kSep;
        key += tokens[j].text;
        weight *= tokens[j].weight;
      }
      add(key, weight);
    }
  }

  for (const auto& token : tokens) {
    std::u32string padded = U"<" + unicode::decode(token.text) + U">";
    for (int n : cfg_.char_ngrams) {
      const auto order = static_cast<std::size_t>(n);
      if (padded.size() < order) continue;
      for (std::size_t i = 0; i + order <= padded.size(); ++i) {
        std::string key = "c" + std::to_string(n);
        key += kSep;
        key += unicode::encode(std::u32string_view(padded).substr(i, order));
        add(key, token.weight);
      }
    }
  }

  return FeatureVector::from_pairs(cfg_.dim, std::move(pairs));
}

FeatureVector HashedNgramEncoder::encode(const CleanText& text) const {
  FeatureVector fv = encode_unnormalized(text);
  const double n = fv.norm();
  if (n > 0.0) {
    for (double& v : fv.values) v /= n;
  }
  return fv;
}

}  // namespace mtal
