#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "mtal/textprep.hpp"

namespace mtal {

/// Sparse vector: strictly increasing indices below `dim`, no stored zeros.
struct FeatureVector {
  std::size_t dim = 0;
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }
  double norm() const;

  /// Builds a vector from unordered (index, value) pairs: sums duplicates and
  /// drops entries that cancel to zero.
  static FeatureVector from_pairs(std::size_t dim,
                                  std::vector<std::pair<std::uint32_t, double>> pairs);

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct EncoderConfig {
  std::size_t dim = std::size_t{1} << 18;
  std::vector<int> word_ngrams = {1, 2};
  std::vector<int> char_ngrams = {3, 4};
  std::uint64_t hash_seed = 0;

  /// Throws std::invalid_argument when dim is not a power of two (or exceeds
  /// 2^32) or an n-gram order is below 1.
  void validate() const;

  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

/// Contract for anything that turns cleaned text into model input. The
/// built-in implementation is HashedNgramEncoder; an external embedding
/// service can be adapted behind the same interface.
class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual FeatureVector encode(const CleanText& text) const = 0;
  virtual std::size_t dimension() const = 0;
};

/// Signed feature hashing over word n-grams and character n-grams (the latter
/// taken inside each token with `<`/`>` boundary marks). Each n-gram adds
/// sign * weight at its hashed index, where weight is the product of the
/// weights of the tokens it spans. The result is L2-normalized.
class HashedNgramEncoder final : public Encoder {
 public:
  explicit HashedNgramEncoder(EncoderConfig cfg);

  FeatureVector encode(const CleanText& text) const override;
  std::size_t dimension() const override { return cfg_.dim; }

  /// Hashed entries before normalization, sorted by index.
  FeatureVector encode_unnormalized(const CleanText& text) const;

  const EncoderConfig& config() const { return cfg_; }

 private:
  EncoderConfig cfg_;
};

}  // namespace mtal
