#include "mtal/synthetic.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include "mtal/random.hpp"
#include "mtal/unicode.hpp"

namespace mtal {

namespace {

// Arabic letters alef..yeh without the tatweel.
std::u32string letters() {
  std::u32string out;
  for (char32_t cp = 0x0627; cp <= 0x063A; ++cp) out.push_back(cp);
  for (char32_t cp = 0x0641; cp <= 0x064A; ++cp) out.push_back(cp);
  return out;
}

struct Vocabulary {
  std::vector<std::u32string> neutral;
  std::vector<std::u32string> offensive;
  std::vector<std::u32string> violent;
  std::vector<std::u32string> vulgar;
};

// Words never repeat a letter back to back, so elongation followed by
// condensation restores them exactly.
Vocabulary make_vocabulary(std::uint64_t seed, std::size_t neutral) {
  Rng rng = Rng::stream(seed, "vocabulary");
  const std::u32string alphabet = letters();
  std::set<std::u32string> used;
  const auto word = [&] {
    while (true) {
      const std::size_t len = 3 + rng.below(4);
      std::u32string w;
      while (w.size() < len) {
        const char32_t c = alphabet[rng.below(alphabet.size())];
        if (!w.empty() && w.back() == c) continue;
        w.push_back(c);
      }
      if (used.insert(w).second) return w;
    }
  };
  Vocabulary v;
  for (std::size_t i = 0; i < neutral; ++i) v.neutral.push_back(word());
  for (int i = 0; i < 12; ++i) v.offensive.push_back(word());
  for (int i = 0; i < 6; ++i) v.violent.push_back(word());
  for (int i = 0; i < 6; ++i) v.vulgar.push_back(word());
  return v;
}

std::u32string elongate(const std::u32string& w, Rng& rng) {
  const std::size_t pos = rng.below(w.size());
  std::u32string out = w.substr(0, pos + 1);
  out.append(3 + rng.below(3), w[pos]);
  out += w.substr(pos + 1);
  return out;
}

std::u32string add_diacritics(const std::u32string& w, Rng& rng) {
  std::u32string out;
  for (char32_t c : w) {
    out.push_back(c);
    if (rng.uniform() < 0.3) out.push_back(static_cast<char32_t>(0x064B + rng.below(8)));
    if (rng.uniform() < 0.1) out.push_back(0x0640);
  }
  return out;
}

}  // namespace

std::vector<Sample> generate_synthetic(const SyntheticSpec& spec) {
  if (spec.neutral_vocabulary == 0 || spec.max_neutral_words < spec.min_neutral_words) {
    throw std::invalid_argument("synthetic corpus needs a neutral vocabulary and min <= max neutral words");
  }
  const Vocabulary vocab = make_vocabulary(spec.seed, spec.neutral_vocabulary);
  Rng rng = Rng::stream(spec.seed, spec.id_prefix);
  const auto pick = [&](const std::vector<std::u32string>& words) {
    return words[rng.below(words.size())];
  };
  static const std::u32string angry[] = {U"\U0001F621", U"\U0001F92C", U"\U0001F595"};
  static const std::u32string friendly[] = {U"\U0001F602", U"❤️", U"\U0001F339"};

  std::vector<Sample> samples;
  samples.reserve(spec.size);
  for (std::size_t i = 0; i < spec.size; ++i) {
    const bool offensive = rng.uniform() < spec.offensive_rate;
    const bool violent = offensive && rng.uniform() < spec.violent_given_offensive;
    const bool vulgar = offensive && rng.uniform() < spec.vulgar_given_offensive;

    std::vector<std::u32string> words;
    const std::size_t n_neutral =
        spec.min_neutral_words + rng.below(spec.max_neutral_words - spec.min_neutral_words + 1);
    for (std::size_t k = 0; k < n_neutral; ++k) words.push_back(pick(vocab.neutral));
    if (offensive) {
      const std::size_t n_markers = 1 + rng.below(2);
      for (std::size_t k = 0; k < n_markers; ++k) words.push_back(pick(vocab.offensive));
    }
    if (violent) words.push_back(pick(vocab.violent));
    if (vulgar) words.push_back(pick(vocab.vulgar));
    rng.shuffle(std::span<std::u32string>(words));

    if (spec.noisy) {
      for (auto& w : words) {
        const double r = rng.uniform();
        if (r < 0.08) {
          w = elongate(w, rng);
        } else if (r < 0.16) {
          w = add_diacritics(w, rng);
        }
      }
      if (rng.uniform() < 0.2 && words.size() >= 2) {
        // join two words into a hashtag
        const std::size_t k = rng.below(words.size() - 1);
        words[k] = U"#" + words[k] + U"_" + words[k + 1];
        words.erase(words.begin() + static_cast<std::ptrdiff_t>(k) + 1);
      }
      if (rng.uniform() < 0.3) words.insert(words.begin(), U"@user_" + unicode::decode(std::to_string(rng.below(1000))));
      if (rng.uniform() < 0.2) words.push_back(U"https://t.co/x" + unicode::decode(std::to_string(rng.below(100000))));
      if (rng.uniform() < 0.1) words.push_back(unicode::decode(std::to_string(rng.below(10000))));
      if (offensive && rng.uniform() < 0.5) {
        words.push_back(angry[rng.below(3)]);
      } else if (!offensive && rng.uniform() < 0.3) {
        words.push_back(friendly[rng.below(3)]);
      }
    }

    std::u32string text;
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (k) text += (spec.noisy && rng.uniform() < 0.05) ? U"\t  " : U" ";
      text += words[k];
    }

    Sample s;
    s.id = spec.id_prefix + "-" + std::to_string(i);
    s.raw_text = unicode::encode(text);
    s.labels = {offensive, violent, vulgar};
    samples.push_back(std::move(s));
  }
  return samples;
}

ColumnSchema synthetic_schema() {
  ColumnSchema schema;
  schema.id_column = 0;
  schema.text_column = 1;
  schema.offensive_column = 2;
  schema.hate_column = 3;
  schema.vulgar_column = 4;
  schema.violent_column = 5;
  return schema;
}

void write_tsv(const std::vector<Sample>& samples, const std::filesystem::path& path,
               bool offensive_only) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CorpusError("cannot write " + path.string());
  const auto tok = [](const OptionalLabel& l, const char* pos, const char* neg) {
    return (l && *l) ? pos : neg;
  };
  for (const auto& s : samples) {
    std::string text = s.raw_text;
    for (char& c : text) {
      if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    const bool offensive = s.labels.offensive().value_or(false);
    const bool hate = offensive && (hash_bytes(s.id) % 5 == 0);
    out << s.id << '\t' << text << '\t' << tok(s.labels.offensive(), "OFF", "NOT_OFF") << '\t'
        << (hate ? "HS" : "NOT_HS");
    if (!offensive_only) {
      out << '\t' << tok(s.labels.vulgar(), "VLG", "NOT_VLG") << '\t'
          << tok(s.labels.violent(), "V", "NOT_V");
    }
    out << '\n';
  }
  if (!out) throw CorpusError("failed writing " + path.string());
}

}  // namespace mtal
