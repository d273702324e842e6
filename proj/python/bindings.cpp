#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtal/acquisition.hpp"
#include "mtal/config.hpp"
#include "mtal/encoder.hpp"
#include "mtal/experiment.hpp"
#include "mtal/metrics.hpp"
#include "mtal/model.hpp"
#include "mtal/report.hpp"
#include "mtal/synthetic.hpp"
#include "mtal/textprep.hpp"
#include "mtal/trainer.hpp"

namespace py = pybind11;

namespace {

using Triple = std::array<double, 3>;

mtal::TaskTriple<double> to_triple(const Triple& t) { return {t[0], t[1], t[2]}; }
Triple from_triple(const mtal::TaskTriple<double>& t) { return t.values; }

mtal::EmojiPolicy make_policy(const std::string& mode,
                              const std::optional<mtal::EmojiLexicon>& lexicon,
                              double default_weight) {
  mtal::EmojiPolicy policy;
  policy.mode = mtal::parse_emoji_mode(mode);
  policy.lexicon = lexicon ? *lexicon : mtal::default_emoji_lexicon();
  policy.default_weight = default_weight;
  return policy;
}

std::vector<std::pair<std::string, double>> tokens_of(const mtal::CleanText& text) {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(text.tokens.size());
  for (const auto& t : text.tokens) out.emplace_back(t.text, t.weight);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-task active learning for offensive speech detection";

  py::register_exception<mtal::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<mtal::CorpusError>(m, "CorpusError", PyExc_ValueError);
  py::register_exception<mtal::LexiconError>(m, "LexiconError", PyExc_ValueError);
  py::register_exception<mtal::ModelError>(m, "ModelError", PyExc_RuntimeError);

  // text preparation
  m.def("clean", [](const std::string& raw) { return mtal::clean(raw); }, py::arg("raw"));
  m.def(
      "normalize",
      [](const std::string& raw, const std::string& mode,
         const std::optional<mtal::EmojiLexicon>& lexicon, double default_weight) {
        return tokens_of(mtal::normalize(raw, make_policy(mode, lexicon, default_weight)));
      },
      py::arg("raw"), py::arg("emoji_mode") = "keep", py::arg("lexicon") = py::none(),
      py::arg("default_weight") = 1.0,
      "List of (token, weight). The built-in lexicon is used when none is given.");
  m.def(
      "preprocess_line",
      [](const std::string& raw, const std::string& mode,
         const std::optional<mtal::EmojiLexicon>& lexicon, double default_weight) {
        return mtal::render_weighted(
            mtal::normalize(raw, make_policy(mode, lexicon, default_weight)));
      },
      py::arg("raw"), py::arg("emoji_mode") = "weighted", py::arg("lexicon") = py::none(),
      py::arg("default_weight") = 1.0);
  m.def(
      "is_idempotent",
      [](const std::string& raw, const std::string& mode) {
        return mtal::is_idempotent_check(raw, make_policy(mode, std::nullopt, 1.0));
      },
      py::arg("raw"), py::arg("emoji_mode") = "keep");
  m.def("default_emoji_lexicon", [] { return mtal::default_emoji_lexicon(); });

  // encoder
  m.def(
      "encode",
      [](const std::string& raw, std::size_t dim, const std::string& mode, std::uint64_t seed) {
        mtal::EncoderConfig cfg;
        cfg.dim = dim;
        cfg.hash_seed = seed;
        const mtal::HashedNgramEncoder encoder(cfg);
        const auto fv =
            encoder.encode(mtal::normalize(raw, make_policy(mode, std::nullopt, 1.0)));
        return std::make_pair(fv.indices, fv.values);
      },
      py::arg("raw"), py::arg("dim") = std::size_t{1} << 18, py::arg("emoji_mode") = "weighted",
      py::arg("hash_seed") = 0, "Sparse (indices, values) of the normalized hashed n-grams.");

  // model scalars
  m.def("sigmoid", &mtal::sigmoid, py::arg("z"));
  m.def("bce_loss", &mtal::bce_loss, py::arg("logit"), py::arg("label"));

  // acquisition
  m.def("binary_entropy", &mtal::binary_entropy, py::arg("p"));
  m.def(
      "combine_equal", [](const Triple& h) { return mtal::combine_equal(to_triple(h)); },
      py::arg("h"));
  m.def(
      "combine_weighted",
      [](const Triple& h, const Triple& w) {
        return mtal::combine_weighted(to_triple(h), to_triple(w));
      },
      py::arg("h"), py::arg("w") = Triple{2.0, 1.0, 1.0});
  m.def(
      "dynamic_offensive_weight",
      [](double f1, double t_min, double w_min, double w_max) {
        mtal::DynamicWeightConfig cfg;
        cfg.min_acceptable_f1 = t_min;
        cfg.min_weight = w_min;
        cfg.max_weight = w_max;
        return mtal::dynamic_offensive_weight(f1, cfg);
      },
      py::arg("f1_offensive"), py::arg("t_min") = 0.75, py::arg("w_min") = 0.5,
      py::arg("w_max") = 2.0);
  m.def(
      "combine_dynamic",
      [](const Triple& h, double w_off) { return mtal::combine_dynamic(to_triple(h), w_off); },
      py::arg("h"), py::arg("w_off"));
  m.def(
      "select_top_k",
      [](const std::vector<double>& scores, std::size_t k) { return mtal::select_top_k(scores, k); },
      py::arg("scores"), py::arg("k"));

  // metrics
  m.def("macro_f1", &mtal::macro_f1, py::arg("predictions"), py::arg("labels"));

  // loss weights
  m.def("loss_weights_equal", [] { return from_triple(mtal::loss_weights_equal()); });
  m.def(
      "loss_weights_static",
      [](const Triple& w) { return from_triple(mtal::loss_weights_static(to_triple(w))); },
      py::arg("weights") = Triple{0.7, 0.15, 0.15});
  m.def(
      "loss_weights_dynamic",
      [](const Triple& losses) { return from_triple(mtal::loss_weights_dynamic(to_triple(losses))); },
      py::arg("previous_losses"));

  // config and experiments
  m.def(
      "render_config",
      [](const std::string& text, const std::filesystem::path& base_dir) {
        return mtal::render_config(mtal::parse_config(text, base_dir));
      },
      py::arg("text"), py::arg("base_dir") = ".", "Canonical form of a config text.");
  m.def(
      "train",
      [](const std::string& config_text, const std::filesystem::path& train_path,
         const std::filesystem::path& dev_path,
         const std::optional<std::filesystem::path>& test_path,
         const std::filesystem::path& base_dir) {
        const auto cfg = mtal::parse_config(config_text, base_dir);
        const auto splits = mtal::load_splits(cfg, train_path, dev_path, test_path);
        mtal::RunReport report;
        {
          py::gil_scoped_release release;
          report = mtal::run_experiment(cfg, splits).report;
        }
        return mtal::serialize_report(report, cfg);
      },
      py::arg("config_text"), py::arg("train"), py::arg("dev"), py::arg("test") = py::none(),
      py::arg("base_dir") = ".", "Runs one experiment and returns the report as JSON text.");
  m.def(
      "write_synthetic",
      [](const std::filesystem::path& path, std::size_t size, std::uint64_t seed,
         const std::string& id_prefix, bool offensive_only, bool noisy, std::size_t min_neutral,
         std::size_t max_neutral, std::size_t neutral_vocabulary) {
        mtal::SyntheticSpec spec;
        spec.size = size;
        spec.seed = seed;
        spec.id_prefix = id_prefix;
        spec.noisy = noisy;
        spec.min_neutral_words = min_neutral;
        spec.max_neutral_words = max_neutral;
        spec.neutral_vocabulary = neutral_vocabulary;
        mtal::write_tsv(mtal::generate_synthetic(spec), path, offensive_only);
      },
      py::arg("path"), py::arg("size") = 2000, py::arg("seed") = 42, py::arg("id_prefix") = "syn",
      py::arg("offensive_only") = false, py::arg("noisy") = true,
      py::arg("min_neutral_words") = 3, py::arg("max_neutral_words") = 8,
      py::arg("neutral_vocabulary") = 120,
      "Writes a synthetic corpus with columns id, text, offensive, hate, vulgar, violent.");
}
