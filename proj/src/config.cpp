#include "mtal/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mtal/random.hpp"
#include "mtal/unicode.hpp"

namespace mtal {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct Entry {
  std::string value;
  std::size_t line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

class Document {
 public:
  Document(std::string_view text, std::vector<std::string>& problems) : problems_(problems) {
    std::string current;
    std::set<std::string> seen_sections{""};
    sections_[""];
    std::size_t line_no = 0;
    std::size_t pos = 0;
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    while (pos <= text.size()) {
      auto eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      const auto line = trim(text.substr(pos, eol - pos));
      pos = eol + 1;
      ++line_no;
      if (line.empty() || line.front() == '#' || line.front() == ';') continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          problem(line_no, "malformed section header");
          continue;
        }
        current = std::string(trim(line.substr(1, line.size() - 2)));
        if (!seen_sections.insert(current).second) {
          problem(line_no, "duplicate section [" + current + "]");
        }
        sections_[current];
        section_lines_[current] = line_no;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        problem(line_no, "expected 'key = value'");
        continue;
      }
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) {
        problem(line_no, "empty key");
        continue;
      }
      auto& section = sections_[current];
      if (section.count(key)) {
        problem(line_no, "duplicate key '" + key + "'");
        continue;
      }
      section[key] = Entry{value, line_no, false};
    }
  }

  bool has_section(const std::string& name) const { return sections_.count(name) > 0; }

  Section* section(const std::string& name) {
    const auto it = sections_.find(name);
    return it == sections_.end() ? nullptr : &it->second;
  }

  std::optional<std::string> take(const std::string& section, const std::string& key,
                                  std::size_t* line = nullptr) {
    auto* s = this->section(section);
    if (s == nullptr) return std::nullopt;
    const auto it = s->find(key);
    if (it == s->end()) return std::nullopt;
    it->second.used = true;
    if (line) *line = it->second.line;
    return it->second.value;
  }

  void report_unknown(const std::set<std::string>& known_sections) {
    for (auto& [name, section] : sections_) {
      if (!known_sections.count(name)) {
        problem(section_lines_[name], "unknown section [" + name + "]");
        continue;
      }
      for (auto& [key, entry] : section) {
        if (!entry.used) {
          const std::string where = name.empty() ? "top level" : "[" + name + "]";
          problem(entry.line, "unknown key '" + key + "' in " + where);
        }
      }
    }
  }

  void problem(std::size_t line, const std::string& what) {
    problems_.push_back("line " + std::to_string(line) + ": " + what);
  }

 private:
  std::map<std::string, Section> sections_;
  std::map<std::string, std::size_t> section_lines_;
  std::vector<std::string>& problems_;
};

// Typed readers. Each leaves `out` untouched when the key is missing and
// records a problem when the value is malformed.
class Reader {
 public:
  Reader(Document& doc, std::string section) : doc_(doc), section_(std::move(section)) {}

  bool present(const std::string& key) {
    auto* s = doc_.section(section_);
    return s != nullptr && s->count(key) > 0;
  }

  template <typename Fn>
  void read(const std::string& key, Fn&& convert) {
    std::size_t line = 0;
    const auto value = doc_.take(section_, key, &line);
    if (!value) return;
    try {
      convert(*value);
    } catch (const std::exception& e) {
      doc_.problem(line, key + ": " + e.what());
    }
  }

  void size(const std::string& key, std::size_t& out) {
    read(key, [&](const std::string& v) { out = parse_size(v); });
  }
  void u64(const std::string& key, std::uint64_t& out) {
    read(key, [&](const std::string& v) { out = parse_u64(v); });
  }
  void real(const std::string& key, double& out) {
    read(key, [&](const std::string& v) { out = parse_real(v); });
  }
  void boolean(const std::string& key, bool& out) {
    read(key, [&](const std::string& v) {
      if (v == "true") {
        out = true;
      } else if (v == "false") {
        out = false;
      } else {
        throw std::invalid_argument("expected true or false, got '" + v + "'");
      }
    });
  }
  void triple(const std::string& key, TaskTriple<double>& out) {
    read(key, [&](const std::string& v) { out = parse_triple(v); });
  }

  static std::uint64_t parse_u64(std::string_view v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      throw std::invalid_argument("expected a non-negative integer, got '" + std::string(v) + "'");
    }
    return out;
  }
  static std::size_t parse_size(std::string_view v) {
    return static_cast<std::size_t>(parse_u64(v));
  }
  static double parse_real(std::string_view v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() || !std::isfinite(out)) {
      throw std::invalid_argument("expected a number, got '" + std::string(v) + "'");
    }
    return out;
  }
  static TaskTriple<double> parse_triple(std::string_view v) {
    const auto parts = split(v, ',');
    if (parts.size() != 3) {
      throw std::invalid_argument("expected three comma-separated numbers (offensive, violent, vulgar)");
    }
    return {parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2])};
  }
  static std::optional<std::size_t> parse_k(std::string_view v) {
    if (v == "all") return std::nullopt;
    return parse_size(v);
  }
  static std::optional<std::size_t> parse_column(std::string_view v) {
    if (v == "none") return std::nullopt;
    return parse_size(v);
  }
  static std::vector<int> parse_orders(std::string_view v) {
    std::vector<int> out;
    if (v == "none") return out;
    for (auto part : split(v, ',')) out.push_back(static_cast<int>(parse_size(part)));
    return out;
  }

 private:
  Document& doc_;
  std::string section_;
};

ColumnSchema read_corpus(Document& doc, const std::string& section, ColumnSchema schema,
                         bool require_mapping, std::vector<std::string>& problems) {
  Reader r(doc, section);
  if (require_mapping) {
    for (const char* key : {"id_column", "text_column", "offensive_column"}) {
      if (!r.present(key)) {
        problems.push_back("[" + section + "] must set " + key +
                           " (the column mapping has no default)");
      }
    }
  }
  r.size("id_column", schema.id_column);
  r.size("text_column", schema.text_column);
  r.read("offensive_column", [&](const std::string& v) { schema.offensive_column = Reader::parse_column(v); });
  r.read("hate_column", [&](const std::string& v) { schema.hate_column = Reader::parse_column(v); });
  r.read("vulgar_column", [&](const std::string& v) { schema.vulgar_column = Reader::parse_column(v); });
  r.read("violent_column", [&](const std::string& v) { schema.violent_column = Reader::parse_column(v); });
  r.size("num_columns", schema.num_columns);
  r.boolean("has_header", schema.has_header);
  for (Task t : kTasks) {
    r.read(std::string(task_name(t)) + "_tokens", [&](const std::string& v) {
      const auto parts = split(v, ',');
      if (parts.size() != 2 || parts[0].empty() || parts[1].empty() || parts[0] == parts[1]) {
        throw std::invalid_argument("expected two distinct tokens 'POSITIVE, NEGATIVE'");
      }
      schema.tokens[t] = LabelTokens{std::string(parts[0]), std::string(parts[1])};
    });
  }
  return schema;
}

void write_corpus(std::ostringstream& out, const std::string& section, const ColumnSchema& s) {
  const auto column = [](const std::optional<std::size_t>& c) {
    return c ? std::to_string(*c) : std::string("none");
  };
  out << "\n[" << section << "]\n";
  out << "id_column = " << s.id_column << '\n';
  out << "text_column = " << s.text_column << '\n';
  out << "offensive_column = " << column(s.offensive_column) << '\n';
  out << "hate_column = " << column(s.hate_column) << '\n';
  out << "vulgar_column = " << column(s.vulgar_column) << '\n';
  out << "violent_column = " << column(s.violent_column) << '\n';
  out << "num_columns = " << s.num_columns << '\n';
  out << "has_header = " << (s.has_header ? "true" : "false") << '\n';
  for (Task t : kTasks) {
    out << task_name(t) << "_tokens = " << s.tokens[t].positive << ", " << s.tokens[t].negative
        << '\n';
  }
}

std::string triple_text(const TaskTriple<double>& t) {
  return format_double(t.offensive()) + ", " + format_double(t.violent()) + ", " +
         format_double(t.vulgar());
}

std::string k_text(const std::optional<std::size_t>& k) {
  return k ? std::to_string(*k) : std::string("all");
}

std::string orders_text(const std::vector<int>& orders) {
  if (orders.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(orders[i]);
  }
  return s;
}

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view v, Parse&& parse) {
  std::vector<T> out;
  for (auto part : split(v, ',')) out.push_back(parse(part));
  if (out.empty()) throw std::invalid_argument("axis must not be empty");
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& p : problems) msg += "\n  " + p;
        return msg;
      }()),
      problems_(std::move(problems)) {}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<std::string> problems;
  Document doc(text, problems);
  ExperimentConfig cfg;
  TrainConfig& tc = cfg.train;

  {
    Reader top(doc, "");
    if (!top.present("schema_version")) {
      problems.emplace_back("missing schema_version (expected " +
                            std::to_string(kConfigSchemaVersion) + ")");
    }
    top.read("schema_version", [&](const std::string& v) {
      if (Reader::parse_u64(v) != static_cast<std::uint64_t>(kConfigSchemaVersion)) {
        throw std::invalid_argument("unsupported schema version " + v);
      }
    });
  }

  {
    Reader r(doc, "train");
    r.size("batch_size", tc.batch_size);
    r.read("k_selected", [&](const std::string& v) { tc.k_selected = Reader::parse_k(v); });
    r.read("uncertainty_mode",
           [&](const std::string& v) { tc.uncertainty_mode = parse_uncertainty_mode(v); });
    r.read("loss_mode", [&](const std::string& v) { tc.loss_mode = parse_loss_mode(v); });
    r.triple("static_loss_weights", tc.static_loss_weights);
    r.size("patience", tc.patience);
    r.size("max_epochs", tc.max_epochs);
    r.u64("seed", tc.seed);
    r.real("min_improvement", tc.min_improvement);
    r.size("hidden", tc.hidden);
  }
  {
    Reader r(doc, "optimizer");
    r.real("learning_rate", tc.optimizer.learning_rate);
    r.real("beta1", tc.optimizer.beta1);
    r.real("beta2", tc.optimizer.beta2);
    r.real("epsilon", tc.optimizer.epsilon);
    r.real("weight_decay", tc.optimizer.weight_decay);
  }
  {
    Reader r(doc, "uncertainty");
    auto& dyn = tc.dynamic_weights;
    r.triple("weights", tc.uncertainty_weights);
    r.real("min_acceptable_f1", dyn.min_acceptable_f1);
    r.real("min_weight", dyn.min_weight);
    r.real("max_weight", dyn.max_weight);
    r.triple("initial_weights", dyn.initial_weights);
    r.real("violent_coefficient", dyn.violent_coefficient);
    r.real("vulgar_coefficient", dyn.vulgar_coefficient);
  }
  {
    Reader r(doc, "emoji");
    auto& policy = tc.emoji;
    r.read("mode", [&](const std::string& v) { policy.mode = parse_emoji_mode(v); });
    r.real("default_weight", policy.default_weight);
    r.read("lexicon", [&](const std::string& v) {
      if (v == "builtin") {
        policy.lexicon = default_emoji_lexicon();
      } else if (v == "none") {
        policy.lexicon.clear();
      } else {
        std::filesystem::path p(v);
        if (p.is_relative()) p = base_dir / p;
        policy.lexicon = load_emoji_lexicon(p);
      }
    });
    if (auto* entries = doc.section("emoji.lexicon")) {
      for (auto& [key, entry] : *entries) {
        entry.used = true;
        if (!unicode::is_single_emoji(unicode::decode(key))) {
          doc.problem(entry.line, "'" + key + "' is not an emoji");
          continue;
        }
        try {
          const double w = Reader::parse_real(entry.value);
          if (!(w > 0.0)) throw std::invalid_argument("weight must be positive");
          policy.lexicon[key] = w;
        } catch (const std::exception& e) {
          doc.problem(entry.line, key + ": " + e.what());
        }
      }
    }
  }
  {
    Reader r(doc, "encoder");
    r.size("dim", tc.encoder.dim);
    r.read("word_ngrams",
           [&](const std::string& v) { tc.encoder.word_ngrams = Reader::parse_orders(v); });
    r.read("char_ngrams",
           [&](const std::string& v) { tc.encoder.char_ngrams = Reader::parse_orders(v); });
    r.u64("hash_seed", tc.encoder.hash_seed);
  }

  if (doc.has_section("corpus")) {
    cfg.corpus = read_corpus(doc, "corpus", ColumnSchema{}, true, problems);
  }
  if (doc.has_section("corpus.test")) {
    if (!cfg.corpus) problems.emplace_back("[corpus.test] requires a [corpus] section");
    cfg.test_corpus =
        read_corpus(doc, "corpus.test", cfg.corpus.value_or(ColumnSchema{}), false, problems);
  }

  if (doc.has_section("grid")) {
    GridAxes axes;
    axes.loss_modes = {tc.loss_mode};
    axes.uncertainty_modes = {tc.uncertainty_mode};
    axes.emoji_modes = {tc.emoji.mode};
    axes.k_values = {tc.k_selected};
    axes.static_loss_weights = {tc.static_loss_weights};
    Reader r(doc, "grid");
    r.read("loss_modes", [&](const std::string& v) {
      axes.loss_modes = parse_list<LossMode>(v, [](auto s) { return parse_loss_mode(s); });
    });
    r.read("uncertainty_modes", [&](const std::string& v) {
      axes.uncertainty_modes =
          parse_list<UncertaintyMode>(v, [](auto s) { return parse_uncertainty_mode(s); });
    });
    r.read("emoji_modes", [&](const std::string& v) {
      axes.emoji_modes = parse_list<EmojiMode>(v, [](auto s) { return parse_emoji_mode(s); });
    });
    r.read("k_values", [&](const std::string& v) {
      axes.k_values = parse_list<std::optional<std::size_t>>(
          v, [](auto s) { return Reader::parse_k(s); });
    });
    r.read("static_loss_weights", [&](const std::string& v) {
      axes.static_loss_weights.clear();
      for (auto part : split(v, ';')) axes.static_loss_weights.push_back(Reader::parse_triple(part));
    });
    cfg.grid = std::move(axes);
  }

  doc.report_unknown({"", "train", "optimizer", "uncertainty", "emoji", "emoji.lexicon", "encoder",
                      "corpus", "corpus.test", "grid"});

  for (const auto& e : tc.validate()) problems.push_back(e);
  if (cfg.grid) {
    for (const auto& k : cfg.grid->k_values) {
      if (k && (*k == 0 || *k > tc.batch_size)) {
        problems.push_back("grid k value " + std::to_string(*k) + " must lie in [1, batch_size]");
      }
    }
    for (const auto& w : cfg.grid->static_loss_weights) {
      try {
        loss_weights_static(w);
      } catch (const std::invalid_argument& e) {
        problems.push_back(std::string("grid: ") + e.what());
      }
    }
  }

  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot open config file: " + path.string()});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path().empty() ? "." : path.parent_path());
}

std::string render_config(const ExperimentConfig& cfg) {
  const TrainConfig& tc = cfg.train;
  std::ostringstream out;
  out << "schema_version = " << kConfigSchemaVersion << '\n';

  out << "\n[train]\n";
  out << "batch_size = " << tc.batch_size << '\n';
  out << "k_selected = " << k_text(tc.k_selected) << '\n';
  out << "uncertainty_mode = " << to_string(tc.uncertainty_mode) << '\n';
  out << "loss_mode = " << to_string(tc.loss_mode) << '\n';
  out << "static_loss_weights = " << triple_text(tc.static_loss_weights) << '\n';
  out << "patience = " << tc.patience << '\n';
  out << "max_epochs = " << tc.max_epochs << '\n';
  out << "seed = " << tc.seed << '\n';
  out << "min_improvement = " << format_double(tc.min_improvement) << '\n';
  out << "hidden = " << tc.hidden << '\n';

  out << "\n[optimizer]\n";
  out << "learning_rate = " << format_double(tc.optimizer.learning_rate) << '\n';
  out << "beta1 = " << format_double(tc.optimizer.beta1) << '\n';
  out << "beta2 = " << format_double(tc.optimizer.beta2) << '\n';
  out << "epsilon = " << format_double(tc.optimizer.epsilon) << '\n';
  out << "weight_decay = " << format_double(tc.optimizer.weight_decay) << '\n';

  const auto& dyn = tc.dynamic_weights;
  out << "\n[uncertainty]\n";
  out << "weights = " << triple_text(tc.uncertainty_weights) << '\n';
  out << "min_acceptable_f1 = " << format_double(dyn.min_acceptable_f1) << '\n';
  out << "min_weight = " << format_double(dyn.min_weight) << '\n';
  out << "max_weight = " << format_double(dyn.max_weight) << '\n';
  out << "initial_weights = " << triple_text(dyn.initial_weights) << '\n';
  out << "violent_coefficient = " << format_double(dyn.violent_coefficient) << '\n';
  out << "vulgar_coefficient = " << format_double(dyn.vulgar_coefficient) << '\n';

  out << "\n[emoji]\n";
  out << "mode = " << to_string(tc.emoji.mode) << '\n';
  out << "default_weight = " << format_double(tc.emoji.default_weight) << '\n';
  out << "lexicon = none\n";
  out << "\n[emoji.lexicon]\n";
  for (const auto& [key, weight] : tc.emoji.lexicon) {
    out << key << " = " << format_double(weight) << '\n';
  }

  out << "\n[encoder]\n";
  out << "dim = " << tc.encoder.dim << '\n';
  out << "word_ngrams = " << orders_text(tc.encoder.word_ngrams) << '\n';
  out << "char_ngrams = " << orders_text(tc.encoder.char_ngrams) << '\n';
  out << "hash_seed = " << tc.encoder.hash_seed << '\n';

  if (cfg.corpus) write_corpus(out, "corpus", *cfg.corpus);
  if (cfg.test_corpus) write_corpus(out, "corpus.test", *cfg.test_corpus);

  if (cfg.grid) {
    const auto& g = *cfg.grid;
    const auto join = [](const auto& items, auto&& fmt, const char* sep) {
      std::string s;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += sep;
        s += fmt(items[i]);
      }
      return s;
    };
    out << "\n[grid]\n";
    out << "loss_modes = " << join(g.loss_modes, [](auto m) { return std::string(to_string(m)); }, ", ") << '\n';
    out << "uncertainty_modes = "
        << join(g.uncertainty_modes, [](auto m) { return std::string(to_string(m)); }, ", ") << '\n';
    out << "emoji_modes = " << join(g.emoji_modes, [](auto m) { return std::string(to_string(m)); }, ", ")
        << '\n';
    out << "k_values = " << join(g.k_values, [](const auto& k) { return k_text(k); }, ", ") << '\n';
    out << "static_loss_weights = "
        << join(g.static_loss_weights, [](const auto& w) { return triple_text(w); }, " ; ") << '\n';
  }
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) { return hash_bytes(render_config(cfg)); }

std::string hex64(std::uint64_t value) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return s;
}

ExperimentConfig ExperimentConfig::grid_cell(std::size_t index) const {
  if (!grid) throw std::logic_error("config has no grid section");
  const auto& g = *grid;
  if (index >= g.cell_count()) throw std::out_of_range("grid cell index out of range");
  ExperimentConfig cell = *this;
  cell.grid.reset();
  std::size_t i = index;
  const auto pick = [&i](std::size_t n) {
    const std::size_t v = i % n;
    i /= n;
    return v;
  };
  // innermost axis first
  cell.train.uncertainty_mode = g.uncertainty_modes[pick(g.uncertainty_modes.size())];
  cell.train.loss_mode = g.loss_modes[pick(g.loss_modes.size())];
  cell.train.static_loss_weights = g.static_loss_weights[pick(g.static_loss_weights.size())];
  cell.train.k_selected = g.k_values[pick(g.k_values.size())];
  cell.train.emoji.mode = g.emoji_modes[pick(g.emoji_modes.size())];
  return cell;
}

}  // namespace mtal
