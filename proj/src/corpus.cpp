#include "mtal/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mtal {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

}  // namespace

std::size_t ColumnSchema::expected_columns() const {
  if (num_columns != 0) return num_columns;
  std::size_t highest = std::max(id_column, text_column);
  for (const auto& col : {offensive_column, hate_column, vulgar_column, violent_column}) {
    if (col) highest = std::max(highest, *col);
  }
  return highest + 1;
}

std::optional<std::size_t> ColumnSchema::label_column(Task t) const {
  switch (t) {
    case Task::offensive: return offensive_column;
    case Task::violent: return violent_column;
    case Task::vulgar: return vulgar_column;
  }
  return std::nullopt;
}

LoadResult parse_split(std::string_view content, const ColumnSchema& schema) {
  LoadResult result;
  const std::size_t expected = schema.expected_columns();

  // UTF-8 byte order mark
  if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    std::string_view line = content.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line_no == 1 && schema.has_header) continue;
    if (trim(line).empty()) continue;

    const auto fields = split_tabs(line);
    if (fields.size() != expected) {
      std::ostringstream msg;
      msg << "expected " << expected << " tab-separated columns, found " << fields.size();
      result.errors.push_back({line_no, msg.str()});
      continue;
    }

    Sample sample;
    sample.id = std::string(trim(fields[schema.id_column]));
    const auto text = trim(fields[schema.text_column]);
    if (text.empty()) {
      result.errors.push_back({line_no, "empty text"});
      continue;
    }
    sample.raw_text = std::string(text);

    bool bad = false;
    for (Task t : kTasks) {
      const auto col = schema.label_column(t);
      if (!col) continue;
      const auto token = trim(fields[*col]);
      const auto& tokens = schema.tokens[t];
      if (token == tokens.positive) {
        sample.labels[t] = true;
      } else if (token == tokens.negative) {
        sample.labels[t] = false;
      } else {
        std::ostringstream msg;
        msg << "unrecognized " << task_name(t) << " label '" << token << "' (expected '"
            << tokens.positive << "' or '" << tokens.negative << "')";
        result.errors.push_back({line_no, msg.str()});
        bad = true;
        break;
      }
    }
    if (!bad) result.samples.push_back(std::move(sample));
  }
  return result;
}

LoadResult load_split(const std::filesystem::path& path, const ColumnSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open data file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_split(buf.str(), schema);
}

SplitStats split_stats(const std::vector<Sample>& samples) {
  SplitStats stats;
  stats.total = samples.size();
  for (const auto& s : samples) {
    for (Task t : kTasks) {
      const auto& label = s.labels[t];
      auto& counts = stats.tasks[t];
      if (!label) {
        ++counts.unlabeled;
      } else if (*label) {
        ++counts.positive;
      } else {
        ++counts.negative;
      }
    }
  }
  return stats;
}

std::string dump_stats(const SplitStats& stats, const std::string& prefix) {
  const std::string p = prefix.empty() ? "" : prefix + ".";
  std::ostringstream out;
  out << p << "total=" << stats.total << '\n';
  for (Task t : kTasks) {
    const auto& c = stats.tasks[t];
    out << p << task_name(t) << ".positive=" << c.positive << '\n';
    out << p << task_name(t) << ".negative=" << c.negative << '\n';
    out << p << task_name(t) << ".unlabeled=" << c.unlabeled << '\n';
  }
  return out.str();
}

}  // namespace mtal
