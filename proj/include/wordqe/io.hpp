#ifndef WORDQE_IO_HPP
#define WORDQE_IO_HPP

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "wordqe/core.hpp"

namespace wordqe {

inline constexpr std::string_view kFormatVersion = "1";

namespace detail {

struct Field {
  std::string_view text;
  std::size_t column;  // 1-based byte offset
};

/// Splits on runs of spaces and tabs.
inline std::vector<Field> split_fields(std::string_view line) {
  std::vector<Field> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

inline std::string where(std::size_t line_no, std::size_t column = 0) {
  return column ? "line " + std::to_string(line_no) + ", column " + std::to_string(column)
                : "line " + std::to_string(line_no);
}

}  // namespace detail

/// Reads all lines, dropping a trailing '\r' on each.
inline std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_lines(in);
}

inline TokenSequence parse_tokens(std::string_view line) {
  TokenSequence out;
  for (const auto& f : detail::split_fields(line)) out.emplace_back(f.text);
  return out;
}

inline TagSequence parse_tags(std::string_view line, std::size_t line_no = 1) {
  TagSequence tags;
  for (const auto& f : detail::split_fields(line)) {
    auto label = parse_label(f.text);
    if (!label) {
      throw Error(ErrorCode::BadLabel, detail::where(line_no, f.column) + ": '" + std::string(f.text) +
                                           "' is not OK or BAD");
    }
    tags.push_back(*label);
  }
  if (tags.size() % 2 == 0) {
    throw Error(ErrorCode::UnevenArity, detail::where(line_no) + ": " + std::to_string(tags.size()) +
                                            " tags; expected an odd count 2n+1");
  }
  return tags;
}

inline std::vector<double> parse_scores(std::string_view line, std::size_t line_no = 1) {
  std::vector<double> row;
  for (const auto& f : detail::split_fields(line)) {
    double v = 0.0;
    const char* first = f.text.data();
    const char* last = first + f.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::BadFloat, detail::where(line_no, f.column) + ": '" + std::string(f.text) +
                                           "' is not a probability in [0,1]");
    }
    row.push_back(v);
  }
  if (row.size() % 2 == 0) {
    throw Error(ErrorCode::UnevenArity, detail::where(line_no) + ": " + std::to_string(row.size()) +
                                            " scores; expected an odd count 2n+1");
  }
  return row;
}

/// Shortest round-trip decimal, always carrying a fractional part or
/// exponent ("1.0", "0.5", "1e-05").
inline std::string format_score(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

inline std::vector<TokenSequence> read_corpus(std::istream& in) {
  std::vector<TokenSequence> out;
  for (const auto& line : read_lines(in)) out.push_back(parse_tokens(line));
  return out;
}

inline std::vector<TokenSequence> read_corpus(const std::filesystem::path& path) {
  std::vector<TokenSequence> out;
  for (const auto& line : read_lines(path)) out.push_back(parse_tokens(line));
  return out;
}

inline std::vector<TagSequence> read_tags(std::istream& in) {
  std::vector<TagSequence> out;
  std::size_t n = 0;
  for (const auto& line : read_lines(in)) out.push_back(parse_tags(line, ++n));
  return out;
}

inline std::vector<TagSequence> read_tags(const std::filesystem::path& path) {
  try {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return read_tags(in);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw Error(e.code(), path.string() + ": " + std::string(e.what()));
  }
}

inline PredictionMatrix read_scores(std::istream& in) {
  PredictionMatrix out;
  std::size_t n = 0;
  for (const auto& line : read_lines(in)) out.push_back(parse_scores(line, ++n));
  return out;
}

inline PredictionMatrix read_scores(const std::filesystem::path& path) {
  try {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return read_scores(in);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw Error(e.code(), path.string() + ": " + std::string(e.what()));
  }
}

template <typename Row, typename Fmt>
void write_rows(std::ostream& out, const std::vector<Row>& rows, Fmt fmt) {
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ' ';
      out << fmt(row[i]);
    }
    out << '\n';
  }
}

inline void write_corpus(std::ostream& out, const std::vector<TokenSequence>& corpus) {
  write_rows(out, corpus, [](const Token& t) -> const Token& { return t; });
}

inline void write_tags(std::ostream& out, const std::vector<TagSequence>& tags) {
  write_rows(out, tags, [](Label l) { return to_string(l); });
}

inline void write_scores(std::ostream& out, const PredictionMatrix& scores) {
  write_rows(out, scores, [](double v) { return format_score(v); });
}

/// Weight vectors: one decimal per line.
inline void write_weights(std::ostream& out, const EnsembleWeights& w) {
  for (double v : w.lambdas) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out << std::string_view(buf, static_cast<std::size_t>(ptr - buf)) << '\n';
  }
}

inline EnsembleWeights read_weights(std::istream& in) {
  EnsembleWeights w;
  std::size_t n = 0;
  for (const auto& line : read_lines(in)) {
    ++n;
    auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 1) throw Error(ErrorCode::BadFloat, detail::where(n) + ": expected one weight per line");
    double v = 0.0;
    const char* first = fields[0].text.data();
    const char* last = first + fields[0].text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
      throw Error(ErrorCode::BadFloat, detail::where(n, fields[0].column) + ": '" + std::string(fields[0].text) +
                                           "' is not a number");
    }
    w.lambdas.push_back(v);
  }
  return w;
}

inline EnsembleWeights read_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_weights(in);
}

}  // namespace wordqe

#endif  // WORDQE_IO_HPP
