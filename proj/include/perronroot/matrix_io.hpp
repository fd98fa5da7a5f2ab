#pragma once

// Text matrix format:
//
//   # optional comment lines anywhere
//   n
//   a00 a01 ... a0(n-1)
//   ...
//
// Exactly n whitespace-separated decimal reals per row line. NaN and infinity
// tokens are rejected. render() writes 17 significant digits, so
// parse(render(A)) reproduces A bit for bit.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "perronroot/errors.hpp"
#include "perronroot/matrix.hpp"

namespace perronroot {

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> split_tokens(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

inline double parse_real(const Token& t, std::size_t line_no) {
  std::string_view s = t.text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
          c == 'e' || c == 'E' || c == '+'))
      throw parse_error(line_no, t.column,
                        "not a finite decimal real: '" + std::string(t.text) + "'");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc::result_out_of_range)
    throw parse_error(line_no, t.column, "value out of range: '" + std::string(t.text) + "'");
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw parse_error(line_no, t.column,
                      "not a finite decimal real: '" + std::string(t.text) + "'");
  return v;
}

template <class Check>
RealMatrix parse_impl(std::string_view text, Check&& check_entry) {
  std::size_t line_no = 0;
  std::size_t n = 0;
  std::size_t rows_read = 0;
  std::vector<double> entries;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().text.front() == '#') {
      if (end == text.size()) break;
      continue;
    }

    if (n == 0) {
      const Token& t = tokens.front();
      if (tokens.size() != 1)
        throw parse_error(line_no, tokens[1].column, "expected a single dimension on the first line");
      const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
      if (ec != std::errc() || ptr != t.text.data() + t.text.size() || n == 0)
        throw parse_error(line_no, t.column,
                          "dimension must be a positive integer: '" + std::string(t.text) + "'");
      entries.reserve(n * n);
    } else {
      if (rows_read == n)
        throw parse_error(line_no, tokens.front().column, "unexpected data after " +
                                                              std::to_string(n) + " rows");
      if (tokens.size() != n)
        throw parse_error(line_no, tokens.size() > n ? tokens[n].column : 0,
                          "expected " + std::to_string(n) + " values, found " +
                              std::to_string(tokens.size()));
      for (const Token& t : tokens) {
        const double v = parse_real(t, line_no);
        check_entry(v, line_no, t.column);
        entries.push_back(v);
      }
      ++rows_read;
    }
    if (end == text.size()) break;
  }
  if (n == 0) throw parse_error(line_no, 0, "missing dimension line");
  if (rows_read != n)
    throw parse_error(line_no, 0, "expected " + std::to_string(n) + " rows, found " +
                                      std::to_string(rows_read));
  return RealMatrix(n, std::move(entries));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline RealMatrix parse_real_matrix(std::string_view text) {
  return detail::parse_impl(text, [](double, std::size_t, std::size_t) {});
}

/// Like parse_real_matrix, but a negative entry is a parse_error naming its
/// line and column.
inline NonNegMatrix parse_nonneg_matrix(std::string_view text) {
  return NonNegMatrix(detail::parse_impl(text, [](double v, std::size_t line, std::size_t col) {
    if (v < 0.0) throw parse_error(line, col, "negative entry " + std::to_string(v));
  }));
}

inline RealMatrix read_real_matrix(const std::string& path) {
  return parse_real_matrix(detail::read_file(path));
}

inline NonNegMatrix read_nonneg_matrix(const std::string& path) {
  return parse_nonneg_matrix(detail::read_file(path));
}

/// Formats a double with 17 significant digits (round-trip safe).
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string render(const RealMatrix& a) {
  std::string out = std::to_string(a.size()) + "\n";
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j) out += ' ';
      out += format_real(a(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace perronroot
