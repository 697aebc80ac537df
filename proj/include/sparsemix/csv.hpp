#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sparsemix/model.hpp"

namespace sparsemix {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

inline std::string coordinate(std::size_t line, std::size_t col) {
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Selects the label column either by header name or by 1-based position.
struct LabelColumn {
  std::string name;
  int index = 0;
};

/// Parses comma-separated text. Label cells that are integers are kept as
/// they are; any other label values are numbered 1, 2, ... by first
/// appearance.
inline Dataset parse_csv(std::istream& in, bool has_header, const std::optional<LabelColumn>& label,
                         const std::string& name = "") {
  Dataset data;
  data.name = name;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  int label_col = -1;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> cells = detail::split_commas(line);
    if (width == 0) {
      width = cells.size();
      if (has_header) header = cells;
      if (label) {
        if (!label->name.empty()) {
          for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == label->name) label_col = static_cast<int>(c);
          }
          if (label_col < 0) fail(ErrorCode::ParseError, "label column '" + label->name + "' not in header");
        } else {
          label_col = label->index - 1;
          if (label_col < 0 || label_col >= static_cast<int>(width)) {
            fail(ErrorCode::ParseError, "label column index out of range");
          }
        }
      }
      if (has_header) continue;
    }
    if (cells.size() != width) {
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                                      " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (static_cast<int>(c) == label_col) {
        raw_labels.push_back(cells[c]);
        continue;
      }
      double v = 0.0;
      if (!detail::parse_double(cells[c], v)) {
        fail(ErrorCode::ParseError, detail::coordinate(line_no, c + 1) + ": '" + cells[c] + "' is not a number");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::ParseError, "no data rows");
  const std::size_t r = rows[0].size();
  if (r == 0) fail(ErrorCode::ParseError, "no feature columns");
  data.y.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(r));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < r; ++j) data.y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<int>(c) != label_col) data.columns.push_back(header[c]);
  }
  if (label_col >= 0) {
    std::vector<int> labels;
    bool all_int = true;
    for (const auto& s : raw_labels) {
      int v = 0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        all_int = false;
        break;
      }
      labels.push_back(v);
    }
    if (!all_int) {
      labels.clear();
      std::map<std::string, int> codes;
      for (const auto& s : raw_labels) {
        const auto it = codes.try_emplace(s, static_cast<int>(codes.size()) + 1).first;
        labels.push_back(it->second);
      }
    }
    data.labels = std::move(labels);
  }
  data.validate();
  return data;
}

inline Dataset load_csv(const std::string& path, bool has_header, const std::optional<LabelColumn>& label = {}) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  return parse_csv(in, has_header, label, path);
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Header row, features at 17 significant digits, labels last (when present).
inline void write_csv(std::ostream& out, const Dataset& data, const std::string& label_name = "label") {
  const Eigen::Index r = data.r();
  for (Eigen::Index j = 0; j < r; ++j) {
    if (j > 0) out << ',';
    out << (static_cast<std::size_t>(j) < data.columns.size() ? data.columns[static_cast<std::size_t>(j)]
                                                              : "y" + std::to_string(j + 1));
  }
  if (data.labels) out << ',' << label_name;
  out << '\n';
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < r; ++j) {
      if (j > 0) out << ',';
      out << format_double(data.y(i, j));
    }
    if (data.labels) out << ',' << (*data.labels)[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

inline void write_csv(const std::string& path, const Dataset& data, const std::string& label_name = "label") {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
  write_csv(out, data, label_name);
  if (!out) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace sparsemix
