#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "latc/io/json_writer.hpp"
#include "latc/lattice/basis.hpp"

namespace latc::io {

/// Row-major CSV: d lines of d comma-separated reals, line i holding row i
/// of the basis matrix (so columns are the lattice generators).
inline LatticeBasis parse_basis_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ValidationError("basis csv line " + std::to_string(line_no) + ": cannot parse '" + cell + "' as a real");
      }
    }
    rows.push_back(std::move(row));
  }
  const auto d = rows.size();
  if (d == 0) throw ValidationError("basis csv is empty");
  Matrix g(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d)
      throw ValidationError("basis csv row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) + " entries, expected " + std::to_string(d));
    for (std::size_t j = 0; j < d; ++j) g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return LatticeBasis(std::move(g));
}

inline std::string format_basis_csv(const LatticeBasis& b) {
  std::ostringstream os;
  char buf[40];
  for (int i = 0; i < b.dim(); ++i) {
    for (int j = 0; j < b.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", b.matrix()(i, j));
      os << (j ? "," : "") << buf;
    }
    os << '\n';
  }
  return os.str();
}

inline Json basis_to_json(const LatticeBasis& b) {
  Json cols = Json::array();
  for (int j = 0; j < b.dim(); ++j) {
    Json c = Json::array();
    for (int i = 0; i < b.dim(); ++i) c.push_back(b.matrix()(i, j));
    cols.push_back(std::move(c));
  }
  return Json{{"dim", b.dim()}, {"columns", std::move(cols)}};
}

/// `{"dim": d, "columns": [[...], ...]}`.
inline LatticeBasis basis_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("columns")) throw ValidationError("basis json needs fields 'dim' and 'columns'");
  if (!j["dim"].is_number_integer()) throw ValidationError("basis json field 'dim' must be an integer");
  const int d = j["dim"].get<int>();
  const auto& cols = j["columns"];
  if (d < 2) throw ValidationError("basis json field 'dim' must be >= 2");
  if (!cols.is_array() || static_cast<int>(cols.size()) != d) throw ValidationError("basis json field 'columns' must hold dim columns");
  Matrix g(d, d);
  for (int c = 0; c < d; ++c) {
    if (!cols[c].is_array() || static_cast<int>(cols[c].size()) != d)
      throw ValidationError("basis json column " + std::to_string(c) + " must have dim entries");
    for (int r = 0; r < d; ++r) {
      if (!cols[c][r].is_number()) throw ValidationError("basis json column " + std::to_string(c) + " entry " + std::to_string(r) + " is not a number");
      g(r, c) = cols[c][r].get<double>();
    }
  }
  return LatticeBasis(std::move(g));
}

/// Dispatches on content: a leading '{' means JSON, anything else CSV.
inline LatticeBasis parse_basis(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ValidationError(std::string("basis json: ") + e.what());
    }
    return basis_from_json(j);
  }
  return parse_basis_csv(text);
}

inline LatticeBasis load_basis(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open basis file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_basis(ss.str());
}

}  // namespace latc::io
