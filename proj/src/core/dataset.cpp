#include "dpforest/core/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "dpforest/core/error.hpp"

namespace dpforest {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool parse_double(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

RawTable read_table(std::istream& in) {
  RawTable table;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty CSV input: missing header row", 1, 0);
  for (auto f : split_fields(line)) table.header.emplace_back(f);
  table.columns.resize(table.header.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != table.header.size()) {
      throw DataError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                          " fields, header has " + std::to_string(table.header.size()),
                      row, 0);
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v)) {
        throw DataError("missing or non-numeric value '" + std::string(fields[c]) + "' at row " +
                            std::to_string(row) + ", column " + std::to_string(c + 1) + " (" +
                            table.header[c] + ")",
                        row, c + 1);
      }
      table.columns[c].push_back(v);
    }
  }
  return table;
}

}  // namespace

void Dataset::validate() const {
  if (x.rows() < 2) throw DataError("dataset needs at least 2 rows");
  if (x.cols() < 1) throw DataError("dataset needs at least 1 predictor");
  if (y.size() != x.rows()) throw DataError("response length does not match predictor rows");
  if (!feature_names.empty() && feature_names.size() != x.cols()) {
    throw DataError("feature_names length does not match predictor columns");
  }
  for (std::size_t j = 0; j < x.cols(); ++j) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      if (!std::isfinite(x(i, j))) {
        throw DataError("non-finite predictor value at row " + std::to_string(i + 1) +
                            ", column " + feature_name(j),
                        i + 1, j + 1);
      }
    }
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) {
      throw DataError("non-finite response at row " + std::to_string(i + 1), i + 1, 0);
    }
  }
}

std::string Dataset::feature_name(std::size_t j) const {
  if (j < feature_names.size()) return feature_names[j];
  return "x" + std::to_string(j + 1);
}

Dataset read_csv(std::istream& in, const std::string& response) {
  RawTable table = read_table(in);
  std::size_t response_col = table.header.size();
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == response) response_col = c;
  }
  if (response_col == table.header.size()) {
    throw ConfigError("response column '" + response + "' not found in CSV header");
  }
  const std::size_t n = table.columns.empty() ? 0 : table.columns.front().size();
  Dataset data;
  data.x = Matrix(n, table.header.size() - 1);
  std::size_t j = 0;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c == response_col) continue;
    data.feature_names.push_back(table.header[c]);
    std::copy(table.columns[c].begin(), table.columns[c].end(), data.x.col(j).begin());
    ++j;
  }
  data.y = std::move(table.columns[response_col]);
  data.validate();
  return data;
}

Dataset read_csv_file(const std::string& path, const std::string& response) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return read_csv(in, response);
}

Matrix read_predictors_csv(std::istream& in, const std::vector<std::string>& feature_names) {
  RawTable table = read_table(in);
  const std::size_t n = table.columns.empty() ? 0 : table.columns.front().size();
  Matrix x(n, feature_names.size());
  for (std::size_t j = 0; j < feature_names.size(); ++j) {
    std::size_t found = table.header.size();
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (table.header[c] == feature_names[j]) found = c;
    }
    if (found == table.header.size()) {
      throw DataError("predictor column '" + feature_names[j] + "' missing from CSV", 1, 0);
    }
    std::copy(table.columns[found].begin(), table.columns[found].end(), x.col(j).begin());
  }
  return x;
}

void write_csv(std::ostream& out, const Dataset& data, const std::string& response) {
  out << std::setprecision(17);
  for (std::size_t j = 0; j < data.num_features(); ++j) out << data.feature_name(j) << ',';
  out << response << '\n';
  for (std::size_t i = 0; i < data.num_rows(); ++i) {
    for (std::size_t j = 0; j < data.num_features(); ++j) out << data.x(i, j) << ',';
    out << data.y[i] << '\n';
  }
}

}  // namespace dpforest
