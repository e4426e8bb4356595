#include "salmix/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "salmix/errors.hpp"
#include "salmix/rng.hpp"

namespace salmix {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

DataSet read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");

  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError(path, 0, "empty file (header required)");
  ++line_no;

  auto header = split_line(line);
  int label_col = -1, known_col = -1;
  std::vector<int> feature_cols;
  std::vector<std::string> names;
  for (int j = 0; j < static_cast<int>(header.size()); ++j) {
    const std::string name = trim(header[j]);
    if (name == "label") {
      label_col = j;
    } else if (name == "known") {
      known_col = j;
    } else {
      feature_cols.push_back(j);
      names.push_back(name);
    }
  }
  if (feature_cols.empty()) throw ParseError(path, 1, "no feature columns in header");

  std::vector<std::vector<double>> values;
  std::vector<int> labels;
  std::vector<char> known;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != header.size())
      throw ParseError(path, line_no, "expected " + std::to_string(header.size()) + " cells, got " +
                                          std::to_string(cells.size()));
    std::vector<double> row(feature_cols.size());
    for (size_t k = 0; k < feature_cols.size(); ++k) {
      const std::string cell = trim(cells[feature_cols[k]]);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size())
        throw ParseError(path, line_no, "non-numeric cell '" + cell + "' in column " + names[k]);
      if (!std::isfinite(v))
        throw ParseError(path, line_no, "non-finite value in column " + names[k]);
      row[k] = v;
    }
    values.push_back(std::move(row));
    if (label_col >= 0) {
      const std::string cell = trim(cells[label_col]);
      char* end = nullptr;
      const long v = std::strtol(cell.c_str(), &end, 10);
      if (cell.empty() || end != cell.c_str() + cell.size() || v < 1)
        throw ParseError(path, line_no, "label must be an integer >= 1, got '" + cell + "'");
      labels.push_back(static_cast<int>(v));
    }
    if (known_col >= 0) {
      const std::string cell = trim(cells[known_col]);
      if (cell != "0" && cell != "1") throw ParseError(path, line_no, "known column must be 0 or 1");
      known.push_back(cell == "1" ? 1 : 0);
    }
  }

  DataSet data;
  data.column_names = std::move(names);
  data.rows.resize(static_cast<int>(values.size()), static_cast<int>(feature_cols.size()));
  for (int i = 0; i < data.rows.rows(); ++i)
    for (int j = 0; j < data.rows.cols(); ++j) data.rows(i, j) = values[i][j];
  data.labels = std::move(labels);
  data.known_mask = std::move(known);
  return data;
}

void write_csv(const std::string& path, const DataSet& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  for (int j = 0; j < data.p(); ++j) {
    if (j) out << ',';
    out << (j < static_cast<int>(data.column_names.size()) ? data.column_names[j]
                                                           : "x" + std::to_string(j + 1));
  }
  if (data.has_labels()) out << ",label";
  if (data.has_known_mask()) out << ",known";
  out << '\n';
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.p(); ++j) {
      if (j) out << ',';
      out << data.rows(i, j);
    }
    if (data.has_labels()) out << ',' << data.labels[i];
    if (data.has_known_mask()) out << ',' << static_cast<int>(data.known_mask[i]);
    out << '\n';
  }
}

double median_pairwise_sq_distance(const Eigen::MatrixXd& rows) {
  const int n = static_cast<int>(rows.rows());
  if (n < 2) return 1.0;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (n > 600) {
    Rng rng(0x5a1d157ULL);  // fixed subsample stream, independent of fit seeds
    for (int i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.below(i + 1)]);
    idx.resize(600);
  }
  std::vector<double> d2;
  d2.reserve(idx.size() * (idx.size() - 1) / 2);
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = i + 1; j < idx.size(); ++j)
      d2.push_back((rows.row(idx[i]) - rows.row(idx[j])).squaredNorm());
  auto mid = d2.begin() + d2.size() / 2;
  std::nth_element(d2.begin(), mid, d2.end());
  return *mid > 0.0 ? *mid : 1.0;
}

Standardization standardize_in_place(DataSet& data) {
  Standardization s;
  s.mean = data.rows.colwise().mean();
  Eigen::MatrixXd centered = data.rows.rowwise() - s.mean.transpose();
  s.scale = (centered.array().square().colwise().sum() / std::max(1, data.n() - 1)).sqrt();
  for (int j = 0; j < data.p(); ++j)
    if (s.scale(j) == 0.0) s.scale(j) = 1.0;
  data.rows = centered.array().rowwise() / s.scale.transpose().array();
  return s;
}

}  // namespace salmix
