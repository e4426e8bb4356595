#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace salmix {

// An n x p observation matrix with optional per-row class labels and an
// optional known-label mask (used by model-based classification).
struct DataSet {
  Eigen::MatrixXd rows;
  std::vector<std::string> column_names;
  std::vector<int> labels;      // empty, or size n with values >= 1
  std::vector<char> known_mask; // empty, or size n with values 0/1

  int n() const { return static_cast<int>(rows.rows()); }
  int p() const { return static_cast<int>(rows.cols()); }
  bool has_labels() const { return !labels.empty(); }
  bool has_known_mask() const { return !known_mask.empty(); }
};

// CSV schema: header row required; all columns numeric features except an
// optional `label` column (integer classes) and an optional `known` column
// (0/1). Rejects NaN/Inf and ragged rows with a line-numbered ParseError.
DataSet read_csv(const std::string& path);
void write_csv(const std::string& path, const DataSet& data);

// Median pairwise squared Euclidean distance, the unit-free data scale used
// by the degeneracy safeguard. Subsamples deterministically above 600 rows.
double median_pairwise_sq_distance(const Eigen::MatrixXd& rows);

// z-scoring support for --standardize.
struct Standardization {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
};
Standardization standardize_in_place(DataSet& data);

}  // namespace salmix
