#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mvsc/types.hpp"

namespace mvsc {

/// v feature matrices sharing the same n samples (rows), plus optional labels.
///
/// Immutable once constructed; the constructor enforces that every view has the
/// same row count n >= 2, at least one column and only finite entries, and that
/// labels (when given) have length n and use every class id in [0, K).
class MultiViewDataset {
 public:
  MultiViewDataset(std::vector<Matrix> views, std::optional<Labels> labels = std::nullopt,
                   std::vector<std::string> view_names = {}, std::string name = {});

  std::size_t num_views() const { return views_.size(); }
  Eigen::Index num_samples() const { return views_.front().rows(); }
  const Matrix& view(std::size_t i) const { return views_.at(i); }
  const std::vector<Matrix>& views() const { return views_; }
  const std::optional<Labels>& labels() const { return labels_; }
  bool has_labels() const { return labels_.has_value(); }
  /// Number of distinct classes; throws DataError if labels are absent.
  int num_classes() const;
  const std::vector<std::string>& view_names() const { return view_names_; }
  const std::string& name() const { return name_; }

 private:
  std::vector<Matrix> views_;
  std::optional<Labels> labels_;
  std::vector<std::string> view_names_;
  std::string name_;
};

/// Union-of-subspaces generator parameters.
struct SyntheticSpec {
  int k = 3;
  int n_per_cluster = 30;
  int subspace_dim = 3;
  std::vector<int> view_dims{20, 30};
  double noise_sigma = 0.01;
  std::uint64_t seed = 7;
};

enum class Normalization { None, UnitRowNorm, ZscoreColumns };

Normalization parse_normalization(const std::string& s);
std::string to_string(Normalization n);

/// Reads a JSON manifest {"views": [{"path", "has_header"}], "labels", "name"}.
/// Relative paths are resolved against the manifest's directory. Label ids are
/// remapped onto 0..K-1 in ascending order of their original values.
MultiViewDataset load_dataset(const std::filesystem::path& manifest_path);

/// Writes one CSV per view, a labels CSV (if any) and manifest.json into dir.
/// Returns the manifest path.
std::filesystem::path write_dataset(const MultiViewDataset& ds, const std::filesystem::path& dir);

/// Per view and cluster: a random subspace_dim-dimensional subspace (QR of a
/// Gaussian matrix), coefficients uniform on [-1, 1], plus N(0, sigma^2) noise.
/// Samples are ordered cluster by cluster. Deterministic given spec.seed.
MultiViewDataset generate_synthetic(const SyntheticSpec& spec);

/// zscore_columns uses the population standard deviation (divide by n);
/// zero-variance columns are only centered. Zero rows stay zero under
/// unit_row_norm.
MultiViewDataset normalize_views(const MultiViewDataset& ds, Normalization mode);

// CSV helpers, also used for trace and consensus output.
Matrix read_csv_matrix(const std::filesystem::path& path, bool has_header = false);
Labels read_csv_labels(const std::filesystem::path& path, bool has_header = false);
void write_csv_matrix(const std::filesystem::path& path, const Matrix& m);

}  // namespace mvsc
