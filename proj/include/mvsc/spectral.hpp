#pragma once

#include <cstdint>

#include "mvsc/types.hpp"

namespace mvsc::spectral {

/// Symmetric nonnegative similarity matrix.
struct AffinityMatrix {
  Matrix W;
};

struct ClusterAssignment {
  Labels labels;
  int k = 0;
  double inertia = 0.0;
  /// Number of cluster ids in [0, k) that received no point.
  int empty_clusters = 0;
};

/// W = (|C| + |C^T|) / 2
AffinityMatrix build_affinity(const Matrix& C);

/// Normalized-cuts relaxation: bottom-k eigenvectors of
/// L = I - D^-1/2 W D^-1/2 (D from W, no self loops; zero-degree rows get a zero
/// scaling), row-normalized, then k-means with `restarts` seeded restarts.
ClusterAssignment spectral_clustering(const AffinityMatrix& affinity, int k, std::uint64_t seed,
                                      int restarts = 20);

/// Bottom-k row-normalized spectral embedding used by spectral_clustering.
Matrix spectral_embedding(const AffinityMatrix& affinity, int k);

/// k-means++ seeding and Lloyd iterations (stop when inertia changes by < 1e-10
/// or after 300 iterations); best of `restarts` runs by inertia. Restart r draws
/// from its own stream seeded by (seed, r). Rows of `points` are the samples.
ClusterAssignment kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts = 20);

}  // namespace mvsc::spectral
