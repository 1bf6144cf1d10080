#pragma once

#include "mvsc/types.hpp"

namespace mvsc::graph {

/// Consensus low-pass filter G = 0.75 I + 0.25 C.
struct FilterMatrix {
  Matrix G;
};

/// Ascending eigenvalues with orthonormal eigenvector columns.
struct GraphSpectrum {
  Vector eigenvalues;
  Matrix eigenvectors;
};

inline constexpr double kSymmetryTol = 1e-8;

/// Self-loop augmented normalized Laplacian L = I - D^-1/2 (W + I) D^-1/2,
/// D_ii = sum_j (W + I)_ij. Throws InvalidArgument if W is not square,
/// symmetric within kSymmetryTol, or has negative entries.
Matrix normalized_laplacian(const Matrix& W);

/// G = 0.75 I + 0.25 C. No constraint checks on C: mid-optimization iterates are
/// passed routinely.
FilterMatrix consensus_filter(const Matrix& C);

/// G X
Matrix smooth_features(const FilterMatrix& filter, const Matrix& X);

/// Eigendecomposition of (M + M^T)/2 after checking symmetry within kSymmetryTol.
GraphSpectrum filter_spectrum(const Matrix& M);

/// Response of the first-order filter at a Laplacian frequency, 1 - lambda/2.
inline double filter_response(double lambda) { return 1.0 - 0.5 * lambda; }

/// Diagnostic: C symmetric, nonnegative, zero diagonal and row-stochastic within tol.
bool is_valid_consensus(const Matrix& C, double tol = 1e-8);

}  // namespace mvsc::graph
