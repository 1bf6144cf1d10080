#include "mvsc/graph.hpp"

#include <string>

#include "mvsc/error.hpp"

namespace mvsc::graph {
namespace {

void require_square(const Matrix& M, const char* what) {
  if (M.rows() != M.cols())
    throw InvalidArgument(std::string(what) + ": matrix must be square, got " +
                          std::to_string(M.rows()) + "x" + std::to_string(M.cols()));
}

void require_symmetric(const Matrix& M, const char* what) {
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale)
    throw InvalidArgument(std::string(what) + ": matrix is not symmetric");
}

}  // namespace

Matrix normalized_laplacian(const Matrix& W) {
  require_square(W, "normalized_laplacian");
  if (W.size() == 0) return W;
  require_symmetric(W, "normalized_laplacian");
  if (W.minCoeff() < 0.0) throw InvalidArgument("normalized_laplacian: negative edge weight");

  Matrix A = 0.5 * (W + W.transpose());
  A.diagonal().array() += 1.0;
  const Vector dinv = A.rowwise().sum().cwiseSqrt().cwiseInverse();
  Matrix L = -(dinv.asDiagonal() * A * dinv.asDiagonal());
  L.diagonal().array() += 1.0;
  // Symmetric by construction up to rounding in the two diagonal scalings.
  L = 0.5 * (L + L.transpose()).eval();
  return L;
}

FilterMatrix consensus_filter(const Matrix& C) {
  require_square(C, "consensus_filter");
  FilterMatrix f{0.25 * C};
  f.G.diagonal().array() += 0.75;
  return f;
}

Matrix smooth_features(const FilterMatrix& filter, const Matrix& X) {
  if (filter.G.cols() != X.rows())
    throw InvalidArgument("smooth_features: filter is " + std::to_string(filter.G.rows()) + "x" +
                          std::to_string(filter.G.cols()) + " but X has " +
                          std::to_string(X.rows()) + " rows");
  return filter.G * X;
}

GraphSpectrum filter_spectrum(const Matrix& M) {
  require_square(M, "filter_spectrum");
  require_symmetric(M, "filter_spectrum");
  const Matrix S = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success) throw Error("filter_spectrum: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

bool is_valid_consensus(const Matrix& C, double tol) {
  if (C.rows() != C.cols() || C.size() == 0) return false;
  if ((C - C.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  if (C.minCoeff() < -tol) return false;
  if (C.diagonal().cwiseAbs().maxCoeff() > tol) return false;
  return (C.rowwise().sum().array() - 1.0).abs().maxCoeff() <= tol;
}

}  // namespace mvsc::graph
