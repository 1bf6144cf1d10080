#include "mvsc/spectral.hpp"

#include <limits>
#include <random>
#include <string>

#include "mvsc/error.hpp"
#include "mvsc/kernels.hpp"

namespace mvsc::spectral {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::span<const double> row_span(const RowMatrix& m, Eigen::Index r) {
  return {m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())};
}

struct LloydResult {
  Labels labels;
  double inertia;
  int empty;
};

/// Nearest centroid (lowest index on ties) and its squared distance.
std::pair<int, double> nearest(const RowMatrix& pts, Eigen::Index i, const RowMatrix& cent) {
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < cent.rows(); ++c) {
    const double d = kernels::sq_dist(row_span(pts, i), row_span(cent, c));
    if (d < bd) {
      bd = d;
      best = static_cast<int>(c);
    }
  }
  return {best, bd};
}

RowMatrix plus_plus_seed(const RowMatrix& pts, int k, std::mt19937_64& rng) {
  const Eigen::Index n = pts.rows();
  RowMatrix cent(k, pts.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  cent.row(0) = pts.row(pick(rng));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    d2[static_cast<std::size_t>(i)] = kernels::sq_dist(row_span(pts, i), row_span(cent, 0));
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    Eigen::Index chosen;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= d2[static_cast<std::size_t>(i)];
        if (target < 0.0 && d2[static_cast<std::size_t>(i)] > 0.0) {
          chosen = i;
          break;
        }
      }
      while (d2[static_cast<std::size_t>(chosen)] == 0.0 && chosen > 0) --chosen;
    } else {
      chosen = pick(rng);
    }
    cent.row(c) = pts.row(chosen);
    for (Eigen::Index i = 0; i < n; ++i)
      d2[static_cast<std::size_t>(i)] = std::min(
          d2[static_cast<std::size_t>(i)], kernels::sq_dist(row_span(pts, i), row_span(cent, c)));
  }
  return cent;
}

LloydResult lloyd(const RowMatrix& pts, RowMatrix cent) {
  const Eigen::Index n = pts.rows();
  const Eigen::Index k = cent.rows();
  Labels labels(static_cast<std::size_t>(n), 0);
  double prev = std::numeric_limits<double>::infinity();
  double inertia = 0.0;
  for (int it = 0; it < 300; ++it) {
    inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto [c, d] = nearest(pts, i, cent);
      labels[static_cast<std::size_t>(i)] = c;
      inertia += d;
    }
    if (std::abs(prev - inertia) < 1e-10) break;
    prev = inertia;

    RowMatrix sums = RowMatrix::Zero(k, pts.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = labels[static_cast<std::size_t>(i)];
      sums.row(c) += pts.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index c = 0; c < k; ++c)
      if (counts[static_cast<std::size_t>(c)] > 0)  // empty clusters keep their centroid
        cent.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
  }
  std::vector<bool> used(static_cast<std::size_t>(k), false);
  for (int c : labels) used[static_cast<std::size_t>(c)] = true;
  int empty = 0;
  for (bool u : used) empty += u ? 0 : 1;
  return {std::move(labels), inertia, empty};
}

}  // namespace

AffinityMatrix build_affinity(const Matrix& C) {
  if (C.rows() != C.cols()) throw InvalidArgument("build_affinity: matrix must be square");
  const Matrix A = C.cwiseAbs();
  return {0.5 * (A + A.transpose())};
}

Matrix spectral_embedding(const AffinityMatrix& affinity, int k) {
  const Matrix& W = affinity.W;
  const Eigen::Index n = W.rows();
  if (W.cols() != n) throw InvalidArgument("spectral_clustering: affinity must be square");
  if (k < 1 || k > n)
    throw InvalidArgument("spectral_clustering: need 1 <= k <= n, got k=" + std::to_string(k) +
                          ", n=" + std::to_string(n));
  if (n > 0) {
    const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
    if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
      throw InvalidArgument("spectral_clustering: affinity is not symmetric");
    if (W.minCoeff() < 0.0) throw InvalidArgument("spectral_clustering: negative affinity");
  }

  const Vector deg = W.rowwise().sum();
  Vector dinv(n);
  for (Eigen::Index i = 0; i < n; ++i) dinv(i) = deg(i) > 0.0 ? 1.0 / std::sqrt(deg(i)) : 0.0;
  Matrix L = -(dinv.asDiagonal() * W * dinv.asDiagonal());
  L.diagonal().array() += 1.0;
  L = (0.5 * (L + L.transpose())).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(L);
  if (es.info() != Eigen::Success) throw Error("spectral_clustering: eigensolver failed");
  Matrix emb = es.eigenvectors().leftCols(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double nrm = emb.row(i).norm();
    if (nrm > 0.0) emb.row(i) /= nrm;
  }
  return emb;
}

ClusterAssignment spectral_clustering(const AffinityMatrix& affinity, int k, std::uint64_t seed,
                                      int restarts) {
  return kmeans(spectral_embedding(affinity, k), k, seed, restarts);
}

ClusterAssignment kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts) {
  const Eigen::Index n = points.rows();
  if (k < 1 || k > n)
    throw InvalidArgument("kmeans: need 1 <= k <= n, got k=" + std::to_string(k) +
                          ", n=" + std::to_string(n));
  if (restarts < 1) throw InvalidArgument("kmeans: restarts must be >= 1");
  const RowMatrix pts = points;

  ClusterAssignment best;
  best.k = k;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    LloydResult res = lloyd(pts, plus_plus_seed(pts, k, rng));
    if (res.inertia < best.inertia) {
      best.labels = std::move(res.labels);
      best.inertia = res.inertia;
      best.empty_clusters = res.empty;
    }
  }
  return best;
}

}  // namespace mvsc::spectral
