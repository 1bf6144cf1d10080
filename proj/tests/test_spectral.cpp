#include <random>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "mvsc/error.hpp"
#include "mvsc/metrics.hpp"
#include "mvsc/spectral.hpp"
#include "oracles.hpp"

using namespace mvsc;
using namespace mvsc::spectral;

namespace {

/// Random block-diagonal affinity with dense positive blocks, rows/cols shuffled.
Matrix block_affinity(const std::vector<int>& sizes, std::mt19937_64& rng, Labels& truth) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  int n = 0;
  for (int s : sizes) n += s;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  truth.assign(static_cast<std::size_t>(n), 0);
  Matrix W = Matrix::Zero(n, n);
  int start = 0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    for (int i = start; i < start + sizes[b]; ++i) {
      truth[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = static_cast<int>(b);
      for (int j = i + 1; j < start + sizes[b]; ++j) {
        const double w = u(rng);
        W(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = w;
        W(perm[static_cast<std::size_t>(j)], perm[static_cast<std::size_t>(i)]) = w;
      }
    }
    start += sizes[b];
  }
  return W;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("affinity construction") {
  Matrix C(2, 2);
  C << 0, -2, 2, 0;
  Matrix expect(2, 2);
  expect << 0, 2, 2, 0;
  CHECK(build_affinity(C).W == expect);
  CHECK(build_affinity(Matrix::Zero(3, 3)).W.isZero(0.0));
  Matrix S(3, 3);
  S << 0, 0.2, 0.8, 0.2, 0, 0.8, 0.8, 0.8, 0;
  CHECK(build_affinity(S).W == S);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 1);
  Matrix R(6, 6);
  for (Eigen::Index i = 0; i < R.size(); ++i) R.data()[i] = g(rng);
  const Matrix W = build_affinity(R).W;
  CHECK(W == W.transpose());
  CHECK(W.minCoeff() >= 0.0);
  CHECK_THROWS_AS(build_affinity(Matrix::Zero(2, 3)), InvalidArgument);
}

TEST_CASE("two all-ones blocks") {
  Matrix W = Matrix::Zero(10, 10);
  W.topLeftCorner(5, 5).setOnes();
  W.bottomRightCorner(5, 5).setOnes();
  W.diagonal().setZero();
  const auto a = spectral_clustering({W}, 2, 0);
  Labels truth{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  CHECK(metrics::clustering_accuracy(a.labels, truth) == 1.0);
  CHECK(a.k == 2);
  CHECK(a.empty_clusters == 0);
}

TEST_CASE("degenerate cluster counts") {
  std::mt19937_64 rng(2);
  Labels truth;
  const Matrix W = block_affinity({4, 3}, rng, truth);
  const auto one = spectral_clustering({W}, 1, 3);
  for (int l : one.labels) CHECK(l == 0);

  const auto all = kmeans(Matrix::Identity(5, 5), 5, 1);
  CHECK(std::set<int>(all.labels.begin(), all.labels.end()).size() == 5);
  CHECK(all.inertia == 0.0);

  CHECK_THROWS_AS(spectral_clustering({W}, 8, 0), InvalidArgument);
  CHECK_THROWS_AS(spectral_clustering({W}, 0, 0), InvalidArgument);
  Matrix neg = W;
  neg(0, 1) = neg(1, 0) = -1.0;
  CHECK_THROWS_AS(spectral_clustering({neg}, 2, 0), InvalidArgument);
}

TEST_CASE("connected components are recovered exactly") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int c = 2 + trial % 2;
    std::vector<int> sizes;
    std::uniform_int_distribution<int> sz(2, 30 / c);
    for (int b = 0; b < c; ++b) sizes.push_back(sz(rng));
    Labels truth;
    const Matrix W = block_affinity(sizes, rng, truth);
    REQUIRE(oracle::components(W) == [&] {
      // Components numbered by first appearance, the same convention the oracle uses.
      Labels relabeled(truth.size());
      std::map<int, int> seen;
      for (std::size_t i = 0; i < truth.size(); ++i)
        relabeled[i] = seen.emplace(truth[i], static_cast<int>(seen.size())).first->second;
      return relabeled;
    }());
    const auto a = spectral_clustering({W}, c, static_cast<std::uint64_t>(trial));
    CHECK(metrics::clustering_accuracy(a.labels, truth) == 1.0);
  }
}

TEST_CASE("kmeans examples") {
  Matrix pairs(4, 2);
  pairs << 0, 0, 0.1, 0, 5, 5, 5, 5.1;
  const auto a = kmeans(pairs, 2, 4);
  CHECK(a.labels[0] == a.labels[1]);
  CHECK(a.labels[2] == a.labels[3]);
  CHECK(a.labels[0] != a.labels[2]);

  Matrix line(5, 1);
  line << 0, 0.1, 0.2, 10, 10.1;
  // Exhaustive search over every 2-partition.
  double best = INFINITY;
  int best_mask = 0;
  for (int mask = 1; mask < 31; ++mask) {
    double inertia = 0.0;
    for (int side = 0; side < 2; ++side) {
      double sum = 0.0, cnt = 0.0;
      for (int i = 0; i < 5; ++i)
        if (((mask >> i) & 1) == side) sum += line(i), cnt += 1;
      for (int i = 0; i < 5; ++i)
        if (((mask >> i) & 1) == side) inertia += oracle::sq(line(i) - sum / cnt);
    }
    if (inertia < best) best = inertia, best_mask = mask;
  }
  const auto l = kmeans(line, 2, 0);
  CHECK(l.inertia == doctest::Approx(best).epsilon(1e-12));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK((l.labels[i] == l.labels[j]) == (((best_mask >> i) & 1) == ((best_mask >> j) & 1)));
  CHECK(l.labels[0] == l.labels[2]);
  CHECK(l.labels[3] == l.labels[4]);
  CHECK(l.labels[0] != l.labels[3]);
}

TEST_CASE("kmeans is deterministic per seed") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0, 1);
  Matrix P(40, 3);
  for (Eigen::Index i = 0; i < P.size(); ++i) P.data()[i] = g(rng);
  const auto a = kmeans(P, 4, 17), b = kmeans(P, 4, 17);
  CHECK(a.labels == b.labels);
  CHECK(a.inertia == b.inertia);
  for (int l : a.labels) CHECK((l >= 0 && l < 4));
}

TEST_CASE("embedding rows are unit or zero") {
  Matrix W = Matrix::Zero(6, 6);
  W(0, 1) = W(1, 0) = 1;
  W(2, 3) = W(3, 2) = 1;
  W(3, 4) = W(4, 3) = 1;
  // Node 5 is isolated.
  const Matrix E = spectral_embedding({W}, 3);
  CHECK(E.rows() == 6);
  CHECK(E.cols() == 3);
  CHECK(E.allFinite());
  for (int i = 0; i < 6; ++i) {
    const double nrm = E.row(i).norm();
    CHECK((nrm == 0.0 || std::abs(nrm - 1.0) <= 1e-12));
  }
}

}  // TEST_SUITE
