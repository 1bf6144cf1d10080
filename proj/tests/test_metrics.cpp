#include <numeric>
#include <random>

#include "doctest.h"
#include "mvsc/error.hpp"
#include "mvsc/metrics.hpp"
#include "oracles.hpp"

using namespace mvsc;
using namespace mvsc::metrics;

namespace {

Labels relabel(const Labels& y, std::mt19937_64& rng) {
  const int k = *std::max_element(y.begin(), y.end()) + 1;
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Labels out;
  for (int v : y) out.push_back(perm[static_cast<std::size_t>(v)] + 3);
  return out;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("hungarian examples") {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  CHECK(hungarian(a) == std::vector<int>{0, 1});
  Matrix b(2, 2);
  b << 4, 1, 2, 0;
  CHECK(hungarian(b) == std::vector<int>{1, 0});
  CHECK(oracle::assignment_cost(b, hungarian(b)) == 3.0);
  CHECK(hungarian(Matrix::Zero(4, 4)) == std::vector<int>{0, 1, 2, 3});
  CHECK(hungarian(Matrix(0, 0)).empty());
  CHECK_THROWS_AS(hungarian(Matrix::Zero(2, 3)), InvalidArgument);
  Matrix inf = Matrix::Zero(2, 2);
  inf(0, 0) = INFINITY;
  CHECK_THROWS_AS(hungarian(inf), InvalidArgument);
}

TEST_CASE("hungarian matches permutation search") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> small(0, 3);
  std::normal_distribution<double> g(0, 10);
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 40; ++trial) {
      Matrix cost(n, n);
      // Integer costs produce many ties; Gaussian costs give a unique optimum.
      for (Eigen::Index i = 0; i < cost.size(); ++i)
        cost.data()[i] = trial % 2 ? small(rng) : g(rng);
      const auto got = hungarian(cost);
      const auto want = oracle::brute_force_assignment(cost);
      CHECK(oracle::assignment_cost(cost, got) == doctest::Approx(oracle::assignment_cost(cost, want)));
      if (trial % 2) CHECK(got == want);
    }
}

TEST_CASE("accuracy examples") {
  CHECK(clustering_accuracy({0, 1, 2, 1}, {0, 1, 2, 1}) == 1.0);
  CHECK(clustering_accuracy({1, 1, 0, 0}, {0, 0, 1, 1}) == 1.0);
  CHECK(clustering_accuracy({0, 1, 0, 1}, {0, 0, 1, 1}) == 0.5);
  CHECK(clustering_accuracy({0, 0, 0, 0}, {0, 1, 2, 3}) == 0.25);
  CHECK_THROWS_AS(clustering_accuracy({0, 1}, {0}), InvalidArgument);
  CHECK_THROWS_AS(clustering_accuracy({}, {}), InvalidArgument);
}

TEST_CASE("nmi examples") {
  CHECK(nmi({0, 1, 1, 0}, {1, 0, 0, 1}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(nmi({0, 0, 1, 1}, {0, 1, 0, 1})) <= 1e-15);
  CHECK(nmi({0, 0, 0, 1}, {0, 0, 1, 1}) == doctest::Approx(oracle::brute_nmi({0, 0, 0, 1}, {0, 0, 1, 1})).epsilon(1e-14));
  CHECK(nmi({0, 0, 0}, {0, 0, 0}) == 1.0);
  CHECK(nmi({0, 0, 0}, {0, 1, 0}) == 0.0);
  CHECK_THROWS_AS(nmi({0}, {0, 1}), InvalidArgument);
}

TEST_CASE("ari examples") {
  CHECK(ari({0, 1, 1, 2}, {0, 1, 1, 2}) == 1.0);
  CHECK(ari({2, 0, 0, 1}, {0, 1, 1, 2}) == 1.0);
  CHECK(ari({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(oracle::brute_ari({0, 0, 1, 1}, {0, 1, 0, 1})).epsilon(1e-14));
  CHECK(ari({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(-0.5));
  CHECK(ari({0, 1, 2}, {2, 1, 0}) == 1.0);
  CHECK(ari({0, 0, 0}, {1, 1, 1}) == 1.0);
  CHECK_THROWS_AS(ari({0}, {0, 1}), InvalidArgument);
}

TEST_CASE("f-score examples") {
  CHECK(f_score({0, 1, 1}, {0, 1, 1}) == 1.0);
  CHECK(f_score({0, 1, 2, 3}, {0, 0, 1, 1}) == 0.0);
  CHECK(f_score({0, 0, 0, 1}, {0, 0, 1, 1}) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(f_score({0, 1, 2}, {2, 0, 1}) == 1.0);
  CHECK_THROWS_AS(f_score({0}, {0, 1}), InvalidArgument);
}

TEST_CASE("every metric matches brute force on all small partition pairs") {
  for (int n = 1; n <= 6; ++n) {
    const auto parts = oracle::all_partitions(n, 3);
    for (const Labels& p : parts)
      for (const Labels& t : parts) {
        CHECK(std::abs(clustering_accuracy(p, t) - oracle::brute_acc(p, t)) <= 1e-12);
        CHECK(std::abs(nmi(p, t) - oracle::brute_nmi(p, t)) <= 1e-12);
        CHECK(std::abs(ari(p, t) - oracle::brute_ari(p, t)) <= 1e-12);
        CHECK(std::abs(f_score(p, t) - oracle::brute_f(p, t)) <= 1e-12);
      }
  }
}

TEST_CASE("metrics are invariant under relabeling") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 11;
    std::uniform_int_distribution<int> lab(0, 1 + trial % 4);
    Labels p(static_cast<std::size_t>(n)), t(static_cast<std::size_t>(n));
    for (auto& x : p) x = lab(rng);
    for (auto& x : t) x = lab(rng);
    const auto base = evaluate(p, t);
    const auto rp = evaluate(relabel(p, rng), t);
    const auto rt = evaluate(p, relabel(t, rng));
    for (const auto& r : {rp, rt}) {
      CHECK(std::abs(r.acc - base.acc) <= 1e-12);
      CHECK(std::abs(r.nmi - base.nmi) <= 1e-12);
      CHECK(std::abs(r.ari - base.ari) <= 1e-12);
      CHECK(std::abs(r.f_score - base.f_score) <= 1e-12);
    }
    CHECK(base.acc >= 0.0);
    CHECK(base.acc <= 1.0);
    CHECK(base.nmi >= -1e-15);
    CHECK(base.nmi <= 1.0 + 1e-12);
    CHECK(base.ari >= -1.0);
    CHECK(base.ari <= 1.0);
    CHECK(base.n == n);
    if (base.k_pred == base.k_true) CHECK(clustering_accuracy(p, t) == clustering_accuracy(t, p));
  }
}

TEST_CASE("contingency table") {
  const Matrix c = contingency({0, 0, 1, 2}, {1, 1, 0, 0});
  REQUIRE(c.rows() == 3);
  REQUIRE(c.cols() == 2);
  CHECK(c(0, 1) == 2.0);
  CHECK(c(1, 0) == 1.0);
  CHECK(c(2, 0) == 1.0);
  CHECK(c.sum() == 4.0);
}

}  // TEST_SUITE
