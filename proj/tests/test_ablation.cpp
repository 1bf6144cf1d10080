#include <random>

#include "doctest.h"
#include "mvsc/data.hpp"
#include "mvsc/solver.hpp"
#include "oracles.hpp"

using namespace mvsc;
using namespace mvsc::solver;

namespace {

double fd_stationarity(const std::function<double(const Matrix&)>& f, const Matrix& at) {
  return oracle::fd_gradient(f, at).cwiseAbs().maxCoeff() / (1.0 + std::abs(f(at)));
}

}  // namespace

TEST_SUITE("ablation") {

TEST_CASE("re-derived updates are stationary for both variants") {
  std::mt19937_64 rng(31);
  for (Variant v : {Variant::NoSmoothing, Variant::Frobenius}) {
    CAPTURE(to_string(v));
    for (int trial = 0; trial < 4; ++trial) {
      const auto ds = oracle::random_dataset(trial % 2 ? 8 : 5, {4, 7, 4}, rng);
      SolverConfig cfg;
      cfg.alpha = 0.3 + trial;
      cfg.beta = 1.7;
      cfg.eta = trial % 2 ? -2.0 : 0.5;
      const SolverState s = oracle::random_state(ds, rng);
      for (std::size_t i = 0; i < ds.num_views(); ++i) {
        const Matrix Ci = update_view_coefficients(s, ds, i, cfg, v);
        CHECK(fd_stationarity([&](const Matrix& M) { return oracle::ci_subproblem(s, ds, i, cfg, v, M); },
                              Ci) <= 1e-6);
        const Matrix Zi = view_auxiliary_unprojected(s, i, cfg, v);
        CHECK(fd_stationarity([&](const Matrix& M) { return oracle::zi_subproblem(s, i, cfg, v, M); },
                              Zi) <= 1e-6);
      }
      const Matrix C = update_consensus_coefficients(s, ds, cfg, v);
      CHECK(fd_stationarity([&](const Matrix& M) { return oracle::c_subproblem(s, ds, cfg, v, M); }, C) <=
            1e-6);
    }
  }
}

TEST_CASE("no-smoothing ignores the smoothing block") {
  std::mt19937_64 rng(32);
  const auto ds = oracle::random_dataset(5, {4, 7}, rng);
  SolverConfig cfg;
  SolverState s = oracle::random_state(ds, rng);
  const Matrix C1 = update_consensus_coefficients(s, ds, cfg, Variant::NoSmoothing);
  for (auto& b : s.views) {
    b.Y *= 5.0;
    b.Gamma.setRandom();
  }
  CHECK(update_consensus_coefficients(s, ds, cfg, Variant::NoSmoothing) == C1);
  CHECK(constraint_gaps(s, ds, Variant::NoSmoothing).Y == 0.0);
}

TEST_CASE("variants start from the same zero state and keep the invariants") {
  SyntheticSpec spec;
  spec.n_per_cluster = 6;
  spec.view_dims = {8, 9};
  const auto ds = generate_synthetic(spec);
  SolverConfig cfg;
  cfg.max_iter = 80;
  for (Variant v : {Variant::NoSmoothing, Variant::Frobenius}) {
    int first = 0;
    auto observer = [&](const SolverState& s, const IterationRecord&) {
      if (s.iter == 1) ++first;
      CHECK(s.Z == s.Z.transpose());
      CHECK(s.Z.minCoeff() >= 0.0);
      CHECK(s.Z.diagonal().isZero(0.0));
      for (const auto& b : s.views) {
        CHECK(b.Z == b.Z.transpose());
        CHECK(b.Z.minCoeff() >= 0.0);
        CHECK(b.Z.diagonal().isZero(0.0));
      }
      CHECK(std::abs(s.gamma.sum() - 1.0) <= 1e-12);
    };
    const auto out = solve(ds, cfg, v, observer);
    CHECK(first == 1);
    CHECK(out.iterations >= 1);
  }
  const SolverState z = init_state(ds, cfg);
  CHECK(z.C.isZero(0.0));
}

TEST_CASE("ablations converge on the synthetic benchmark") {
  const auto ds = generate_synthetic(SyntheticSpec{});
  SolverConfig cfg;
  const auto ns = solve_ablation_no_smoothing(ds, cfg);
  const auto fr = solve_ablation_frobenius(ds, cfg);
  CHECK(ns.converged);
  CHECK(fr.converged);
  CHECK(ns.diagnostics.back().gaps.Y == 0.0);
}

TEST_CASE("frobenius regularizer shrinks view coefficients as alpha grows") {
  const auto ds = generate_synthetic(SyntheticSpec{});
  SolverConfig cfg;
  cfg.max_iter = 500;
  std::vector<double> norms;
  for (double a : {0.1, 1.0, 10.0}) {
    cfg.alpha = a;
    const auto out = solve_ablation_frobenius(ds, cfg);
    double total = 0.0;
    for (const Matrix& Ci : out.view_C) total += Ci.norm();
    norms.push_back(total);
  }
  CHECK(norms[1] < norms[0]);
  CHECK(norms[2] < norms[1]);
}

}  // TEST_SUITE
