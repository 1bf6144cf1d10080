#pragma once

// ADMM solver for multi-view subspace clustering with a consensus graph filter.
//
// Per view i the solver learns smoothed features Y_i (tied to X_i through
// 4 Y_i = 3 X_i + C X_i), a self-expressive coefficient matrix C_i and its
// constrained copy Z_i; globally it learns the consensus matrix C, its
// constrained copy Z and the view weights gamma. Multipliers Gamma_i, Lambda_i,
// Omega_i, Theta and Phi enforce the splittings; mu is the penalty.

#include <functional>
#include <string>
#include <vector>

#include "mvsc/data.hpp"
#include "mvsc/error.hpp"
#include "mvsc/types.hpp"

namespace mvsc::solver {

/// Which objective is optimized.
///  - Full: smoothed self-expression plus the filter regularizer alpha||C_i - C Z_i||^2.
///  - NoSmoothing: self-expression on the raw X_i; Y_i and Gamma_i are dropped.
///  - Frobenius: smoothed self-expression with alpha||C_i||^2 as regularizer.
enum class Variant { Full, NoSmoothing, Frobenius };

Variant parse_variant(const std::string& s);
std::string to_string(Variant v);

struct SolverConfig {
  double alpha = 0.5;
  double beta = 0.5;
  double eta = 0.5;
  double mu0 = 1e-6;
  double mu_max = 1e30;
  double rho = 1.1;
  double eps = 1e-4;
  /// Convergence also requires ||C_{k+1} - C_k||^2 and ||Z_{k+1} - Z_k||^2 below this.
  double residual_tol = 1e-6;
  int max_iter = 1000;
  /// Lower bound applied to J_i = ||C - C_i||^2 before the weight update.
  double j_floor = 1e-12;

  /// Throws InvalidArgument on alpha <= 0, beta <= 0, eta == 1, mu0 > mu_max,
  /// rho < 1, non-positive eps/residual_tol/j_floor, or max_iter outside [1, 10000].
  void validate() const;
};

struct ViewBlock {
  Matrix Y;       // smoothed features, n x d_i
  Matrix C;       // view coefficients, n x n
  Matrix Z;       // constrained copy of C, n x n
  Matrix Gamma;   // multiplier of 4Y - 3X - CX, n x d_i
  Matrix Lambda;  // multiplier of C_i - Z_i, n x n
  Vector Omega;   // multiplier of C_i 1 - 1, n
};

struct SolverState {
  std::vector<ViewBlock> views;
  Matrix C;
  Matrix Z;
  Matrix Theta;
  Vector Phi;
  Vector gamma;
  double mu = 0.0;
  int iter = 0;
};

/// Max-norms of the constraint violations.
struct ConstraintGaps {
  double Y = 0.0;     // 4 Y_i - 3 X_i - C X_i   (max over views)
  double CiZi = 0.0;  // C_i - Z_i
  double Ci1 = 0.0;   // C_i 1 - 1
  double CZ = 0.0;    // C - Z
  double C1 = 0.0;    // C 1 - 1

  double max() const;
};

struct IterationRecord {
  int iter = 0;
  double residual_C = 0.0;  // ||C_{k+1} - C_k||_F^2
  double residual_Z = 0.0;  // ||Z_{k+1} - Z_k||_F^2
  ConstraintGaps gaps;
  double objective = 0.0;
  Vector J;                 // ||C - C_i||_F^2 per view
  double mu = 0.0;          // penalty used during this iteration
};

using Diagnostics = std::vector<IterationRecord>;

struct SolverOutput {
  Matrix consensus_C;
  std::vector<Matrix> view_C;
  Vector gamma;
  Diagnostics diagnostics;
  bool converged = false;
  int iterations = 0;
};

/// Raised when an inner solve fails or an iterate becomes non-finite.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, int iteration, Diagnostics diagnostics)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration),
        diagnostics_(std::move(diagnostics)) {}
  int iteration() const { return iteration_; }
  const Diagnostics& diagnostics() const { return diagnostics_; }

 private:
  int iteration_;
  Diagnostics diagnostics_;
};

/// Called after every completed iteration with the updated state.
using IterationObserver = std::function<void(const SolverState&, const IterationRecord&)>;

/// All matrices zero, gamma uniform, mu = cfg.mu0.
SolverState init_state(const MultiViewDataset& ds, const SolverConfig& cfg);

// Closed-form block updates. Each returns the new value without modifying the
// state; `solve` applies them in order.

/// Y_i = [2 (I - C_i)^T (I - C_i) + 16 mu I]^-1 (12 mu X_i + 4 mu C X_i - 4 Gamma_i)
Matrix update_view_representation(const SolverState& s, const MultiViewDataset& ds, std::size_t i);

/// C_i from the stationarity condition of its augmented-Lagrangian subproblem.
/// NoSmoothing uses X_i in place of Y_i; Frobenius drops the C Z_i coupling.
Matrix update_view_coefficients(const SolverState& s, const MultiViewDataset& ds, std::size_t i,
                                const SolverConfig& cfg, Variant variant = Variant::Full);

/// Z_i before projection: (2 alpha C^T C + mu I)^-1 (2 alpha C^T C_i + mu C_i + Lambda_i),
/// or C_i + Lambda_i / mu for the Frobenius variant.
Matrix view_auxiliary_unprojected(const SolverState& s, std::size_t i, const SolverConfig& cfg,
                                  Variant variant = Variant::Full);
Matrix update_view_auxiliary(const SolverState& s, std::size_t i, const SolverConfig& cfg,
                             Variant variant = Variant::Full);

/// C = A B^-1 with A, B assembled from every view block.
Matrix update_consensus_coefficients(const SolverState& s, const MultiViewDataset& ds,
                                     const SolverConfig& cfg, Variant variant = Variant::Full);

/// Z = C + Theta / mu, before and after projection.
Matrix consensus_auxiliary_unprojected(const SolverState& s);
Matrix update_consensus_auxiliary(const SolverState& s);

/// Symmetrize, clamp at zero, zero the diagonal, in that order. This is the
/// sequential heuristic, not the Euclidean projection onto the intersection.
Matrix project_constraints(const Matrix& M);

/// Dual ascent with the current mu, then mu = min(mu_max, rho mu).
void update_multipliers(SolverState& s, const MultiViewDataset& ds, const SolverConfig& cfg,
                        Variant variant = Variant::Full);

/// J_i = ||C - C_i||_F^2
Vector view_mismatch(const SolverState& s);

/// gamma_i = J_i^(1/(1-eta)) / sum_j J_j^(1/(1-eta)) with J floored at cfg.j_floor.
/// Evaluated on ratios J_i / J_ref so the powers stay in (0, 1].
Vector view_weights(const Vector& J, const SolverConfig& cfg);
Vector update_view_weights(const SolverState& s, const SolverConfig& cfg);

/// Value of the model objective at the current iterates.
double objective_value(const SolverState& s, const MultiViewDataset& ds, const SolverConfig& cfg,
                       Variant variant = Variant::Full);

ConstraintGaps constraint_gaps(const SolverState& s, const MultiViewDataset& ds,
                               Variant variant = Variant::Full);

/// Runs the ADMM loop until every constraint gap is <= cfg.eps and both
/// iterate residuals are <= cfg.residual_tol, or max_iter is reached.
SolverOutput solve(const MultiViewDataset& ds, const SolverConfig& cfg,
                   Variant variant = Variant::Full, const IterationObserver& observer = {});

inline SolverOutput solve_ablation_no_smoothing(const MultiViewDataset& ds, const SolverConfig& cfg,
                                                const IterationObserver& observer = {}) {
  return solve(ds, cfg, Variant::NoSmoothing, observer);
}

inline SolverOutput solve_ablation_frobenius(const MultiViewDataset& ds, const SolverConfig& cfg,
                                             const IterationObserver& observer = {}) {
  return solve(ds, cfg, Variant::Frobenius, observer);
}

}  // namespace mvsc::solver
