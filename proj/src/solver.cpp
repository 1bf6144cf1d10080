#include "mvsc/solver.hpp"

#include <algorithm>
#include <cmath>

#include "mvsc/kernels.hpp"

namespace mvsc::solver {
namespace {

std::span<const double> flat(const Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<const double> flat(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

/// X = M^-1 R for symmetric positive definite M.
Matrix spd_solve(const Matrix& M, const Matrix& R, const SolverState& s, const char* what) {
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success)
    throw SolverFailure(std::string("factorization failed in ") + what, s.iter + 1, {});
  return llt.solve(R);
}

double view_weight_term(const SolverState& s, std::size_t i, const SolverConfig& cfg) {
  return cfg.beta * std::pow(s.gamma(static_cast<Eigen::Index>(i)), cfg.eta);
}

/// Features entering the self-expression term of view i.
const Matrix& expressed(const SolverState& s, const MultiViewDataset& ds, std::size_t i,
                        Variant variant) {
  return variant == Variant::NoSmoothing ? ds.view(i) : s.views[i].Y;
}

Matrix ones(Eigen::Index n) { return Matrix::Ones(n, n); }

}  // namespace

Variant parse_variant(const std::string& s) {
  if (s == "full") return Variant::Full;
  if (s == "no_smoothing") return Variant::NoSmoothing;
  if (s == "frobenius") return Variant::Frobenius;
  throw InvalidArgument("unknown solver variant: " + s);
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Full: return "full";
    case Variant::NoSmoothing: return "no_smoothing";
    case Variant::Frobenius: return "frobenius";
  }
  return "full";
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& m) { throw InvalidArgument("solver config: " + m); };
  if (!(alpha > 0.0)) fail("alpha must be positive");
  if (!(beta > 0.0)) fail("beta must be positive");
  if (eta == 1.0 || !std::isfinite(eta)) fail("eta must be finite and != 1");
  if (!(mu0 > 0.0)) fail("mu0 must be positive");
  if (!(mu_max > 0.0) || mu0 > mu_max) fail("need 0 < mu0 <= mu_max");
  if (!(rho >= 1.0)) fail("rho must be >= 1");
  if (!(eps > 0.0)) fail("eps must be positive");
  if (!(residual_tol > 0.0)) fail("residual_tol must be positive");
  if (!(j_floor > 0.0)) fail("j_floor must be positive");
  if (max_iter < 1 || max_iter > 10000) fail("max_iter must be in [1, 10000]");
}

double ConstraintGaps::max() const { return std::max({Y, CiZi, Ci1, CZ, C1}); }

SolverState init_state(const MultiViewDataset& ds, const SolverConfig& cfg) {
  const Eigen::Index n = ds.num_samples();
  SolverState s;
  for (const Matrix& x : ds.views()) {
    ViewBlock b;
    b.Y = Matrix::Zero(n, x.cols());
    b.C = Matrix::Zero(n, n);
    b.Z = Matrix::Zero(n, n);
    b.Gamma = Matrix::Zero(n, x.cols());
    b.Lambda = Matrix::Zero(n, n);
    b.Omega = Vector::Zero(n);
    s.views.push_back(std::move(b));
  }
  s.C = Matrix::Zero(n, n);
  s.Z = Matrix::Zero(n, n);
  s.Theta = Matrix::Zero(n, n);
  s.Phi = Vector::Zero(n);
  s.gamma = Vector::Constant(static_cast<Eigen::Index>(ds.num_views()),
                             1.0 / static_cast<double>(ds.num_views()));
  s.mu = cfg.mu0;
  s.iter = 0;
  return s;
}

Matrix update_view_representation(const SolverState& s, const MultiViewDataset& ds, std::size_t i) {
  const ViewBlock& b = s.views[i];
  const Matrix& X = ds.view(i);
  const Eigen::Index n = X.rows();
  const Matrix IminusC = Matrix::Identity(n, n) - b.C;
  Matrix lhs = 2.0 * IminusC.transpose() * IminusC;
  lhs.diagonal().array() += 16.0 * s.mu;
  const Matrix rhs = 12.0 * s.mu * X + 4.0 * s.mu * (s.C * X) - 4.0 * b.Gamma;
  return spd_solve(lhs, rhs, s, "view representation update");
}

Matrix update_view_coefficients(const SolverState& s, const MultiViewDataset& ds, std::size_t i,
                                const SolverConfig& cfg, Variant variant) {
  const ViewBlock& b = s.views[i];
  const Matrix& F = expressed(s, ds, i, variant);
  const Eigen::Index n = F.rows();
  const double w = view_weight_term(s, i, cfg);
  const Matrix gram = 2.0 * F * F.transpose();

  // C_i R = P with R symmetric positive definite, so C_i^T = R^-1 P^T.
  Matrix R = gram + s.mu * ones(n);
  R.diagonal().array() += 2.0 * (cfg.alpha + w) + s.mu;

  Matrix P = gram + 2.0 * w * s.C + s.mu * (b.Z + ones(n)) - b.Lambda;
  P.colwise() -= b.Omega;
  if (variant != Variant::Frobenius) P.noalias() += 2.0 * cfg.alpha * (s.C * b.Z);

  return spd_solve(R, P.transpose(), s, "view coefficient update").transpose();
}

Matrix view_auxiliary_unprojected(const SolverState& s, std::size_t i, const SolverConfig& cfg,
                                  Variant variant) {
  const ViewBlock& b = s.views[i];
  if (variant == Variant::Frobenius) return b.C + b.Lambda / s.mu;
  const Matrix CtC = s.C.transpose() * s.C;
  Matrix lhs = 2.0 * cfg.alpha * CtC;
  lhs.diagonal().array() += s.mu;
  const Matrix rhs = 2.0 * cfg.alpha * (s.C.transpose() * b.C) + s.mu * b.C + b.Lambda;
  return spd_solve(lhs, rhs, s, "view auxiliary update");
}

Matrix update_view_auxiliary(const SolverState& s, std::size_t i, const SolverConfig& cfg,
                             Variant variant) {
  return project_constraints(view_auxiliary_unprojected(s, i, cfg, variant));
}

Matrix update_consensus_coefficients(const SolverState& s, const MultiViewDataset& ds,
                                     const SolverConfig& cfg, Variant variant) {
  const Eigen::Index n = s.C.rows();
  Matrix A = s.mu * (s.Z + ones(n)) - s.Theta;
  A.colwise() -= s.Phi;
  Matrix B = s.mu * ones(n);
  B.diagonal().array() += s.mu;

  for (std::size_t i = 0; i < s.views.size(); ++i) {
    const ViewBlock& b = s.views[i];
    const double w = view_weight_term(s, i, cfg);
    A += 2.0 * w * b.C;
    B.diagonal().array() += 2.0 * w;
    if (variant != Variant::Frobenius) {
      A.noalias() += 2.0 * cfg.alpha * (b.C * b.Z.transpose());
      B.noalias() += 2.0 * cfg.alpha * (b.Z * b.Z.transpose());
    }
    if (variant != Variant::NoSmoothing) {
      const Matrix& X = ds.view(i);
      const Matrix XXt = X * X.transpose();
      A.noalias() += (4.0 * s.mu * b.Y + b.Gamma) * X.transpose();
      A -= 3.0 * s.mu * XXt;
      B += s.mu * XXt;
    }
  }
  // B is symmetric positive definite: C = A B^-1  <=>  C^T = B^-1 A^T.
  return spd_solve(B, A.transpose(), s, "consensus coefficient update").transpose();
}

Matrix consensus_auxiliary_unprojected(const SolverState& s) { return s.C + s.Theta / s.mu; }

Matrix update_consensus_auxiliary(const SolverState& s) {
  return project_constraints(consensus_auxiliary_unprojected(s));
}

Matrix project_constraints(const Matrix& M) {
  if (M.rows() != M.cols()) throw InvalidArgument("project_constraints: matrix must be square");
  const Matrix T = M.transpose();
  Matrix out(M.rows(), M.cols());
  const auto len = static_cast<std::size_t>(M.size());
  kernels::sym_clamp({M.data(), len}, {T.data(), len}, {out.data(), len});
  out.diagonal().setZero();
  return out;
}

void update_multipliers(SolverState& s, const MultiViewDataset& ds, const SolverConfig& cfg,
                        Variant variant) {
  const double mu = s.mu;
  for (std::size_t i = 0; i < s.views.size(); ++i) {
    ViewBlock& b = s.views[i];
    if (variant != Variant::NoSmoothing) {
      const Matrix& X = ds.view(i);
      b.Gamma += mu * (4.0 * b.Y - 3.0 * X - s.C * X);
    }
    b.Lambda += mu * (b.C - b.Z);
    b.Omega += mu * (b.C.rowwise().sum().array() - 1.0).matrix();
  }
  s.Theta += mu * (s.C - s.Z);
  s.Phi += mu * (s.C.rowwise().sum().array() - 1.0).matrix();
  s.mu = std::min(cfg.mu_max, cfg.rho * mu);
}

Vector view_mismatch(const SolverState& s) {
  Vector J(static_cast<Eigen::Index>(s.views.size()));
  for (std::size_t i = 0; i < s.views.size(); ++i)
    J(static_cast<Eigen::Index>(i)) = kernels::sq_dist(flat(s.C), flat(s.views[i].C));
  return J;
}

Vector view_weights(const Vector& J, const SolverConfig& cfg) {
  const Vector Jf = J.cwiseMax(cfg.j_floor);
  const double e = 1.0 / (1.0 - cfg.eta);
  // Common factor J_ref^e cancels in the ratio; pick J_ref so every power is <= 1.
  const double ref = e > 0.0 ? Jf.maxCoeff() : Jf.minCoeff();
  Vector p(Jf.size());
  for (Eigen::Index i = 0; i < Jf.size(); ++i) p(i) = std::pow(Jf(i) / ref, e);
  return p / p.sum();
}

Vector update_view_weights(const SolverState& s, const SolverConfig& cfg) {
  return view_weights(view_mismatch(s), cfg);
}

double objective_value(const SolverState& s, const MultiViewDataset& ds, const SolverConfig& cfg,
                       Variant variant) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.views.size(); ++i) {
    const ViewBlock& b = s.views[i];
    const Matrix& F = expressed(s, ds, i, variant);
    total += (F - b.C * F).squaredNorm();
    if (variant == Variant::Frobenius)
      total += cfg.alpha * b.C.squaredNorm();
    else
      total += cfg.alpha * (b.C - s.C * b.Z).squaredNorm();
    total += view_weight_term(s, i, cfg) * kernels::sq_dist(flat(s.C), flat(b.C));
  }
  return total;
}

ConstraintGaps constraint_gaps(const SolverState& s, const MultiViewDataset& ds, Variant variant) {
  ConstraintGaps g;
  for (std::size_t i = 0; i < s.views.size(); ++i) {
    const ViewBlock& b = s.views[i];
    if (variant != Variant::NoSmoothing) {
      const Matrix& X = ds.view(i);
      const Matrix r = 4.0 * b.Y - 3.0 * X - s.C * X;
      g.Y = std::max(g.Y, kernels::max_abs(flat(r)));
    }
    g.CiZi = std::max(g.CiZi, kernels::max_abs_diff(flat(b.C), flat(b.Z)));
    const Vector rs = b.C.rowwise().sum().array() - 1.0;
    g.Ci1 = std::max(g.Ci1, kernels::max_abs(flat(rs)));
  }
  g.CZ = kernels::max_abs_diff(flat(s.C), flat(s.Z));
  const Vector rs = s.C.rowwise().sum().array() - 1.0;
  g.C1 = kernels::max_abs(flat(rs));
  return g;
}

namespace {

bool state_finite(const SolverState& s) {
  auto ok = [](const auto& m) { return kernels::all_finite(flat(m)); };
  for (const ViewBlock& b : s.views)
    if (!ok(b.Y) || !ok(b.C) || !ok(b.Z) || !ok(b.Gamma) || !ok(b.Lambda) || !ok(b.Omega))
      return false;
  return ok(s.C) && ok(s.Z) && ok(s.Theta) && ok(s.Phi) && ok(s.gamma) && std::isfinite(s.mu);
}

}  // namespace

SolverOutput solve(const MultiViewDataset& ds, const SolverConfig& cfg, Variant variant,
                   const IterationObserver& observer) {
  cfg.validate();
  SolverState s = init_state(ds, cfg);
  SolverOutput out;

  try {
    while (s.iter < cfg.max_iter) {
      const Matrix C_prev = s.C;
      const Matrix Z_prev = s.Z;
      const double mu_used = s.mu;

      for (std::size_t i = 0; i < s.views.size(); ++i) {
        if (variant != Variant::NoSmoothing) s.views[i].Y = update_view_representation(s, ds, i);
        s.views[i].C = update_view_coefficients(s, ds, i, cfg, variant);
        s.views[i].Z = update_view_auxiliary(s, i, cfg, variant);
      }
      s.C = update_consensus_coefficients(s, ds, cfg, variant);
      s.Z = update_consensus_auxiliary(s);

      IterationRecord rec;
      rec.gaps = constraint_gaps(s, ds, variant);

      update_multipliers(s, ds, cfg, variant);
      rec.J = view_mismatch(s);
      s.gamma = view_weights(rec.J, cfg);
      ++s.iter;

      rec.iter = s.iter;
      rec.mu = mu_used;
      rec.residual_C = kernels::sq_dist(flat(s.C), flat(C_prev));
      rec.residual_Z = kernels::sq_dist(flat(s.Z), flat(Z_prev));
      rec.objective = objective_value(s, ds, cfg, variant);

      if (!state_finite(s) || !std::isfinite(rec.objective))
        throw SolverFailure("non-finite iterate", s.iter, {});

      out.diagnostics.push_back(rec);
      if (observer) observer(s, out.diagnostics.back());

      if (rec.gaps.max() <= cfg.eps && rec.residual_C <= cfg.residual_tol &&
          rec.residual_Z <= cfg.residual_tol) {
        out.converged = true;
        break;
      }
    }
  } catch (const SolverFailure& f) {
    throw SolverFailure(std::string(f.what()).substr(0, std::string(f.what()).rfind(" (iteration")),
                        f.iteration(), std::move(out.diagnostics));
  }

  out.iterations = s.iter;
  out.consensus_C = s.C;
  for (const ViewBlock& b : s.views) out.view_C.push_back(b.C);
  out.gamma = s.gamma;
  return out;
}

}  // namespace mvsc::solver
