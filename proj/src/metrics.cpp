#include "mvsc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "mvsc/error.hpp"

namespace mvsc::metrics {
namespace {

void require_same_length(const Labels& a, const Labels& b, const char* what) {
  if (a.size() != b.size())
    throw InvalidArgument(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  if (a.empty()) throw InvalidArgument(std::string(what) + ": empty labelings");
}

Labels compact(const Labels& y, int& k) {
  std::map<int, int> rank;
  for (int c : y) rank.emplace(c, 0);
  int next = 0;
  for (auto& [c, r] : rank) r = next++;
  k = next;
  Labels out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = rank[y[i]];
  return out;
}

double choose2(double x) { return 0.5 * x * (x - 1.0); }

/// Shortest augmenting path Hungarian method with row/column potentials.
/// Returns the row assignment and leaves the final potentials in u, v.
std::vector<int> solve_assignment(const Matrix& a, std::vector<double>& u, std::vector<double>& v) {
  const int n = static_cast<int>(a.rows());
  const double inf = std::numeric_limits<double>::infinity();
  u.assign(n + 1, 0.0);
  v.assign(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

/// Kuhn's augmenting-path matching restricted to `allowed` edges; rows < first_free
/// are pinned to `pinned[row]`. True if a perfect matching exists.
bool has_perfect_matching(const std::vector<std::vector<char>>& allowed, int first_free,
                          const std::vector<int>& pinned) {
  const int n = static_cast<int>(allowed.size());
  std::vector<int> col_owner(n, -1);
  for (int r = 0; r < first_free; ++r) col_owner[pinned[r]] = r;
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int r) {
    for (int c = 0; c < n; ++c) {
      if (!allowed[r][c] || seen[c]) continue;
      seen[c] = 1;
      if (col_owner[c] >= 0 && col_owner[c] < first_free) continue;
      if (col_owner[c] < 0 || augment(col_owner[c])) {
        col_owner[c] = r;
        return true;
      }
    }
    return false;
  };
  for (int r = first_free; r < n; ++r) {
    seen.assign(n, 0);
    if (!augment(r)) return false;
  }
  return true;
}

}  // namespace

std::vector<int> hungarian(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw InvalidArgument("hungarian: cost matrix must be square");
  if (!cost.allFinite()) throw InvalidArgument("hungarian: cost matrix has non-finite entries");
  const int n = static_cast<int>(cost.rows());
  if (n == 0) return {};

  std::vector<double> u, v;
  std::vector<int> assign = solve_assignment(cost, u, v);

  // Every optimal assignment uses only edges that are tight under the optimal
  // potentials, so the lexicographic minimum is the lexicographically smallest
  // perfect matching of the tight-edge graph.
  const double tol = 1e-9 * (1.0 + cost.cwiseAbs().maxCoeff());
  std::vector<std::vector<char>> tight(n, std::vector<char>(n, 0));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) tight[r][c] = cost(r, c) - u[r + 1] - v[c + 1] <= tol;

  std::vector<int> pinned(n, -1);
  std::vector<char> taken(n, 0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (!tight[r][c] || taken[c]) continue;
      pinned[r] = c;
      if (has_perfect_matching(tight, r + 1, pinned)) break;
      pinned[r] = -1;
    }
    if (pinned[r] < 0) return assign;  // tolerance too tight to certify; keep the optimum found
    taken[pinned[r]] = 1;
  }
  return pinned;
}

Matrix contingency(const Labels& pred, const Labels& truth) {
  require_same_length(pred, truth, "contingency");
  int kp = 0, kt = 0;
  const Labels p = compact(pred, kp);
  const Labels t = compact(truth, kt);
  Matrix m = Matrix::Zero(kp, kt);
  for (std::size_t i = 0; i < p.size(); ++i) m(p[i], t[i]) += 1.0;
  return m;
}

double clustering_accuracy(const Labels& pred, const Labels& truth) {
  const Matrix table = contingency(pred, truth);
  const Eigen::Index k = std::max(table.rows(), table.cols());
  Matrix cost = Matrix::Zero(k, k);
  cost.topLeftCorner(table.rows(), table.cols()) = -table;
  const std::vector<int> match = hungarian(cost);
  double hit = 0.0;
  for (Eigen::Index r = 0; r < table.rows(); ++r)
    if (match[r] < table.cols()) hit += table(r, match[r]);
  return hit / static_cast<double>(pred.size());
}

double nmi(const Labels& pred, const Labels& truth) {
  const Matrix table = contingency(pred, truth);
  const double n = static_cast<double>(pred.size());
  const Vector rows = table.rowwise().sum();
  const Vector cols = table.colwise().sum().transpose();
  auto entropy = [n](const Vector& counts) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < counts.size(); ++i)
      if (counts(i) > 0.0) h -= counts(i) / n * std::log(counts(i) / n);
    return h;
  };
  const double hp = entropy(rows);
  const double ht = entropy(cols);
  if (table.rows() == 1 && table.cols() == 1) return 1.0;
  if (table.rows() == 1 || table.cols() == 1) return 0.0;
  double mi = 0.0;
  for (Eigen::Index r = 0; r < table.rows(); ++r)
    for (Eigen::Index c = 0; c < table.cols(); ++c) {
      const double nij = table(r, c);
      if (nij > 0.0) mi += nij / n * std::log(n * nij / (rows(r) * cols(c)));
    }
  return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

namespace {

struct PairCounts {
  double same_both = 0.0;  // pairs together in pred and truth
  double same_pred = 0.0;
  double same_truth = 0.0;
  double total = 0.0;
};

PairCounts pair_counts(const Labels& pred, const Labels& truth) {
  const Matrix table = contingency(pred, truth);
  PairCounts pc;
  for (Eigen::Index r = 0; r < table.rows(); ++r)
    for (Eigen::Index c = 0; c < table.cols(); ++c) pc.same_both += choose2(table(r, c));
  const Vector rows = table.rowwise().sum();
  const Vector cols = table.colwise().sum().transpose();
  for (Eigen::Index r = 0; r < rows.size(); ++r) pc.same_pred += choose2(rows(r));
  for (Eigen::Index c = 0; c < cols.size(); ++c) pc.same_truth += choose2(cols(c));
  pc.total = choose2(static_cast<double>(pred.size()));
  return pc;
}

}  // namespace

double ari(const Labels& pred, const Labels& truth) {
  const PairCounts pc = pair_counts(pred, truth);
  if (pc.total == 0.0) return 1.0;
  const double expected = pc.same_pred * pc.same_truth / pc.total;
  const double max_index = 0.5 * (pc.same_pred + pc.same_truth);
  const double denom = max_index - expected;
  // Zero only when both partitions are all singletons or both one cluster.
  if (denom == 0.0) return 1.0;
  return (pc.same_both - expected) / denom;
}

double f_score(const Labels& pred, const Labels& truth) {
  const PairCounts pc = pair_counts(pred, truth);
  if (pc.same_pred == 0.0 && pc.same_truth == 0.0) return 1.0;
  const double precision = pc.same_pred > 0.0 ? pc.same_both / pc.same_pred : 0.0;
  const double recall = pc.same_truth > 0.0 ? pc.same_both / pc.same_truth : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

EvaluationReport evaluate(const Labels& pred, const Labels& truth) {
  EvaluationReport r;
  r.acc = clustering_accuracy(pred, truth);
  r.nmi = nmi(pred, truth);
  r.ari = ari(pred, truth);
  r.f_score = f_score(pred, truth);
  r.n = static_cast<int>(pred.size());
  int kp = 0, kt = 0;
  compact(pred, kp);
  compact(truth, kt);
  r.k_pred = kp;
  r.k_true = kt;
  return r;
}

}  // namespace mvsc::metrics
