#pragma once

#include <vector>

#include "mvsc/types.hpp"

namespace mvsc::metrics {

struct EvaluationReport {
  double acc = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double f_score = 0.0;
  int n = 0;
  int k_pred = 0;
  int k_true = 0;
};

/// Minimum-cost perfect assignment of a square cost matrix: result[row] = column.
/// Among optimal assignments the lexicographically smallest is returned.
std::vector<int> hungarian(const Matrix& cost);

/// Contingency table (rows: pred clusters, cols: true classes), labels compacted
/// to 0..K-1 in ascending order of their values.
Matrix contingency(const Labels& pred, const Labels& truth);

/// Fraction of samples matched under the best one-to-one label mapping.
double clustering_accuracy(const Labels& pred, const Labels& truth);

/// I(pred; truth) / sqrt(H(pred) H(truth)), natural logs. 1 when both partitions
/// are a single cluster, 0 when exactly one entropy vanishes.
double nmi(const Labels& pred, const Labels& truth);

/// Pair-counting adjusted Rand index; 1 for the degenerate cases where both
/// partitions are all singletons or both a single cluster.
double ari(const Labels& pred, const Labels& truth);

/// Pairwise F-score over same-cluster pairs. Precision (recall) is 0 when pred
/// (truth) has no same-cluster pair; identical partitions score 1.
double f_score(const Labels& pred, const Labels& truth);

EvaluationReport evaluate(const Labels& pred, const Labels& truth);

}  // namespace mvsc::metrics
