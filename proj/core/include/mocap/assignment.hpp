#pragma once

#include <Eigen/Core>

#include <vector>

namespace mocap {

/// Normalized assignment confidences over an augmented grid: one row per
/// point plus a dustbin row, one column per label plus a dustbin column. The
/// dustbin absorbs unmatched points and labels.
struct ConfidenceMatrix {
  Eigen::MatrixXd scores; // (n+1) x (N+1)
  int point_count = 0;    // n
  int label_count = 0;    // N

  int dustbin_row() const { return point_count; }
  int dustbin_col() const { return label_count; }
};

/// Per-point discrete assignment. -1 means the null label.
struct FrameLabeling {
  std::vector<int> labels;
  std::vector<double> confidences;
};

/// Places `initial` in the top-left block and fills the appended row and
/// column (corner included) with dustbin_score.
Eigen::MatrixXd augment_scores(const Eigen::MatrixXd& initial, double dustbin_score);

/// Target row/column masses for the augmented matrix. Real points and labels
/// carry mass 1; the dustbin row absorbs up to N unmatched labels and the
/// dustbin column up to n unmatched points, so total mass balances at n + N.
struct TransportMarginals {
  Eigen::VectorXd row_mass; // n + 1
  Eigen::VectorXd col_mass; // N + 1
};

TransportMarginals transport_marginals(int point_count, int label_count);

/// Alternating row/column scaling of exp(log_scores) toward the target
/// marginals, carried in log domain (log-sum-exp) for stability. Each
/// iteration normalizes rows then columns; after k iterations columns meet
/// their targets exactly and rows within a gap that shrinks with k.
ConfidenceMatrix sinkhorn_normalize(const Eigen::MatrixXd& augmented_log_scores,
                                    int iterations,
                                    const TransportMarginals& marginals);

ConfidenceMatrix sinkhorn_normalize(const Eigen::MatrixXd& augmented_log_scores,
                                    int iterations);

/// Greedy mutual-argmax discretization. Entries are visited in descending
/// order; an entry is accepted only if it is the maximum of both its full row
/// and full column (dustbins included) and clears accept_threshold. Points
/// whose best entry fails either test fall to null; each label is used at
/// most once. Null points report the dustbin-column confidence.
FrameLabeling extract_labels(const ConfidenceMatrix& confidence, double accept_threshold);

} // namespace mocap
