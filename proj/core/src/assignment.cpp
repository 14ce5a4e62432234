#include "mocap/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace mocap {
namespace {

double log_sum_exp(const Eigen::VectorXd& values) {
  const double peak = values.maxCoeff();
  if (!std::isfinite(peak)) {
    return peak; // all -inf (or a stray +inf/nan, rejected earlier)
  }
  return peak + std::log((values.array() - peak).exp().sum());
}

void check_log_scores(const Eigen::MatrixXd& scores) {
  if (scores.rows() < 2 || scores.cols() < 2) {
    throw std::invalid_argument("augmented score matrix must be at least 2x2");
  }
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    for (Eigen::Index j = 0; j < scores.cols(); ++j) {
      const double v = scores(i, j);
      if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
        throw std::invalid_argument("log scores must be finite or -inf");
      }
    }
  }
}

} // namespace

Eigen::MatrixXd augment_scores(const Eigen::MatrixXd& initial, double dustbin_score) {
  Eigen::MatrixXd out(initial.rows() + 1, initial.cols() + 1);
  out.topLeftCorner(initial.rows(), initial.cols()) = initial;
  out.row(initial.rows()).setConstant(dustbin_score);
  out.col(initial.cols()).setConstant(dustbin_score);
  return out;
}

TransportMarginals transport_marginals(int point_count, int label_count) {
  if (point_count < 0 || label_count < 0) {
    throw std::invalid_argument("negative point or label count");
  }
  TransportMarginals m;
  m.row_mass = Eigen::VectorXd::Ones(point_count + 1);
  m.col_mass = Eigen::VectorXd::Ones(label_count + 1);
  m.row_mass(point_count) = static_cast<double>(label_count);
  m.col_mass(label_count) = static_cast<double>(point_count);
  return m;
}

ConfidenceMatrix sinkhorn_normalize(const Eigen::MatrixXd& augmented_log_scores,
                                    int iterations,
                                    const TransportMarginals& marginals) {
  if (iterations < 1) {
    throw std::invalid_argument("sinkhorn needs at least one iteration");
  }
  check_log_scores(augmented_log_scores);
  const Eigen::Index rows = augmented_log_scores.rows();
  const Eigen::Index cols = augmented_log_scores.cols();
  if (marginals.row_mass.size() != rows || marginals.col_mass.size() != cols) {
    throw std::invalid_argument("marginal sizes do not match score matrix");
  }
  if (marginals.row_mass.minCoeff() <= 0.0 || marginals.col_mass.minCoeff() <= 0.0) {
    throw std::invalid_argument("marginals must be positive");
  }

  const Eigen::VectorXd log_r = marginals.row_mass.array().log();
  const Eigen::VectorXd log_c = marginals.col_mass.array().log();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(cols);

  for (int it = 0; it < iterations; ++it) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      u(i) = log_r(i) - log_sum_exp(augmented_log_scores.row(i).transpose() + v);
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      v(j) = log_c(j) - log_sum_exp(augmented_log_scores.col(j) + u);
    }
  }

  ConfidenceMatrix result;
  result.point_count = static_cast<int>(rows) - 1;
  result.label_count = static_cast<int>(cols) - 1;
  result.scores = ((augmented_log_scores.colwise() + u).rowwise() + v.transpose()).array().exp();
  return result;
}

ConfidenceMatrix sinkhorn_normalize(const Eigen::MatrixXd& augmented_log_scores, int iterations) {
  const int n = static_cast<int>(augmented_log_scores.rows()) - 1;
  const int N = static_cast<int>(augmented_log_scores.cols()) - 1;
  return sinkhorn_normalize(augmented_log_scores, iterations, transport_marginals(n, N));
}

FrameLabeling extract_labels(const ConfidenceMatrix& confidence, double accept_threshold) {
  const int n = confidence.point_count;
  const int N = confidence.label_count;
  if (confidence.scores.rows() != n + 1 || confidence.scores.cols() != N + 1) {
    throw std::invalid_argument("confidence matrix shape disagrees with counts");
  }

  FrameLabeling out;
  out.labels.assign(static_cast<std::size_t>(n), -1);
  out.confidences.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 0) {
    return out;
  }

  struct Candidate {
    double value;
    int point;
    int label;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(N));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < N; ++j) {
      candidates.push_back({confidence.scores(i, j), i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.value, a.point, a.label) < std::tie(a.value, b.point, b.label);
  });

  std::vector<char> point_free(static_cast<std::size_t>(n), 1);
  std::vector<char> label_free(static_cast<std::size_t>(N), 1);
  for (const Candidate& c : candidates) {
    if (c.value < accept_threshold) {
      break; // everything after is smaller; those points stay null
    }
    if (!point_free[static_cast<std::size_t>(c.point)] ||
        !label_free[static_cast<std::size_t>(c.label)]) {
      continue;
    }
    const double row_max = confidence.scores.row(c.point).maxCoeff();
    const double col_max = confidence.scores.col(c.label).maxCoeff();
    if (c.value >= row_max && c.value >= col_max) {
      out.labels[static_cast<std::size_t>(c.point)] = c.label;
      out.confidences[static_cast<std::size_t>(c.point)] = c.value;
      label_free[static_cast<std::size_t>(c.label)] = 0;
    }
    // Either way the point is settled: assigned, or null because its best
    // cell is dominated elsewhere in its row or column.
    point_free[static_cast<std::size_t>(c.point)] = 0;
  }

  for (int i = 0; i < n; ++i) {
    if (out.labels[static_cast<std::size_t>(i)] < 0) {
      out.confidences[static_cast<std::size_t>(i)] = confidence.scores(i, N);
    }
  }
  return out;
}

} // namespace mocap
