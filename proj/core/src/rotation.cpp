#include "mocap/rotation.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mocap {

namespace {

constexpr double kDegenerateBoneNorm = 1e-12;
constexpr double kAntiParallelTol = 1e-7;
constexpr double kTwistSingularityTol = 1e-9;

// Unit vector perpendicular to t, built from the smallest-index nonzero
// component of t so the anti-parallel fallback is deterministic.
Eigen::Vector3d perpendicular_axis(const Eigen::Vector3d& t) {
  int i = 0;
  while (i < 3 && t[i] == 0.0) {
    ++i;
  }
  const int j = (i + 1) % 3;
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  v[i] = -t[j];
  v[j] = t[i];
  return v.normalized();
}

} // namespace

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

Eigen::Matrix3d rotation_about_axis(const Eigen::Vector3d& unit_axis, double angle) {
  const Eigen::Matrix3d k = skew(unit_axis);
  return Eigen::Matrix3d::Identity() + std::sin(angle) * k +
         (1.0 - std::cos(angle)) * k * k;
}

Eigen::Matrix3d SwingTwist::compose() const {
  return swing * rotation_about_axis(axis, twist_angle);
}

Eigen::Matrix3d swing_from_vectors(const Eigen::Vector3d& estimated_dir,
                                   const Eigen::Vector3d& template_dir) {
  const double est_norm = estimated_dir.norm();
  const double tmpl_norm = template_dir.norm();
  if (est_norm < kDegenerateBoneNorm || tmpl_norm < kDegenerateBoneNorm) {
    throw std::invalid_argument("degenerate bone");
  }
  const Eigen::Vector3d j = estimated_dir / est_norm;
  const Eigen::Vector3d t = template_dir / tmpl_norm;

  const Eigen::Vector3d cross = t.cross(j);
  const double sin_a = cross.norm();
  const double cos_a = t.dot(j);
  if (sin_a < kAntiParallelTol && cos_a < 0.0) {
    return rotation_about_axis(perpendicular_axis(t), std::numbers::pi);
  }
  if (sin_a < kDegenerateBoneNorm) {
    return Eigen::Matrix3d::Identity();
  }
  const Eigen::Vector3d n = cross / sin_a;
  const Eigen::Matrix3d nx = skew(n);
  return Eigen::Matrix3d::Identity() + sin_a * nx + (1.0 - cos_a) * nx * nx;
}

SwingTwist swing_twist_decompose(const Eigen::Matrix3d& rotation,
                                 const Eigen::Vector3d& axis) {
  const Eigen::Quaterniond q(rotation);
  double w = q.w();
  double proj = q.vec().dot(axis);

  SwingTwist result;
  result.axis = axis;
  const double norm = std::hypot(w, proj);
  if (norm < kTwistSingularityTol) {
    // Half-turn about an axis perpendicular to `axis`: twist is unobservable.
    result.swing = rotation;
    result.twist_angle = 0.0;
    result.singular = true;
    return result;
  }
  w /= norm;
  proj /= norm;
  if (w < 0.0) {
    w = -w;
    proj = -proj;
  }
  double angle = 2.0 * std::atan2(proj, w);
  if (angle <= -std::numbers::pi) {
    angle += 2.0 * std::numbers::pi;
  }
  result.twist_angle = angle;
  result.swing = rotation * rotation_about_axis(axis, -angle);
  return result;
}

Eigen::Matrix3d kabsch_rotation(std::span<const Eigen::Vector3d> source,
                                std::span<const Eigen::Vector3d> target) {
  if (source.size() != target.size()) {
    throw std::invalid_argument("point counts differ");
  }
  if (source.size() < 3) {
    throw std::invalid_argument("rank deficient");
  }
  const auto count = static_cast<double>(source.size());
  Eigen::Vector3d src_centroid = Eigen::Vector3d::Zero();
  Eigen::Vector3d tgt_centroid = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < source.size(); ++i) {
    src_centroid += source[i];
    tgt_centroid += target[i];
  }
  src_centroid /= count;
  tgt_centroid /= count;

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < source.size(); ++i) {
    cov += (source[i] - src_centroid) * (target[i] - tgt_centroid).transpose();
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  if (!(sv(1) > sv(0) * 1e-9)) {
    throw std::invalid_argument("rank deficient");
  }
  const Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  const double d = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return v * Eigen::Vector3d(1.0, 1.0, d).asDiagonal() * u.transpose();
}

double geodesic_angle(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  // atan2 of the quaternion halves keeps full precision near 0 and pi,
  // where the acos-of-trace form loses digits
  const Eigen::Quaterniond q(Eigen::Matrix3d(a.transpose() * b));
  return 2.0 * std::atan2(q.vec().norm(), std::abs(q.w()));
}

bool is_rotation(const Eigen::Matrix3d& m, double tol) {
  if (!m.allFinite()) {
    return false;
  }
  const double ortho = (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

} // namespace mocap
