#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mocap/rng.hpp"
#include "mocap/rotation.hpp"
#include "oracles.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace mocap;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector3d random_unit(Rng& rng) {
  return rng.unit_vector();
}

} // namespace

TEST_CASE("skew matrix acts as the cross product") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector3d a = rng.gaussian_vec3(1.0);
    const Eigen::Vector3d b = rng.gaussian_vec3(1.0);
    CHECK((skew(a) * b - a.cross(b)).norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK((skew(a) + skew(a).transpose()).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("rotation_about_axis matches the analytic 30 degree case") {
  const Eigen::Matrix3d r = rotation_about_axis(Eigen::Vector3d::UnitY(), kPi / 6.0);
  const double c = std::cos(kPi / 6.0);
  const double s = std::sin(kPi / 6.0);
  Eigen::Matrix3d expected;
  expected << c, 0, s, 0, 1, 0, -s, 0, c;
  CHECK((r - expected).norm() < 1e-15);
}

TEST_CASE("rotation_about_axis is orthonormal for random inputs") {
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Matrix3d r = rotation_about_axis(random_unit(rng), rng.uniform(-kPi, kPi));
    CHECK(is_rotation(r, 1e-12));
  }
}

TEST_CASE("swing_from_vectors on aligned vectors is the identity") {
  const Eigen::Matrix3d r =
      swing_from_vectors(Eigen::Vector3d(0, 2, 0), Eigen::Vector3d(0, 0.5, 0));
  CHECK((r - Eigen::Matrix3d::Identity()).norm() < 1e-12);
}

TEST_CASE("swing_from_vectors right-angle fixture") {
  // (1,0,0) -> (0,1,0) is a quarter turn about +z.
  const Eigen::Matrix3d r =
      swing_from_vectors(Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(1, 0, 0));
  Eigen::Matrix3d expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK((r - expected).norm() < 1e-12);
}

TEST_CASE("swing_from_vectors matches the quaternion shortest-arc oracle") {
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    const Eigen::Vector3d tmpl = random_unit(rng) * rng.uniform(0.2, 3.0);
    const Eigen::Vector3d est = random_unit(rng) * rng.uniform(0.2, 3.0);
    if (tmpl.normalized().dot(est.normalized()) < -0.999) {
      continue; // near the fallback branch; covered separately
    }
    const Eigen::Matrix3d r = swing_from_vectors(est, tmpl);
    CHECK(is_rotation(r, 1e-12));
    CHECK((r * tmpl.normalized() - est.normalized()).norm() < 1e-9);
    const Eigen::Matrix3d reference = oracles::shortest_arc(tmpl, est);
    CHECK(oracles::rotation_angle(r, reference) < 1e-9);
  }
}

TEST_CASE("swing_from_vectors anti-parallel fallback is a deterministic half-turn") {
  Rng rng(14);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d tmpl = random_unit(rng);
    const Eigen::Matrix3d r = swing_from_vectors(-tmpl, tmpl);
    const Eigen::Matrix3d again = swing_from_vectors(-tmpl, tmpl);
    CHECK((r - again).norm() == 0.0); // bitwise repeatable
    CHECK(is_rotation(r, 1e-9));
    CHECK((r * tmpl + tmpl).norm() < 1e-9);          // sends the template to its negation
    CHECK((r - r.transpose()).norm() < 1e-9);        // half-turns are symmetric
    CHECK(r.trace() == doctest::Approx(-1.0).epsilon(1e-9));
  }
  // Axis choices for the coordinate directions stay perpendicular to the input.
  for (const Eigen::Vector3d& tmpl :
       {Eigen::Vector3d::UnitX().eval(), Eigen::Vector3d::UnitY().eval(),
        Eigen::Vector3d::UnitZ().eval()}) {
    const Eigen::Matrix3d r = swing_from_vectors(-tmpl, tmpl);
    CHECK((r * tmpl + tmpl).norm() < 1e-12);
  }
}

TEST_CASE("swing_from_vectors rejects zero-length bones") {
  CHECK_THROWS_WITH_AS(swing_from_vectors(Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitX()),
                       "degenerate bone", std::invalid_argument);
  CHECK_THROWS_WITH_AS(swing_from_vectors(Eigen::Vector3d::UnitX(), Eigen::Vector3d::Zero()),
                       "degenerate bone", std::invalid_argument);
}

TEST_CASE("swing_twist_decompose separates a pure twist") {
  const Eigen::Vector3d axis = Eigen::Vector3d::UnitY();
  const SwingTwist st = swing_twist_decompose(rotation_about_axis(axis, kPi / 6.0), axis);
  CHECK((st.swing - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  CHECK(st.twist_angle == doctest::Approx(kPi / 6.0).epsilon(1e-12));
  CHECK_FALSE(st.singular);
}

TEST_CASE("swing_twist_decompose separates a pure swing") {
  const Eigen::Matrix3d rotation = rotation_about_axis(Eigen::Vector3d::UnitZ(), kPi / 4.0);
  const SwingTwist st = swing_twist_decompose(rotation, Eigen::Vector3d::UnitY());
  CHECK(std::abs(st.twist_angle) < 1e-12);
  CHECK((st.swing - rotation).norm() < 1e-12);
}

TEST_CASE("swing_twist_decompose round-trips random rotations") {
  Rng rng(15);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Matrix3d rotation = oracles::random_rotation(rng);
    const Eigen::Vector3d axis = random_unit(rng);
    const SwingTwist st = swing_twist_decompose(rotation, axis);
    CHECK((st.compose() - rotation).norm() < 1e-9);
    CHECK(st.twist_angle > -kPi);
    CHECK(st.twist_angle <= kPi);
    CHECK(is_rotation(st.swing, 1e-9));
    // The swing must not rotate about the bone axis: its twist about the same
    // axis is zero.
    const SwingTwist swing_only = swing_twist_decompose(st.swing, axis);
    CHECK(std::abs(swing_only.twist_angle) < 1e-9);
  }
}

TEST_CASE("swing_twist_decompose flags the half-turn singularity") {
  // A half-turn about x sends +y to -y: the swing for axis y is a half-turn,
  // where the twist is unobservable.
  const Eigen::Matrix3d rotation = rotation_about_axis(Eigen::Vector3d::UnitX(), kPi);
  const SwingTwist st = swing_twist_decompose(rotation, Eigen::Vector3d::UnitY());
  CHECK(st.singular);
  CHECK(st.twist_angle == 0.0);
  CHECK((st.compose() - rotation).norm() < 1e-9);
}

TEST_CASE("kabsch_rotation recovers identity and known rotations") {
  Rng rng(16);
  std::vector<Eigen::Vector3d> source;
  for (int i = 0; i < 6; ++i) {
    source.push_back(rng.gaussian_vec3(1.0));
  }
  CHECK(oracles::rotation_angle(kabsch_rotation(source, source),
                                Eigen::Matrix3d::Identity()) < 1e-9);

  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Matrix3d q = oracles::random_rotation(rng);
    std::vector<Eigen::Vector3d> target;
    for (const Eigen::Vector3d& p : source) {
      target.push_back(q * p);
    }
    CHECK(oracles::rotation_angle(kabsch_rotation(source, target), q) < 1e-9);
  }
}

TEST_CASE("kabsch_rotation ignores a common translation") {
  Rng rng(17);
  std::vector<Eigen::Vector3d> source;
  for (int i = 0; i < 5; ++i) {
    source.push_back(rng.gaussian_vec3(1.0));
  }
  const Eigen::Matrix3d q = oracles::random_rotation(rng);
  const Eigen::Vector3d shift_s(4.0, -2.0, 9.0);
  const Eigen::Vector3d shift_t(-1.0, 0.5, 2.0);
  std::vector<Eigen::Vector3d> moved_source;
  std::vector<Eigen::Vector3d> moved_target;
  for (const Eigen::Vector3d& p : source) {
    moved_source.push_back(p + shift_s);
    moved_target.push_back(q * p + shift_t);
  }
  CHECK(oracles::rotation_angle(kabsch_rotation(moved_source, moved_target), q) < 1e-9);
}

TEST_CASE("kabsch_rotation on a jittered cloud stays within a degree and beats the 0.1 degree "
          "grid around the truth") {
  Rng rng(18);
  const Eigen::Matrix3d q = oracles::random_rotation(rng);
  std::vector<Eigen::Vector3d> source;
  std::vector<Eigen::Vector3d> target;
  for (int i = 0; i < 10; ++i) {
    const Eigen::Vector3d p = rng.gaussian_vec3(0.5); // ~1 m extent
    source.push_back(p);
    target.push_back(q * p + rng.gaussian_vec3(0.001)); // 1 mm jitter
  }
  const Eigen::Matrix3d solved = kabsch_rotation(source, target);
  CHECK(oracles::rotation_angle(solved, q) < kPi / 180.0);

  auto cost = [&](const Eigen::Matrix3d& r) {
    Eigen::Vector3d sc = Eigen::Vector3d::Zero();
    Eigen::Vector3d tc = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < source.size(); ++i) {
      sc += source[i];
      tc += target[i];
    }
    sc /= static_cast<double>(source.size());
    tc /= static_cast<double>(target.size());
    double total = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i) {
      total += (r * (source[i] - sc) - (target[i] - tc)).squaredNorm();
    }
    return total;
  };
  // The SVD solution is the continuous optimum, so no rotation on a 0.1
  // degree grid spanning +/-2 degrees around the truth may do better.
  const double step = 0.1 * kPi / 180.0;
  const Eigen::Matrix3d grid_best = oracles::grid_search_rotation(q, 2.0 * kPi / 180.0, step, cost);
  CHECK(cost(solved) <= cost(grid_best) + 1e-12);
}

TEST_CASE("kabsch_rotation reports degenerate configurations") {
  std::vector<Eigen::Vector3d> line = {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0),
                                       Eigen::Vector3d(2, 0, 0), Eigen::Vector3d(3, 0, 0)};
  CHECK_THROWS_WITH_AS(kabsch_rotation(line, line), "rank deficient", std::invalid_argument);

  std::vector<Eigen::Vector3d> pair = {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0)};
  CHECK_THROWS_AS(kabsch_rotation(pair, pair), std::invalid_argument);

  std::vector<Eigen::Vector3d> mismatched = {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0),
                                             Eigen::Vector3d(0, 1, 0)};
  std::vector<Eigen::Vector3d> three = mismatched;
  mismatched.pop_back();
  CHECK_THROWS_AS(kabsch_rotation(mismatched, three), std::invalid_argument);
}

TEST_CASE("kabsch_rotation accepts planar (rank-2) configurations") {
  Rng rng(19);
  const Eigen::Matrix3d q = oracles::random_rotation(rng);
  std::vector<Eigen::Vector3d> source;
  std::vector<Eigen::Vector3d> target;
  for (int i = 0; i < 5; ++i) {
    const Eigen::Vector3d p(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), 0.0);
    source.push_back(p);
    target.push_back(q * p);
  }
  CHECK(oracles::rotation_angle(kabsch_rotation(source, target), q) < 1e-9);
}

TEST_CASE("geodesic_angle fixtures and oracle agreement") {
  const Eigen::Matrix3d i = Eigen::Matrix3d::Identity();
  CHECK(geodesic_angle(i, i) == 0.0);
  CHECK(geodesic_angle(i, rotation_about_axis(Eigen::Vector3d::UnitX(), kPi / 2.0)) ==
        doctest::Approx(kPi / 2.0).epsilon(1e-12));

  Rng rng(20);
  for (int k = 0; k < 500; ++k) {
    const Eigen::Matrix3d a = oracles::random_rotation(rng);
    const Eigen::Matrix3d b = oracles::random_rotation(rng);
    CHECK(std::abs(geodesic_angle(a, b) - oracles::rotation_angle(a, b)) < 1e-9);
  }
}

TEST_CASE("geodesic_angle keeps precision near zero") {
  const Eigen::Vector3d axis = Eigen::Vector3d(1, 2, 3).normalized();
  for (double angle : {1e-6, 1e-8, 1e-10}) {
    const Eigen::Matrix3d r = rotation_about_axis(axis, angle);
    CHECK(geodesic_angle(Eigen::Matrix3d::Identity(), r) ==
          doctest::Approx(angle).epsilon(1e-6));
  }
}

TEST_CASE("is_rotation rejects non-rotations") {
  CHECK(is_rotation(Eigen::Matrix3d::Identity()));
  Eigen::Matrix3d reflection = Eigen::Matrix3d::Identity();
  reflection(0, 0) = -1.0;
  CHECK_FALSE(is_rotation(reflection));
  CHECK_FALSE(is_rotation(Eigen::Matrix3d::Identity() * 2.0));
}
