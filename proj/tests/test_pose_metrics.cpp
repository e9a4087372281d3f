#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "edgepose/error.hpp"
#include "edgepose/pose.hpp"
#include "edgepose/pose_metrics.hpp"
#include "support/synthetic.hpp"

using namespace edgepose;

namespace {

ModelPoints make_model(std::vector<Eigen::Vector3d> pts, double diameter = 100.0) {
  ModelPoints m;
  m.points = std::move(pts);
  m.diameter = diameter;
  return m;
}

Pose rot_z(double angle) {
  return Pose(Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix(),
              Eigen::Vector3d::Zero());
}

// Independent double loops.
double naive_add(const ModelPoints &m, const Pose &e, const Pose &g) {
  double sum = 0;
  for (const auto &x : m.points) {
    const Eigen::Vector3d a = e.rotation() * x + e.translation();
    const Eigen::Vector3d b = g.rotation() * x + g.translation();
    sum += std::sqrt((a - b).squaredNorm());
  }
  return sum / static_cast<double>(m.points.size());
}

double naive_add_s(const ModelPoints &m, const Pose &e, const Pose &g) {
  double sum = 0;
  for (const auto &x : m.points) {
    const Eigen::Vector3d b = g.rotation() * x + g.translation();
    double best = INFINITY;
    for (const auto &y : m.points) {
      const Eigen::Vector3d a = e.rotation() * y + e.translation();
      best = std::min(best, (a - b).norm());
    }
    sum += best;
  }
  return sum / static_cast<double>(m.points.size());
}

}  // namespace

TEST_CASE("pose validation") {
  CHECK_NOTHROW(Pose(Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero()));
  Eigen::Matrix3d reflect = Eigen::Matrix3d::Identity();
  reflect(2, 2) = -1;
  CHECK_THROWS_AS(Pose(reflect, Eigen::Vector3d::Zero()), ParameterError);
  Eigen::Matrix3d scaled = 1.001 * Eigen::Matrix3d::Identity();
  CHECK_THROWS_AS(Pose(scaled, Eigen::Vector3d::Zero()), ParameterError);
  CHECK_NOTHROW(Pose(scaled, Eigen::Vector3d::Zero(), 1e-2));
  CHECK_THROWS_AS(Pose(Eigen::Matrix3d::Identity(), Eigen::Vector3d(NAN, 0, 0)),
                  ParameterError);
}

TEST_CASE("pose composition and inverse") {
  synth::Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const Pose a = synth::random_pose(rng), b = synth::random_pose(rng);
    const Eigen::Vector3d x(1, 2, 3);
    CHECK((a * b).apply(x).isApprox(a.apply(b.apply(x)), 1e-12));
    CHECK((a * a.inverse()).apply(x).isApprox(x, 1e-9));
    CHECK(is_rotation((a * b).rotation(), 1e-9));
  }
}

TEST_CASE("exp_so3 and rotation angles") {
  CHECK(exp_so3(Eigen::Vector3d::Zero()).isApprox(Eigen::Matrix3d::Identity()));
  const Eigen::Vector3d w(0.3, -0.2, 0.5);
  const Eigen::Matrix3d R = exp_so3(w);
  CHECK(R.isApprox(Eigen::AngleAxisd(w.norm(), w.normalized()).toRotationMatrix(), 1e-14));
  CHECK(rotation_angle_between(Eigen::Matrix3d::Identity(), R) ==
        doctest::Approx(w.norm()).epsilon(1e-12));
  const Eigen::Vector3d tiny(1e-9, 2e-9, -1e-9);
  CHECK(is_rotation(exp_so3(tiny)));
  Eigen::Matrix3d noisy = R;
  noisy(0, 1) += 1e-3;
  CHECK(is_rotation(closest_rotation(noisy)));
  CHECK(closest_rotation(R).isApprox(R, 1e-12));
}

TEST_CASE("add analytic cases") {
  synth::Rng rng(2);
  const ModelPoints model = make_model(synth::random_points(rng, 30, 100));
  const Pose gt = synth::random_pose(rng);
  CHECK(add(model, gt, gt) == 0.0);

  const Pose shifted(gt.rotation(), gt.translation() + Eigen::Vector3d(3, 0, 0));
  CHECK(add(model, shifted, gt) == doctest::Approx(3.0).epsilon(1e-12));

  const ModelPoints single = make_model({{1, 0, 0}});
  CHECK(std::abs(add(single, rot_z(std::numbers::pi / 2), Pose()) - std::sqrt(2.0)) < 1e-12);

  CHECK_THROWS_AS(add(make_model({}), gt, gt), EmptyInputError);
  CHECK_THROWS_AS(add_s(make_model({}), gt, gt), EmptyInputError);
}

TEST_CASE("add_s symmetric pair") {
  const ModelPoints pair = make_model({{1, 0, 0}, {-1, 0, 0}});
  const Pose flip = rot_z(std::numbers::pi);
  CHECK(add_s(pair, flip, Pose()) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(add(pair, flip, Pose()) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("add and add_s against naive loops, with invariants") {
  synth::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const ModelPoints model = make_model(synth::random_points(rng, 40, 100));
    const Pose gt = synth::random_pose(rng);
    const Pose est = synth::random_pose(rng, 1000.0, 150.0);
    const double a = add(model, est, gt);
    const double s = add_s(model, est, gt);
    CHECK(a == doctest::Approx(naive_add(model, est, gt)).epsilon(1e-12));
    CHECK(s == doctest::Approx(naive_add_s(model, est, gt)).epsilon(1e-12));
    CHECK(s <= a);
    CHECK(add(model, gt, est) == doctest::Approx(a).epsilon(1e-12));
    const Pose iso = synth::random_pose(rng);
    CHECK(std::abs(add(model, iso * est, iso * gt) - a) < 1e-9);
    CHECK(add_s(model, est, gt, NearestNeighborSearch::kGrid) == s);
  }
}

TEST_CASE("single point: add_s equals add") {
  synth::Rng rng(4);
  const ModelPoints one = make_model(synth::random_points(rng, 1, 100));
  const Pose a = synth::random_pose(rng), b = synth::random_pose(rng);
  CHECK(add_s(one, a, b) == add(one, a, b));
}

TEST_CASE("grid search is exact on large and degenerate clouds") {
  synth::Rng rng(5);
  ModelPoints big = make_model(synth::random_points(rng, 3000, 150));
  const Pose gt = synth::random_pose(rng), est = synth::random_pose(rng, 1000, 120);
  CHECK(add_s(big, est, gt, NearestNeighborSearch::kGrid) ==
        add_s(big, est, gt, NearestNeighborSearch::kBruteForce));

  // Planar and collinear clouds, plus duplicate points.
  std::vector<Eigen::Vector3d> plane, line;
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 300; ++i) {
    plane.emplace_back(u(rng), u(rng), 0.0);
    line.emplace_back(u(rng), 0.0, 0.0);
  }
  line.push_back(line.front());
  for (auto pts : {plane, line}) {
    const ModelPoints m = make_model(pts);
    CHECK(add_s(m, est, gt, NearestNeighborSearch::kGrid) ==
          add_s(m, est, gt, NearestNeighborSearch::kBruteForce));
  }
}

TEST_CASE("score_pose threshold is strict") {
  const ModelPoints single = make_model({{0, 0, 0}}, 100.0);
  const Pose gt;
  const Pose at10(Eigen::Matrix3d::Identity(), Eigen::Vector3d(10.0, 0, 0));
  const Pose at999(Eigen::Matrix3d::Identity(), Eigen::Vector3d(9.99, 0, 0));
  CHECK(score_pose(single, gt, gt).accurate);
  const PoseScore s10 = score_pose(single, at10, gt);
  CHECK(s10.add_value == 10.0);
  CHECK_FALSE(s10.accurate);
  CHECK(score_pose(single, at999, gt).accurate);

  ModelPoints sym = make_model({{1, 0, 0}, {-1, 0, 0}}, 2.0);
  sym.symmetric = true;
  CHECK(score_pose(sym, rot_z(std::numbers::pi), Pose()).accurate);
  sym.symmetric = false;
  CHECK_FALSE(score_pose(sym, rot_z(std::numbers::pi), Pose()).accurate);

  CHECK_THROWS_AS(score_pose(single, gt, gt, 0.0), ParameterError);
  ModelPoints bad = single;
  bad.diameter = 0.0;
  CHECK_THROWS_AS(score_pose(bad, gt, gt), ParameterError);
}

TEST_CASE("add_recall") {
  std::vector<PoseScore> scores(100);
  for (int i = 0; i < 27; ++i) scores[i].accurate = true;
  CHECK(add_recall(scores) == 0.27);
  std::vector<PoseScore> all(5, PoseScore{0.0, true});
  CHECK(add_recall(all) == 1.0);
  std::vector<PoseScore> none(5);
  CHECK(add_recall(none) == 0.0);
  CHECK_THROWS_AS(add_recall(std::vector<PoseScore>{}), EmptyInputError);

  // Concatenation gives the weighted mean of the parts.
  std::vector<PoseScore> joined = scores;
  joined.insert(joined.end(), all.begin(), all.end());
  CHECK(add_recall(joined) ==
        doctest::Approx((0.27 * 100 + 1.0 * 5) / 105.0).epsilon(1e-15));
}

TEST_CASE("model_diameter") {
  const std::vector<Eigen::Vector3d> two = {{0, 0, 0}, {1, 0, 0}};
  CHECK(model_diameter(two) == 1.0);
  std::vector<Eigen::Vector3d> cube;
  for (int i = 0; i < 8; ++i) cube.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  CHECK(model_diameter(cube) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(model_diameter(std::vector<Eigen::Vector3d>{{0, 0, 0}}),
                  EmptyInputError);

  synth::Rng rng(6);
  const auto pts = synth::random_points(rng, 50, 100);
  double best = 0;
  for (const auto &a : pts)
    for (const auto &b : pts) best = std::max(best, (a - b).norm());
  CHECK(model_diameter(pts) == doctest::Approx(best).epsilon(1e-15));
}
