#pragma once

// Random instance generators and the bundled end-to-end fixture. Test-only.

#include <Eigen/Geometry>
#include <filesystem>
#include <random>
#include <vector>

#include "edgepose/dataset_io.hpp"
#include "edgepose/image.hpp"
#include "edgepose/pnp.hpp"
#include "edgepose/pose.hpp"
#include "edgepose/pose_metrics.hpp"

namespace synth {

using Rng = std::mt19937_64;

inline Eigen::Matrix3d random_rotation(Rng &rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline edgepose::Pose random_pose(Rng &rng, double depth = 1000.0,
                                  double lateral = 100.0) {
  std::uniform_real_distribution<double> u(-lateral, lateral);
  return edgepose::Pose(random_rotation(rng), Eigen::Vector3d(u(rng), u(rng), depth));
}

inline std::vector<Eigen::Vector3d> random_points(Rng &rng, std::size_t n,
                                                  double spread) {
  std::uniform_real_distribution<double> u(-spread / 2, spread / 2);
  std::vector<Eigen::Vector3d> pts;
  for (std::size_t i = 0; i < n; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
  return pts;
}

inline edgepose::Image random_image(Rng &rng, int w, int h, int channels) {
  std::uniform_int_distribution<int> u(0, 255);
  edgepose::Image img(w, h, channels);
  for (auto &v : img.data()) v = static_cast<std::uint8_t>(u(rng));
  return img;
}

// Random blocks on a random background: edges of mixed orientation with
// plateaus, unlike pure noise.
inline edgepose::Image blocky_image(Rng &rng, int w, int h, int channels) {
  std::uniform_int_distribution<int> val(0, 255);
  edgepose::Image img(w, h, channels);
  for (auto &v : img.data()) v = static_cast<std::uint8_t>(val(rng));
  std::uniform_int_distribution<int> xs(0, w - 1), ys(0, h - 1);
  for (int b = 0; b < 4; ++b) {
    const int x0 = xs(rng), y0 = ys(rng), x1 = xs(rng), y1 = ys(rng);
    const int c[3] = {val(rng), val(rng), val(rng)};
    for (int y = std::min(y0, y1); y <= std::max(y0, y1); ++y) {
      for (int x = std::min(x0, x1); x <= std::max(x0, x1); ++x) {
        for (int ch = 0; ch < channels; ++ch) {
          img.at(x, y, ch) = static_cast<std::uint8_t>(c[ch]);
        }
      }
    }
  }
  return img;
}

inline edgepose::CameraIntrinsics default_camera() {
  return {572.4, 573.6, 325.3, 242.0};
}

struct PnPInstance {
  edgepose::Pose pose;
  edgepose::CameraIntrinsics K;
  std::vector<edgepose::Correspondence> correspondences;
};

// n points in a cube of side `spread` mm, object ~`depth` mm from the camera.
inline PnPInstance pnp_instance(Rng &rng, std::size_t n = 10, double spread = 200.0,
                                double depth = 1000.0, double pixel_noise = 0.0) {
  PnPInstance inst;
  inst.K = default_camera();
  inst.pose = random_pose(rng, depth, 50.0);
  std::normal_distribution<double> noise(0.0, pixel_noise > 0 ? pixel_noise : 1.0);
  for (const auto &x : random_points(rng, n, spread)) {
    Eigen::Vector2d uv = edgepose::project(inst.pose, inst.K, x);
    if (pixel_noise > 0) uv += Eigen::Vector2d(noise(rng), noise(rng));
    inst.correspondences.push_back({x, uv});
  }
  return inst;
}

struct FixturePaths {
  std::filesystem::path dataset_root;  // BOP split with models/
  std::filesystem::path images;        // PNG tree for preprocess
  std::filesystem::path estimates;     // BOP result CSV
  std::filesystem::path gt_boxes;      // detection JSON of ground truth
  std::filesystem::path detections;    // predicted boxes
  std::filesystem::path correspondences;
  std::filesystem::path intrinsics;
  edgepose::Pose pnp_pose;             // pose that generated the correspondences
};

// 2 scenes x 3 images, 3 objects per image, random point-cloud models, PNG
// renders with one colored block per object, perturbed estimates and boxes.
FixturePaths write_e2e_fixture(const std::filesystem::path &dir, std::uint64_t seed);

}  // namespace synth
