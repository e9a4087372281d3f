#pragma once

#include <compare>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgepose/detect_metrics.hpp"
#include "edgepose/pnp.hpp"
#include "edgepose/pose.hpp"
#include "edgepose/pose_metrics.hpp"

namespace edgepose {

struct ImageKey {
  int scene_id = 0;
  int image_id = 0;
  auto operator<=>(const ImageKey &) const = default;
};

struct GroundTruthRecord {
  int scene_id = 0;
  int image_id = 0;
  int object_id = 0;
  Pose pose;
  std::optional<BBox> bbox;  // bbox_obj from scene_gt_info.json

  bool operator==(const GroundTruthRecord &) const = default;
};

struct EstimateRecord {
  int scene_id = 0;
  int image_id = 0;
  int object_id = 0;
  double score = 1.0;
  Pose pose;
  std::optional<double> time;  // seconds; written as -1 when absent

  bool operator==(const EstimateRecord &) const = default;
};

struct Detection {
  ImageKey image;
  BBox box;  // box.class_id carries category_id
  bool operator==(const Detection &) const = default;
};

// Loaded BOP split. Ground truth keeps file order within each image.
struct DatasetIndex {
  std::filesystem::path root;
  std::map<ImageKey, CameraIntrinsics> cameras;
  std::map<ImageKey, std::vector<GroundTruthRecord>> ground_truth;
  std::map<int, ModelPoints> models;
};

struct LoadOptions {
  // Defaults to <root>/models.
  std::optional<std::filesystem::path> models_dir;
  bool load_models = true;
  double rotation_tolerance = kRotationTolerance;
};

// Receives non-fatal diagnostics (skipped records, diameter cross-checks).
using WarningSink = std::function<void(const std::string &)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string &message);

// Scenes are the numerically named subdirectories of `root` holding a
// scene_gt.json. Poses come from cam_R_m2c (row-major) and cam_t_m2c (mm);
// intrinsics from cam_K (row-major 3x3) in scene_camera.json.
DatasetIndex load_bop_ground_truth(const std::filesystem::path &root,
                                   const LoadOptions &options = {});

// Writes scene_gt.json, scene_camera.json and, when any record has a box,
// scene_gt_info.json under root/<scene:06d>/.
void write_bop_ground_truth(
    const std::filesystem::path &root,
    const std::vector<GroundTruthRecord> &records,
    const std::map<ImageKey, CameraIntrinsics> &cameras);

// ASCII or binary little-endian PLY with float/double vertex x, y, z.
// Diameter is `diameter` when given, else computed from the vertices.
ModelPoints load_ply_model(const std::filesystem::path &path,
                           std::optional<double> diameter = std::nullopt);

enum class PlyEncoding { kAscii, kBinaryLittleEndian };
void write_ply_model(const std::filesystem::path &path,
                     const ModelPoints &model,
                     PlyEncoding encoding = PlyEncoding::kBinaryLittleEndian);

// models_info.json: object id -> diameter (mm).
std::map<int, double> load_models_info(const std::filesystem::path &path);

// Loads every obj_XXXXXX.ply in `dir`; diameters from models_info.json
// take precedence over computed ones.
std::map<int, ModelPoints> load_model_registry(const std::filesystem::path &dir);
void write_model_registry(const std::filesystem::path &dir,
                          const std::map<int, ModelPoints> &models,
                          PlyEncoding encoding = PlyEncoding::kBinaryLittleEndian);

// BOP result CSV: scene_id,im_id,obj_id,score,R,t,time.
std::vector<EstimateRecord> load_pose_estimates(
    const std::filesystem::path &path,
    double rotation_tolerance = kRotationTolerance);
void write_pose_estimates(const std::filesystem::path &path,
                          const std::vector<EstimateRecord> &records);

// JSON array of {scene_id, image_id, category_id, bbox: [x, y, w, h], score}.
// A missing score reads as 1.
std::vector<Detection> load_detections(const std::filesystem::path &path);
void write_detections(const std::filesystem::path &path,
                      const std::vector<Detection> &detections);

// {"fx": .., "fy": .., "cx": .., "cy": ..}
CameraIntrinsics load_intrinsics(const std::filesystem::path &path);
void write_intrinsics(const std::filesystem::path &path,
                      const CameraIntrinsics &K);

// CSV with header x3d,y3d,z3d,u,v.
std::vector<Correspondence> load_correspondences(
    const std::filesystem::path &path);
void write_correspondences(const std::filesystem::path &path,
                           const std::vector<Correspondence> &correspondences);

}  // namespace edgepose
