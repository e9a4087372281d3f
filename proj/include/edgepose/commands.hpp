#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "edgepose/dataset_io.hpp"
#include "edgepose/image.hpp"
#include "edgepose/pnp.hpp"
#include "edgepose/pose_metrics.hpp"
#include "edgepose/report.hpp"

namespace edgepose {

// ---- preprocess -----------------------------------------------------------

enum class PreprocessMethod { kCanny, kComposite };

struct PreprocessOptions {
  PreprocessMethod method = PreprocessMethod::kCanny;
  double low = 100.0;
  double high = 200.0;
  CannyOptions canny;
  int jobs = 1;
};

struct PreprocessSummary {
  std::size_t processed = 0;
  // Relative input path and error message, in path order.
  std::vector<std::pair<std::filesystem::path, std::string>> failures;
};

// Transforms every *.png under input_dir (recursively) into output_dir at the
// same relative path. Canny writes a 0/255 gray edge image; composite writes
// the color image with white edges (gray inputs are promoted to RGB).
// Per-file failures are collected and do not stop the batch.
PreprocessSummary cmd_preprocess(const std::filesystem::path &input_dir,
                                 const std::filesystem::path &output_dir,
                                 const PreprocessOptions &options = {});

// ---- eval-pose ------------------------------------------------------------

struct PoseEvalOptions {
  double threshold_ratio = 0.1;
  std::set<int> symmetric_ids;
  // Adds separate ADD and ADD-S columns next to ADD(-S).
  bool report_both = false;
  NearestNeighborSearch search = NearestNeighborSearch::kGrid;
  std::optional<std::filesystem::path> models_dir;
  double rotation_tolerance = kRotationTolerance;
  int jobs = 1;
};

struct RecallTally {
  std::size_t accurate = 0;
  std::size_t total = 0;
  double recall() const {
    return total ? static_cast<double>(accurate) / static_cast<double>(total) : 0.0;
  }
};

struct ObjectPoseStats {
  RecallTally add_s_if_symmetric;  // ADD-S for symmetric objects, ADD otherwise
  RecallTally add;
  RecallTally add_s;
};

struct PoseEvaluation {
  std::map<int, ObjectPoseStats> per_object;
  std::size_t skipped_estimates = 0;
};

// Scores estimates against every ground-truth instance in the dataset. Per
// (scene, image, object) the k best-scoring estimates (k = number of
// instances) are matched greedily, by score, to the unmatched instance with
// the smallest error under the threshold. Missing estimates count as misses.
PoseEvaluation evaluate_poses(const DatasetIndex &dataset,
                              const std::vector<EstimateRecord> &estimates,
                              const PoseEvalOptions &options = {});

ReportTable pose_report(const PoseEvaluation &evaluation, bool report_both);

ReportTable cmd_eval_pose(const std::filesystem::path &dataset_root,
                          const std::filesystem::path &estimates_path,
                          const PoseEvalOptions &options = {});

// ---- eval-detect ----------------------------------------------------------

struct DetectEvalOptions {
  double iou_min = 0.5;
  double score_min = 0.0;
  double rotation_tolerance = kRotationTolerance;
  int jobs = 1;
};

// Per class, TP/FP/FN summed over images.
std::map<int, MatchResult> evaluate_detections(
    const std::vector<Detection> &ground_truth,
    const std::vector<Detection> &predictions,
    const DetectEvalOptions &options = {});

ReportTable detection_report(const std::map<int, MatchResult> &per_class);

// gt_path is either a detection JSON file (scores ignored) or a BOP split
// directory whose scene_gt_info.json files carry bbox_obj.
ReportTable cmd_eval_detect(const std::filesystem::path &gt_path,
                            const std::filesystem::path &detections_path,
                            const DetectEvalOptions &options = {});

// ---- pnp ------------------------------------------------------------------

PnPResult cmd_pnp(const std::filesystem::path &correspondences_path,
                  const std::filesystem::path &intrinsics_path);

// R as 9 row-major values, t as 3 values (mm), then rmse and solver status.
std::string format_pnp_result(const PnPResult &result, ReportFormat format);

}  // namespace edgepose
