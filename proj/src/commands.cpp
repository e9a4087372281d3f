#include "edgepose/commands.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "edgepose/error.hpp"
#include "parallel.hpp"
#include "text_format.hpp"

namespace edgepose {

namespace fs = std::filesystem;

namespace {

bool has_png_extension(const fs::path &p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png";
}

struct PoseWorkItem {
  const ModelPoints *model = nullptr;
  int object_id = 0;
  std::vector<const GroundTruthRecord *> instances;
  std::vector<const EstimateRecord *> estimates;  // best score first
};

// Greedy score-ordered matching of the top-k estimates against instances.
template <typename ErrorFn>
std::size_t count_matches(const PoseWorkItem &item, double threshold,
                          ErrorFn &&error) {
  std::vector<bool> used(item.instances.size(), false);
  std::size_t hits = 0;
  const std::size_t k = std::min(item.instances.size(), item.estimates.size());
  for (std::size_t e = 0; e < k; ++e) {
    std::size_t best = item.instances.size();
    double best_error = threshold;
    for (std::size_t g = 0; g < item.instances.size(); ++g) {
      if (used[g]) continue;
      const double err = error(item.estimates[e]->pose, item.instances[g]->pose);
      if (err < best_error) {
        best_error = err;
        best = g;
      }
    }
    if (best < item.instances.size()) {
      used[best] = true;
      ++hits;
    }
  }
  return hits;
}

}  // namespace

PreprocessSummary cmd_preprocess(const fs::path &input_dir,
                                 const fs::path &output_dir,
                                 const PreprocessOptions &options) {
  if (!fs::is_directory(input_dir)) {
    throw IoError(input_dir.string() + ": input directory not found");
  }
  if (options.low < 0.0 || options.high > 1020.0 || options.low > options.high) {
    throw ParameterError("thresholds must satisfy 0 <= low <= high <= 1020");
  }

  std::vector<fs::path> files;
  for (const auto &entry : fs::recursive_directory_iterator(input_dir)) {
    if (entry.is_regular_file() && has_png_extension(entry.path())) {
      files.push_back(fs::relative(entry.path(), input_dir));
    }
  }
  std::sort(files.begin(), files.end());
  fs::create_directories(output_dir);

  std::vector<std::string> errors(files.size());
  parallel_for(files.size(), options.jobs, [&](std::size_t i) {
    try {
      const Image img = load_png(input_dir / files[i]);
      const EdgeMap edges = canny(img, options.low, options.high, options.canny);
      const Image out = options.method == PreprocessMethod::kCanny
                            ? edge_map_to_image(edges)
                            : composite_rgb_edges(to_rgb(img), edges);
      const fs::path target = output_dir / files[i];
      fs::create_directories(target.parent_path());
      save_png(out, target);
    } catch (const std::exception &e) {
      errors[i] = e.what();
      if (errors[i].empty()) errors[i] = "unknown error";
    }
  });

  PreprocessSummary summary;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (errors[i].empty()) {
      ++summary.processed;
    } else {
      summary.failures.emplace_back(files[i], errors[i]);
    }
  }
  return summary;
}

PoseEvaluation evaluate_poses(const DatasetIndex &dataset,
                              const std::vector<EstimateRecord> &estimates,
                              const PoseEvalOptions &options) {
  if (!(options.threshold_ratio > 0.0)) {
    throw ParameterError("threshold ratio must be positive");
  }
  PoseEvaluation result;

  using GroupKey = std::pair<ImageKey, int>;
  std::map<GroupKey, std::vector<const EstimateRecord *>> by_group;
  for (const auto &est : estimates) {
    if (!dataset.models.contains(est.object_id)) {
      warn("skipping estimate for unknown object " + std::to_string(est.object_id) +
           " (scene " + std::to_string(est.scene_id) + ", image " +
           std::to_string(est.image_id) + ")");
      ++result.skipped_estimates;
      continue;
    }
    by_group[{{est.scene_id, est.image_id}, est.object_id}].push_back(&est);
  }

  std::vector<PoseWorkItem> items;
  bool any_overlap = false;
  for (const auto &[key, records] : dataset.ground_truth) {
    std::map<int, std::vector<const GroundTruthRecord *>> per_object;
    for (const auto &r : records) per_object[r.object_id].push_back(&r);
    for (auto &[obj, instances] : per_object) {
      const auto model_it = dataset.models.find(obj);
      if (model_it == dataset.models.end()) {
        throw ParseError("scene " + std::to_string(key.scene_id) + " image " +
                             std::to_string(key.image_id),
                         "object " + std::to_string(obj) + " has no model");
      }
      PoseWorkItem item;
      item.model = &model_it->second;
      item.object_id = obj;
      item.instances = std::move(instances);
      if (const auto it = by_group.find({key, obj}); it != by_group.end()) {
        item.estimates = it->second;
        std::stable_sort(item.estimates.begin(), item.estimates.end(),
                         [](const EstimateRecord *a, const EstimateRecord *b) {
                           return a->score > b->score;
                         });
        any_overlap = true;
      }
      items.push_back(std::move(item));
    }
  }
  if (items.empty()) throw EmptyInputError("dataset holds no ground-truth instances");
  if (!any_overlap) {
    throw EmptyInputError("no estimate matches any ground-truth (scene, image, object)");
  }

  std::vector<ObjectPoseStats> item_stats(items.size());
  parallel_for(items.size(), options.jobs, [&](std::size_t i) {
    const PoseWorkItem &item = items[i];
    const ModelPoints &model = *item.model;
    const double threshold = options.threshold_ratio * model.diameter;
    const auto add_error = [&](const Pose &est, const Pose &gt) {
      return add(model, est, gt);
    };
    const auto add_s_error = [&](const Pose &est, const Pose &gt) {
      return add_s(model, est, gt, options.search);
    };
    const bool symmetric = options.symmetric_ids.contains(item.object_id);
    const std::size_t n = item.instances.size();
    ObjectPoseStats &s = item_stats[i];
    s.add_s_if_symmetric.total = n;
    s.add_s_if_symmetric.accurate = symmetric ? count_matches(item, threshold, add_s_error)
                                              : count_matches(item, threshold, add_error);
    if (options.report_both) {
      s.add.total = s.add_s.total = n;
      s.add.accurate = count_matches(item, threshold, add_error);
      s.add_s.accurate = count_matches(item, threshold, add_s_error);
    }
  });

  for (std::size_t i = 0; i < items.size(); ++i) {
    ObjectPoseStats &agg = result.per_object[items[i].object_id];
    const ObjectPoseStats &s = item_stats[i];
    agg.add_s_if_symmetric.accurate += s.add_s_if_symmetric.accurate;
    agg.add_s_if_symmetric.total += s.add_s_if_symmetric.total;
    agg.add.accurate += s.add.accurate;
    agg.add.total += s.add.total;
    agg.add_s.accurate += s.add_s.accurate;
    agg.add_s.total += s.add_s.total;
  }
  return result;
}

ReportTable pose_report(const PoseEvaluation &evaluation, bool report_both) {
  std::vector<ReportColumn> columns{{"ADD(-S)", 2, 1.0}};
  if (report_both) {
    columns.push_back({"ADD", 2, 1.0});
    columns.push_back({"ADD-S", 2, 1.0});
  }
  ReportTable table("Object", std::move(columns), "Mean");
  for (const auto &[obj, stats] : evaluation.per_object) {
    std::vector<std::optional<double>> cells{stats.add_s_if_symmetric.recall()};
    if (report_both) {
      cells.push_back(stats.add.recall());
      cells.push_back(stats.add_s.recall());
    }
    table.add_row(std::to_string(obj), std::move(cells));
  }
  return table;
}

ReportTable cmd_eval_pose(const fs::path &dataset_root,
                          const fs::path &estimates_path,
                          const PoseEvalOptions &options) {
  LoadOptions load;
  load.models_dir = options.models_dir;
  load.rotation_tolerance = options.rotation_tolerance;
  const DatasetIndex dataset = load_bop_ground_truth(dataset_root, load);
  const auto estimates = load_pose_estimates(estimates_path, options.rotation_tolerance);
  return pose_report(evaluate_poses(dataset, estimates, options), options.report_both);
}

std::map<int, MatchResult> evaluate_detections(const std::vector<Detection> &ground_truth,
                                               const std::vector<Detection> &predictions,
                                               const DetectEvalOptions &options) {
  if (ground_truth.empty()) throw EmptyInputError("no ground-truth boxes");

  using GroupKey = std::pair<ImageKey, int>;
  struct Group {
    std::vector<BBox> gts;
    std::vector<BBox> preds;
  };
  std::map<GroupKey, Group> groups;
  for (const auto &d : ground_truth) groups[{d.image, d.box.class_id}].gts.push_back(d.box);
  for (const auto &d : predictions) groups[{d.image, d.box.class_id}].preds.push_back(d.box);

  std::vector<const std::pair<const GroupKey, Group> *> order;
  for (const auto &g : groups) order.push_back(&g);
  std::vector<MatchResult> results(order.size());
  parallel_for(order.size(), options.jobs, [&](std::size_t i) {
    const Group &g = order[i]->second;
    results[i] = match_detections(g.preds, g.gts, options.iou_min, options.score_min);
  });

  std::map<int, MatchResult> per_class;
  for (std::size_t i = 0; i < order.size(); ++i) {
    per_class[order[i]->first.second] += results[i];
  }
  return per_class;
}

ReportTable detection_report(const std::map<int, MatchResult> &per_class) {
  ReportTable table("Object", {{"Precision (%)", 1, 100.0}, {"Recall (%)", 1, 100.0}},
                    "Average");
  for (const auto &[cls, m] : per_class) {
    table.add_row(std::to_string(cls), {precision(m), recall(m)});
  }
  return table;
}

ReportTable cmd_eval_detect(const fs::path &gt_path, const fs::path &detections_path,
                            const DetectEvalOptions &options) {
  std::vector<Detection> gts;
  if (fs::is_directory(gt_path)) {
    LoadOptions load;
    load.load_models = false;
    load.rotation_tolerance = options.rotation_tolerance;
    const DatasetIndex dataset = load_bop_ground_truth(gt_path, load);
    for (const auto &[key, records] : dataset.ground_truth) {
      for (const auto &r : records) {
        if (r.bbox) gts.push_back({key, *r.bbox});
      }
    }
  } else {
    gts = load_detections(gt_path);
  }
  const auto preds = load_detections(detections_path);
  return detection_report(evaluate_detections(gts, preds, options));
}

PnPResult cmd_pnp(const fs::path &correspondences_path, const fs::path &intrinsics_path) {
  const auto correspondences = load_correspondences(correspondences_path);
  const CameraIntrinsics K = load_intrinsics(intrinsics_path);
  return solve_pnp(correspondences, K);
}

std::string format_pnp_result(const PnPResult &result, ReportFormat format) {
  const Eigen::Matrix3d &R = result.pose.rotation();
  const Eigen::Vector3d &t = result.pose.translation();
  std::string r_str, t_str;
  for (int i = 0; i < 9; ++i) r_str += (i ? " " : "") + text::format_double(R(i / 3, i % 3));
  for (int i = 0; i < 3; ++i) t_str += (i ? " " : "") + text::format_double(t[i]);
  const std::string rmse = text::format_double(result.reprojection_rmse);
  const std::string cond = text::format_double(result.dlt_condition);
  const std::string converged = result.converged ? "true" : "false";

  if (format == ReportFormat::kCsv) {
    return "R,t,rmse,iterations,converged,dlt_condition\n" + r_str + "," + t_str + "," +
           rmse + "," + std::to_string(result.iterations) + "," + converged + "," + cond +
           "\n";
  }
  return "| Field | Value |\n|:---|:---|\n| R | " + r_str + " |\n| t | " + t_str +
         " |\n| rmse | " + rmse + " |\n| iterations | " +
         std::to_string(result.iterations) + " |\n| converged | " + converged +
         " |\n| dlt_condition | " + cond + " |\n";
}

}  // namespace edgepose
