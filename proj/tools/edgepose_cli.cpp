// edgepose: edge pre-processing and pose/detection evaluation front end.
//
//   edgepose preprocess <input_dir> <output_dir> [--method canny|composite]
//   edgepose eval-pose <dataset_root> <estimates.csv> [--symmetric 1,3]
//   edgepose eval-detect <gt.json|dataset_root> <detections.json>
//   edgepose pnp <correspondences.csv> <intrinsics.json>
//
// Exit codes: 0 success, 1 evaluation or solve failure, 2 usage or parse error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "edgepose/commands.hpp"
#include "edgepose/error.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  std::string format = "md";
  std::string output;
  int jobs = 1;

  edgepose::ReportFormat report_format() const {
    return format == "csv" ? edgepose::ReportFormat::kCsv
                           : edgepose::ReportFormat::kMarkdown;
  }
};

void add_common(CLI::App *cmd, CommonFlags &flags) {
  cmd->add_option("--format", flags.format, "Report format")
      ->check(CLI::IsMember({"md", "csv"}));
  cmd->add_option("--output", flags.output, "Write the report here instead of stdout");
  cmd->add_option("--jobs", flags.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void emit(const CommonFlags &flags, const std::string &text) {
  if (flags.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(flags.output, std::ios::binary | std::ios::trunc);
  if (!out) throw edgepose::IoError(flags.output + ": cannot open for writing");
  out << text;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Edge pre-processing and 6D pose / detection evaluation toolkit"};
  app.require_subcommand(1);

  edgepose::set_warning_sink(
      [](const std::string &msg) { std::cerr << "warning: " << msg << "\n"; });

  // preprocess
  CommonFlags pre_flags;
  std::string pre_in, pre_out, method = "canny", norm = "l2";
  edgepose::PreprocessOptions pre;
  auto *pre_cmd = app.add_subcommand("preprocess", "Canny or RGB+Canny images for a PNG tree");
  pre_cmd->add_option("input_dir", pre_in)->required()->check(CLI::ExistingDirectory);
  pre_cmd->add_option("output_dir", pre_out)->required();
  pre_cmd->add_option("--method", method)->check(CLI::IsMember({"canny", "composite"}));
  pre_cmd->add_option("--low", pre.low, "Lower hysteresis threshold")->check(CLI::Range(0.0, 1020.0));
  pre_cmd->add_option("--high", pre.high, "Upper hysteresis threshold")->check(CLI::Range(0.0, 1020.0));
  pre_cmd->add_option("--norm", norm, "Gradient norm")->check(CLI::IsMember({"l1", "l2"}));
  pre_cmd->add_flag("--blur", pre.canny.pre_blur, "5x5 Gaussian pre-blur");
  add_common(pre_cmd, pre_flags);

  // eval-pose
  CommonFlags pose_flags;
  std::string pose_root, pose_est, pose_models, search = "grid";
  std::vector<int> symmetric;
  edgepose::PoseEvalOptions pose;
  auto *pose_cmd = app.add_subcommand("eval-pose", "ADD(-S) recall per object");
  pose_cmd->add_option("dataset_root", pose_root)->required()->check(CLI::ExistingDirectory);
  pose_cmd->add_option("estimates", pose_est)->required()->check(CLI::ExistingFile);
  pose_cmd->add_option("--threshold", pose.threshold_ratio, "Fraction of the diameter")
      ->check(CLI::PositiveNumber);
  pose_cmd->add_option("--symmetric", symmetric, "Object ids scored with ADD-S")
      ->delimiter(',');
  pose_cmd->add_flag("--both", pose.report_both, "Also report plain ADD and ADD-S");
  pose_cmd->add_option("--models-dir", pose_models, "Defaults to <dataset_root>/models");
  pose_cmd->add_option("--adds-search", search, "Nearest-neighbor search for ADD-S")
      ->check(CLI::IsMember({"grid", "brute"}));
  pose_cmd->add_option("--rotation-tol", pose.rotation_tolerance,
                       "Orthonormality tolerance for input rotations");
  add_common(pose_cmd, pose_flags);

  // eval-detect
  CommonFlags det_flags;
  std::string det_gt, det_pred;
  edgepose::DetectEvalOptions det;
  auto *det_cmd = app.add_subcommand("eval-detect", "Detection precision and recall per object");
  det_cmd->add_option("ground_truth", det_gt)->required()->check(CLI::ExistingPath);
  det_cmd->add_option("detections", det_pred)->required()->check(CLI::ExistingFile);
  det_cmd->add_option("--iou-min", det.iou_min)->check(CLI::Range(0.0, 1.0));
  det_cmd->add_option("--score-min", det.score_min)->check(CLI::Range(0.0, 1.0));
  det_cmd->add_option("--rotation-tol", det.rotation_tolerance);
  add_common(det_cmd, det_flags);

  // pnp
  CommonFlags pnp_flags;
  std::string pnp_corr, pnp_k;
  auto *pnp_cmd = app.add_subcommand("pnp", "Pose from 2D-3D correspondences");
  pnp_cmd->add_option("correspondences", pnp_corr)->required()->check(CLI::ExistingFile);
  pnp_cmd->add_option("intrinsics", pnp_k)->required()->check(CLI::ExistingFile);
  add_common(pnp_cmd, pnp_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*pre_cmd) {
      pre.method = method == "composite" ? edgepose::PreprocessMethod::kComposite
                                         : edgepose::PreprocessMethod::kCanny;
      pre.canny.norm = norm == "l1" ? edgepose::GradientNorm::kL1 : edgepose::GradientNorm::kL2;
      pre.jobs = pre_flags.jobs;
      if (pre.low > pre.high) {
        std::cerr << "error: --low must not exceed --high\n";
        return kExitUsage;
      }
      const auto summary = edgepose::cmd_preprocess(pre_in, pre_out, pre);
      std::string text;
      if (pre_flags.report_format() == edgepose::ReportFormat::kCsv) {
        text = "processed,failed\n" + std::to_string(summary.processed) + "," +
               std::to_string(summary.failures.size()) + "\n";
      } else {
        text = "| Processed | Failed |\n|---:|---:|\n| " + std::to_string(summary.processed) +
               " | " + std::to_string(summary.failures.size()) + " |\n";
      }
      emit(pre_flags, text);
      for (const auto &[path, message] : summary.failures) {
        std::cerr << "failed: " << path.string() << ": " << message << "\n";
      }
      return summary.failures.empty() ? 0 : kExitFailure;
    }
    if (*pose_cmd) {
      pose.symmetric_ids.insert(symmetric.begin(), symmetric.end());
      if (!pose_models.empty()) pose.models_dir = pose_models;
      pose.search = search == "brute" ? edgepose::NearestNeighborSearch::kBruteForce
                                      : edgepose::NearestNeighborSearch::kGrid;
      pose.jobs = pose_flags.jobs;
      const auto table = edgepose::cmd_eval_pose(pose_root, pose_est, pose);
      emit(pose_flags, table.render(pose_flags.report_format()));
      return 0;
    }
    if (*det_cmd) {
      det.jobs = det_flags.jobs;
      const auto table = edgepose::cmd_eval_detect(det_gt, det_pred, det);
      emit(det_flags, table.render(det_flags.report_format()));
      return 0;
    }
    if (*pnp_cmd) {
      const auto result = edgepose::cmd_pnp(pnp_corr, pnp_k);
      emit(pnp_flags, edgepose::format_pnp_result(result, pnp_flags.report_format()));
      if (!result.converged) {
        std::cerr << "error: refinement did not converge within "
                  << result.iterations << " iterations\n";
        return kExitFailure;
      }
      return 0;
    }
  } catch (const edgepose::ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const edgepose::IoError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const edgepose::ParameterError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
