#include <algorithm>
#include <mutex>
#include <nlohmann/json.hpp>
#include <string>

#include "edgepose/dataset_io.hpp"
#include "edgepose/error.hpp"
#include "text_format.hpp"

namespace edgepose {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::mutex g_sink_mutex;
WarningSink g_sink;

json parse_json_file(const fs::path &path) {
  const std::string contents = text::read_file(path);
  try {
    return json::parse(contents);
  } catch (const json::parse_error &e) {
    throw ParseError(path.string(), std::string("invalid JSON: ") + e.what());
  }
}

std::vector<double> number_array(const json &j, std::size_t expected,
                                 const std::string &where, const char *field) {
  if (!j.contains(field)) {
    throw ParseError(where, std::string("missing field '") + field + "'");
  }
  const json &arr = j.at(field);
  if (!arr.is_array() || arr.size() != expected) {
    throw ParseError(where, std::string("'") + field + "' must be an array of " +
                                std::to_string(expected) + " numbers");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const json &v : arr) {
    if (!v.is_number()) {
      throw ParseError(where, std::string("'") + field + "' holds a non-number");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

int parse_key(const std::string &key, const std::string &where) {
  const auto v = text::parse_int(key);
  if (!v) throw ParseError(where, "image key '" + key + "' is not an integer");
  return static_cast<int>(*v);
}

std::string scene_dir_name(int scene_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06d", scene_id);
  return buf;
}

std::string context(const fs::path &file, int scene, int image, std::size_t k) {
  return file.string() + ": scene " + std::to_string(scene) + " image " +
         std::to_string(image) + " record " + std::to_string(k);
}

}  // namespace

void set_warning_sink(WarningSink sink) {
  std::lock_guard lock(g_sink_mutex);
  g_sink = std::move(sink);
}

void warn(const std::string &message) {
  std::lock_guard lock(g_sink_mutex);
  if (g_sink) g_sink(message);
}

std::map<int, double> load_models_info(const fs::path &path) {
  const json j = parse_json_file(path);
  if (!j.is_object()) throw ParseError(path.string(), "expected a JSON object");
  std::map<int, double> out;
  for (const auto &[key, entry] : j.items()) {
    const std::string where = path.string() + ": object " + key;
    const int id = parse_key(key, where);
    if (!entry.is_object() || !entry.contains("diameter") ||
        !entry.at("diameter").is_number()) {
      throw ParseError(where, "missing numeric 'diameter'");
    }
    const double d = entry.at("diameter").get<double>();
    if (!(d > 0.0)) throw ParseError(where, "diameter must be positive");
    out[id] = d;
  }
  return out;
}

std::map<int, ModelPoints> load_model_registry(const fs::path &dir) {
  if (!fs::is_directory(dir)) {
    throw IoError(dir.string() + ": models directory not found");
  }
  std::map<int, double> info;
  const fs::path info_path = dir / "models_info.json";
  if (fs::exists(info_path)) info = load_models_info(info_path);

  std::map<int, ModelPoints> models;
  for (const auto &entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (!entry.is_regular_file() || name.rfind("obj_", 0) != 0 ||
        entry.path().extension() != ".ply") {
      continue;
    }
    const auto id = text::parse_int(entry.path().stem().string().substr(4));
    if (!id) continue;
    const int obj = static_cast<int>(*id);
    const auto it = info.find(obj);
    if (it == info.end()) {
      models[obj] = load_ply_model(entry.path());
      continue;
    }
    ModelPoints model = load_ply_model(entry.path(), it->second);
    // Cross-check against the vertices when that is affordable.
    if (model.points.size() >= 2 && model.points.size() <= 5000) {
      const double computed = model_diameter(model.points);
      if (std::abs(computed - it->second) > 0.01 * it->second) {
        warn("object " + std::to_string(obj) + ": models_info diameter " +
             text::format_double(it->second) + " differs from computed " +
             text::format_double(computed));
      }
    }
    models[obj] = std::move(model);
  }
  return models;
}

void write_model_registry(const fs::path &dir,
                          const std::map<int, ModelPoints> &models,
                          PlyEncoding encoding) {
  nlohmann::ordered_json info = nlohmann::ordered_json::object();
  for (const auto &[id, model] : models) {
    char name[32];
    std::snprintf(name, sizeof(name), "obj_%06d.ply", id);
    write_ply_model(dir / name, model, encoding);
    info[std::to_string(id)] = {{"diameter", model.diameter}};
  }
  text::write_file(dir / "models_info.json", info.dump(2) + "\n");
}

DatasetIndex load_bop_ground_truth(const fs::path &root,
                                   const LoadOptions &options) {
  if (!fs::is_directory(root)) {
    throw IoError(root.string() + ": dataset root not found");
  }
  DatasetIndex index;
  index.root = root;

  std::vector<std::pair<int, fs::path>> scenes;
  for (const auto &entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const auto id = text::parse_int(entry.path().filename().string());
    if (!id || !fs::exists(entry.path() / "scene_gt.json")) continue;
    scenes.emplace_back(static_cast<int>(*id), entry.path());
  }
  std::sort(scenes.begin(), scenes.end());
  if (scenes.empty()) {
    throw IoError(root.string() + ": no scene directories with scene_gt.json");
  }

  for (const auto &[scene_id, dir] : scenes) {
    const fs::path gt_path = dir / "scene_gt.json";
    const fs::path cam_path = dir / "scene_camera.json";
    if (!fs::exists(cam_path)) {
      throw IoError(cam_path.string() + ": missing scene_camera.json");
    }

    const json cams = parse_json_file(cam_path);
    if (!cams.is_object()) throw ParseError(cam_path.string(), "expected an object");
    for (const auto &[key, cam] : cams.items()) {
      const std::string where = cam_path.string() + ": scene " +
                                std::to_string(scene_id) + " image " + key;
      const int image_id = parse_key(key, where);
      const auto k = number_array(cam, 9, where, "cam_K");
      CameraIntrinsics K{k[0], k[4], k[2], k[5]};
      try {
        K.validate();
      } catch (const ParameterError &e) {
        throw ParseError(where, e.what());
      }
      index.cameras[{scene_id, image_id}] = K;
    }

    json info;
    const fs::path info_path = dir / "scene_gt_info.json";
    if (fs::exists(info_path)) info = parse_json_file(info_path);

    const json gts = parse_json_file(gt_path);
    if (!gts.is_object()) throw ParseError(gt_path.string(), "expected an object");
    std::vector<std::pair<int, const json *>> images;
    for (const auto &[key, list] : gts.items()) {
      images.emplace_back(
          parse_key(key, gt_path.string() + ": scene " + std::to_string(scene_id)),
          &list);
    }
    std::sort(images.begin(), images.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });

    for (const auto &[image_id, list] : images) {
      if (!list->is_array()) {
        throw ParseError(context(gt_path, scene_id, image_id, 0),
                         "image entry must be an array");
      }
      const json *info_list = nullptr;
      if (info.is_object() && info.contains(std::to_string(image_id))) {
        info_list = &info.at(std::to_string(image_id));
      }
      auto &records = index.ground_truth[{scene_id, image_id}];
      for (std::size_t k = 0; k < list->size(); ++k) {
        const std::string where = context(gt_path, scene_id, image_id, k);
        const json &rec = list->at(k);
        if (!rec.is_object()) throw ParseError(where, "record must be an object");
        if (!rec.contains("obj_id") || !rec.at("obj_id").is_number_integer()) {
          throw ParseError(where, "missing integer 'obj_id'");
        }
        const auto r = number_array(rec, 9, where, "cam_R_m2c");
        const auto t = number_array(rec, 3, where, "cam_t_m2c");
        Eigen::Matrix3d R;
        R << r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8];
        GroundTruthRecord out;
        out.scene_id = scene_id;
        out.image_id = image_id;
        out.object_id = rec.at("obj_id").get<int>();
        try {
          out.pose = Pose(R, Eigen::Vector3d(t[0], t[1], t[2]),
                          options.rotation_tolerance);
        } catch (const ParameterError &e) {
          throw ParseError(where, e.what());
        }
        if (info_list && info_list->is_array() && k < info_list->size() &&
            info_list->at(k).contains("bbox_obj")) {
          const auto b = number_array(info_list->at(k), 4,
                                      info_path.string() + ": scene " +
                                          std::to_string(scene_id) + " image " +
                                          std::to_string(image_id) + " record " +
                                          std::to_string(k),
                                      "bbox_obj");
          // BOP marks invisible objects with a -1 box.
          if (b[2] > 0.0 && b[3] > 0.0) {
            out.bbox = BBox{b[0], b[1], b[2], b[3], 1.0, out.object_id};
          }
        }
        records.push_back(std::move(out));
      }
    }
  }

  if (options.load_models) {
    index.models = load_model_registry(options.models_dir.value_or(root / "models"));
    for (const auto &[key, records] : index.ground_truth) {
      for (std::size_t k = 0; k < records.size(); ++k) {
        if (!index.models.contains(records[k].object_id)) {
          throw ParseError("scene " + std::to_string(key.scene_id) + " image " +
                               std::to_string(key.image_id) + " record " +
                               std::to_string(k),
                           "object " + std::to_string(records[k].object_id) +
                               " has no model");
        }
      }
    }
  }
  return index;
}

void write_bop_ground_truth(const fs::path &root,
                            const std::vector<GroundTruthRecord> &records,
                            const std::map<ImageKey, CameraIntrinsics> &cameras) {
  using ojson = nlohmann::ordered_json;
  std::map<int, std::map<int, std::vector<const GroundTruthRecord *>>> by_scene;
  for (const auto &r : records) by_scene[r.scene_id][r.image_id].push_back(&r);
  for (const auto &[key, K] : cameras) by_scene[key.scene_id];

  for (const auto &[scene_id, images] : by_scene) {
    ojson gt = ojson::object();
    ojson info = ojson::object();
    bool any_box = false;
    for (const auto &[image_id, recs] : images) {
      ojson list = ojson::array();
      ojson info_list = ojson::array();
      for (const auto *r : recs) {
        const Eigen::Matrix3d &R = r->pose.rotation();
        const Eigen::Vector3d &t = r->pose.translation();
        ojson rec;
        rec["cam_R_m2c"] = {R(0, 0), R(0, 1), R(0, 2), R(1, 0), R(1, 1),
                            R(1, 2), R(2, 0), R(2, 1), R(2, 2)};
        rec["cam_t_m2c"] = {t.x(), t.y(), t.z()};
        rec["obj_id"] = r->object_id;
        list.push_back(std::move(rec));
        ojson box;
        if (r->bbox) {
          any_box = true;
          box["bbox_obj"] = {r->bbox->x, r->bbox->y, r->bbox->w, r->bbox->h};
        } else {
          box["bbox_obj"] = {-1, -1, -1, -1};
        }
        info_list.push_back(std::move(box));
      }
      gt[std::to_string(image_id)] = std::move(list);
      info[std::to_string(image_id)] = std::move(info_list);
    }

    ojson cams = ojson::object();
    for (const auto &[key, K] : cameras) {
      if (key.scene_id != scene_id) continue;
      cams[std::to_string(key.image_id)] = {
          {"cam_K", {K.fx, 0.0, K.cx, 0.0, K.fy, K.cy, 0.0, 0.0, 1.0}},
          {"depth_scale", 1.0}};
    }

    const fs::path dir = root / scene_dir_name(scene_id);
    text::write_file(dir / "scene_gt.json", gt.dump(2) + "\n");
    text::write_file(dir / "scene_camera.json", cams.dump(2) + "\n");
    if (any_box) text::write_file(dir / "scene_gt_info.json", info.dump(2) + "\n");
  }
}

}  // namespace edgepose
