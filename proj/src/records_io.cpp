#include <nlohmann/json.hpp>
#include <string>

#include "edgepose/dataset_io.hpp"
#include "edgepose/error.hpp"
#include "text_format.hpp"

namespace edgepose {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kEstimateHeader = "scene_id,im_id,obj_id,score,R,t,time";
constexpr std::string_view kCorrespondenceHeader = "x3d,y3d,z3d,u,v";

std::string line_context(const fs::path &path, std::size_t line) {
  return path.string() + ": line " + std::to_string(line);
}

std::vector<double> parse_floats(std::string_view field, std::size_t expected,
                                 const std::string &where, const char *name) {
  const auto tokens = text::split_whitespace(field);
  if (tokens.size() != expected) {
    throw ParseError(where, std::string(name) + " must hold " +
                                std::to_string(expected) + " values, got " +
                                std::to_string(tokens.size()));
  }
  std::vector<double> out;
  for (const auto tok : tokens) {
    const auto v = text::parse_double(tok);
    if (!v) {
      throw ParseError(where, std::string(name) + ": cannot parse '" +
                                  std::string(tok) + "'");
    }
    out.push_back(*v);
  }
  return out;
}

int parse_id(std::string_view field, const std::string &where, const char *name) {
  const auto v = text::parse_int(field);
  if (!v) {
    throw ParseError(where, std::string(name) + ": not an integer '" +
                                std::string(field) + "'");
  }
  return static_cast<int>(*v);
}

nlohmann::json parse_json(const fs::path &path) {
  try {
    return nlohmann::json::parse(text::read_file(path));
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(path.string(), std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::vector<EstimateRecord> load_pose_estimates(const fs::path &path,
                                                double rotation_tolerance) {
  const auto lines = text::read_lines(path);
  if (lines.empty() || lines.front() != kEstimateHeader) {
    throw ParseError(line_context(path, 1),
                     "expected header '" + std::string(kEstimateHeader) + "'");
  }
  std::vector<EstimateRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = line_context(path, i + 1);
    const auto fields = text::split(lines[i], ',');
    if (fields.size() != 7) {
      throw ParseError(where, "expected 7 columns, got " + std::to_string(fields.size()));
    }
    EstimateRecord rec;
    rec.scene_id = parse_id(fields[0], where, "scene_id");
    rec.image_id = parse_id(fields[1], where, "im_id");
    rec.object_id = parse_id(fields[2], where, "obj_id");
    const auto score = text::parse_double(fields[3]);
    if (!score) throw ParseError(where, "score: cannot parse");
    rec.score = *score;
    const auto r = parse_floats(fields[4], 9, where, "R");
    const auto t = parse_floats(fields[5], 3, where, "t");
    const auto time = text::parse_double(fields[6]);
    if (!time) throw ParseError(where, "time: cannot parse");
    if (*time >= 0.0) rec.time = *time;

    Eigen::Matrix3d R;
    R << r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8];
    try {
      rec.pose = Pose(R, Eigen::Vector3d(t[0], t[1], t[2]), rotation_tolerance);
    } catch (const ParameterError &e) {
      throw ParseError(where, e.what());
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void write_pose_estimates(const fs::path &path,
                          const std::vector<EstimateRecord> &records) {
  std::string out(kEstimateHeader);
  out += "\n";
  for (const auto &r : records) {
    const Eigen::Matrix3d &R = r.pose.rotation();
    const Eigen::Vector3d &t = r.pose.translation();
    out += std::to_string(r.scene_id) + "," + std::to_string(r.image_id) + "," +
           std::to_string(r.object_id) + "," + text::format_double(r.score) + ",";
    for (int i = 0; i < 9; ++i) {
      out += (i ? " " : "") + text::format_double(R(i / 3, i % 3));
    }
    out += ",";
    for (int i = 0; i < 3; ++i) out += (i ? " " : "") + text::format_double(t[i]);
    out += "," + (r.time ? text::format_double(*r.time) : std::string("-1")) + "\n";
  }
  text::write_file(path, out);
}

std::vector<Detection> load_detections(const fs::path &path) {
  const nlohmann::json j = parse_json(path);
  if (!j.is_array()) throw ParseError(path.string(), "expected a JSON array");
  std::vector<Detection> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = path.string() + ": entry " + std::to_string(i);
    const auto &e = j[i];
    if (!e.is_object()) throw ParseError(where, "entry must be an object");
    for (const char *key : {"scene_id", "image_id", "category_id"}) {
      if (!e.contains(key) || !e.at(key).is_number_integer()) {
        throw ParseError(where, std::string("missing integer '") + key + "'");
      }
    }
    if (!e.contains("bbox") || !e.at("bbox").is_array() || e.at("bbox").size() != 4) {
      throw ParseError(where, "'bbox' must be [x, y, w, h]");
    }
    Detection d;
    d.image = {e.at("scene_id").get<int>(), e.at("image_id").get<int>()};
    double b[4];
    for (int k = 0; k < 4; ++k) {
      if (!e.at("bbox")[k].is_number()) throw ParseError(where, "'bbox' holds a non-number");
      b[k] = e.at("bbox")[k].get<double>();
    }
    d.box = BBox{b[0], b[1], b[2], b[3], 1.0, e.at("category_id").get<int>()};
    if (e.contains("score")) {
      if (!e.at("score").is_number()) throw ParseError(where, "'score' must be a number");
      d.box.score = e.at("score").get<double>();
      if (d.box.score < 0.0 || d.box.score > 1.0) {
        throw ParseError(where, "'score' must lie in [0, 1]");
      }
    }
    try {
      d.box.validate();
    } catch (const ParameterError &err) {
      throw ParseError(where, err.what());
    }
    out.push_back(d);
  }
  return out;
}

void write_detections(const fs::path &path, const std::vector<Detection> &detections) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto &d : detections) {
    j.push_back({{"scene_id", d.image.scene_id},
                 {"image_id", d.image.image_id},
                 {"category_id", d.box.class_id},
                 {"bbox", {d.box.x, d.box.y, d.box.w, d.box.h}},
                 {"score", d.box.score}});
  }
  text::write_file(path, j.dump(2) + "\n");
}

CameraIntrinsics load_intrinsics(const fs::path &path) {
  const nlohmann::json j = parse_json(path);
  if (!j.is_object()) throw ParseError(path.string(), "expected a JSON object");
  CameraIntrinsics K;
  double *fields[] = {&K.fx, &K.fy, &K.cx, &K.cy};
  const char *names[] = {"fx", "fy", "cx", "cy"};
  for (int i = 0; i < 4; ++i) {
    if (!j.contains(names[i]) || !j.at(names[i]).is_number()) {
      throw ParseError(path.string(), std::string("missing numeric '") + names[i] + "'");
    }
    *fields[i] = j.at(names[i]).get<double>();
  }
  try {
    K.validate();
  } catch (const ParameterError &e) {
    throw ParseError(path.string(), e.what());
  }
  return K;
}

void write_intrinsics(const fs::path &path, const CameraIntrinsics &K) {
  const nlohmann::ordered_json j = {{"fx", K.fx}, {"fy", K.fy}, {"cx", K.cx}, {"cy", K.cy}};
  text::write_file(path, j.dump(2) + "\n");
}

std::vector<Correspondence> load_correspondences(const fs::path &path) {
  const auto lines = text::read_lines(path);
  if (lines.empty() || lines.front() != kCorrespondenceHeader) {
    throw ParseError(line_context(path, 1),
                     "expected header '" + std::string(kCorrespondenceHeader) + "'");
  }
  std::vector<Correspondence> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = line_context(path, i + 1);
    const auto fields = text::split(lines[i], ',');
    if (fields.size() != 5) {
      throw ParseError(where, "expected 5 columns, got " + std::to_string(fields.size()));
    }
    double v[5];
    for (int k = 0; k < 5; ++k) {
      const auto parsed = text::parse_double(fields[k]);
      if (!parsed || !std::isfinite(*parsed)) {
        throw ParseError(where, "column " + std::to_string(k + 1) + " is not a finite number");
      }
      v[k] = *parsed;
    }
    out.push_back({Eigen::Vector3d(v[0], v[1], v[2]), Eigen::Vector2d(v[3], v[4])});
  }
  return out;
}

void write_correspondences(const fs::path &path,
                           const std::vector<Correspondence> &correspondences) {
  std::string out(kCorrespondenceHeader);
  out += "\n";
  for (const auto &c : correspondences) {
    out += text::format_double(c.point3d.x()) + "," + text::format_double(c.point3d.y()) +
           "," + text::format_double(c.point3d.z()) + "," +
           text::format_double(c.point2d.x()) + "," + text::format_double(c.point2d.y()) +
           "\n";
  }
  text::write_file(path, out);
}

}  // namespace edgepose
