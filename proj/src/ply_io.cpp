#include <bit>
#include <cstring>
#include <sstream>
#include <string>

#include "edgepose/dataset_io.hpp"
#include "edgepose/error.hpp"
#include "text_format.hpp"

namespace edgepose {

namespace fs = std::filesystem;

namespace {

enum class Scalar { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

std::optional<Scalar> scalar_from_name(std::string_view name) {
  if (name == "char" || name == "int8") return Scalar::kInt8;
  if (name == "uchar" || name == "uint8") return Scalar::kUint8;
  if (name == "short" || name == "int16") return Scalar::kInt16;
  if (name == "ushort" || name == "uint16") return Scalar::kUint16;
  if (name == "int" || name == "int32") return Scalar::kInt32;
  if (name == "uint" || name == "uint32") return Scalar::kUint32;
  if (name == "float" || name == "float32") return Scalar::kFloat32;
  if (name == "double" || name == "float64") return Scalar::kFloat64;
  return std::nullopt;
}

std::size_t scalar_size(Scalar s) {
  switch (s) {
    case Scalar::kInt8:
    case Scalar::kUint8: return 1;
    case Scalar::kInt16:
    case Scalar::kUint16: return 2;
    case Scalar::kInt32:
    case Scalar::kUint32:
    case Scalar::kFloat32: return 4;
    case Scalar::kFloat64: return 8;
  }
  return 0;
}

struct Property {
  std::string name;
  Scalar type = Scalar::kFloat32;
  bool is_list = false;
  Scalar count_type = Scalar::kUint8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

template <typename T>
T read_le(const char *p) {
  static_assert(std::endian::native == std::endian::little,
                "binary PLY reader assumes a little-endian host");
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

double read_scalar(const char *p, Scalar s) {
  switch (s) {
    case Scalar::kInt8: return read_le<std::int8_t>(p);
    case Scalar::kUint8: return read_le<std::uint8_t>(p);
    case Scalar::kInt16: return read_le<std::int16_t>(p);
    case Scalar::kUint16: return read_le<std::uint16_t>(p);
    case Scalar::kInt32: return read_le<std::int32_t>(p);
    case Scalar::kUint32: return read_le<std::uint32_t>(p);
    case Scalar::kFloat32: return read_le<float>(p);
    case Scalar::kFloat64: return read_le<double>(p);
  }
  return 0.0;
}

}  // namespace

ModelPoints load_ply_model(const fs::path &path, std::optional<double> diameter) {
  const std::string bytes = text::read_file(path);
  const std::string file = path.string();

  // Header lines end with '\n'; tolerate '\r\n'.
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::optional<std::string> {
    if (pos >= bytes.size()) return std::nullopt;
    std::size_t end = bytes.find('\n', pos);
    if (end == std::string::npos) end = bytes.size();
    std::string line = bytes.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  auto fail = [&](const std::string &what) -> ParseError {
    return ParseError(file + ": line " + std::to_string(line_no), what);
  };

  auto magic = next_line();
  if (!magic || *magic != "ply") throw fail("missing 'ply' magic");

  bool binary = false;
  bool have_format = false;
  std::vector<Element> elements;
  while (true) {
    auto line = next_line();
    if (!line) throw fail("header not terminated by end_header");
    const auto tok = text::split_whitespace(*line);
    if (tok.empty()) continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() != 3) throw fail("malformed format line");
      if (tok[1] == "ascii") {
        binary = false;
      } else if (tok[1] == "binary_little_endian") {
        binary = true;
      } else {
        throw fail("unsupported PLY format '" + std::string(tok[1]) + "'");
      }
      have_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw fail("malformed element line");
      const auto count = text::parse_int(tok[2]);
      if (!count || *count < 0) throw fail("invalid element count");
      elements.push_back({std::string(tok[1]), static_cast<std::size_t>(*count), {}});
    } else if (tok[0] == "property") {
      if (elements.empty()) throw fail("property before any element");
      Property prop;
      if (tok.size() == 5 && tok[1] == "list") {
        const auto ct = scalar_from_name(tok[2]);
        const auto it = scalar_from_name(tok[3]);
        if (!ct || !it) throw fail("unsupported list property types");
        prop = {std::string(tok[4]), *it, true, *ct};
      } else if (tok.size() == 3) {
        const auto t = scalar_from_name(tok[1]);
        if (!t) throw fail("unsupported property type '" + std::string(tok[1]) + "'");
        prop = {std::string(tok[2]), *t, false, Scalar::kUint8};
      } else {
        throw fail("malformed property line");
      }
      elements.back().properties.push_back(std::move(prop));
    } else {
      throw fail("unexpected header keyword '" + std::string(tok[0]) + "'");
    }
  }
  if (!have_format) throw fail("missing format line");

  const auto vertex_it = std::find_if(elements.begin(), elements.end(),
                                      [](const Element &e) { return e.name == "vertex"; });
  if (vertex_it == elements.end()) throw fail("no vertex element");
  if (vertex_it->count == 0) throw fail("empty vertex element");
  int axis_index[3] = {-1, -1, -1};
  for (std::size_t i = 0; i < vertex_it->properties.size(); ++i) {
    const Property &p = vertex_it->properties[i];
    const int axis = p.name == "x" ? 0 : p.name == "y" ? 1 : p.name == "z" ? 2 : -1;
    if (axis < 0) continue;
    if (p.is_list || (p.type != Scalar::kFloat32 && p.type != Scalar::kFloat64)) {
      throw fail("vertex property '" + p.name + "' must be float or double");
    }
    axis_index[axis] = static_cast<int>(i);
  }
  if (axis_index[0] < 0 || axis_index[1] < 0 || axis_index[2] < 0) {
    throw fail("vertex element lacks x, y or z");
  }

  ModelPoints model;
  model.points.reserve(vertex_it->count);

  if (!binary) {
    for (const Element &el : elements) {
      const bool is_vertex = &el == &*vertex_it;
      for (std::size_t row = 0; row < el.count; ++row) {
        auto line = next_line();
        if (!line) throw fail("unexpected end of file in element '" + el.name + "'");
        if (!is_vertex) continue;
        const auto tok = text::split_whitespace(*line);
        std::size_t t = 0;
        Eigen::Vector3d v;
        for (std::size_t i = 0; i < el.properties.size(); ++i) {
          const Property &p = el.properties[i];
          std::size_t n = 1;
          if (p.is_list) {
            if (t >= tok.size()) throw fail("truncated vertex row");
            const auto c = text::parse_int(tok[t++]);
            if (!c || *c < 0) throw fail("invalid list count");
            n = static_cast<std::size_t>(*c);
          }
          for (std::size_t k = 0; k < n; ++k) {
            if (t >= tok.size()) throw fail("truncated vertex row");
            const auto value = text::parse_double(tok[t++]);
            if (!value) throw fail("unparseable number in vertex row");
            for (int a = 0; a < 3; ++a) {
              if (axis_index[a] == static_cast<int>(i)) v[a] = *value;
            }
          }
        }
        if (t != tok.size()) throw fail("extra values in vertex row");
        model.points.push_back(v);
      }
      if (is_vertex) break;
    }
  } else {
    const char *data = bytes.data();
    std::size_t offset = pos;
    auto need = [&](std::size_t n) {
      if (offset + n > bytes.size()) {
        throw ParseError(file, "binary payload truncated");
      }
    };
    for (const Element &el : elements) {
      const bool is_vertex = &el == &*vertex_it;
      for (std::size_t row = 0; row < el.count; ++row) {
        Eigen::Vector3d v;
        for (std::size_t i = 0; i < el.properties.size(); ++i) {
          const Property &p = el.properties[i];
          std::size_t n = 1;
          if (p.is_list) {
            need(scalar_size(p.count_type));
            const double c = read_scalar(data + offset, p.count_type);
            offset += scalar_size(p.count_type);
            if (c < 0) throw ParseError(file, "negative list count");
            n = static_cast<std::size_t>(c);
          }
          need(n * scalar_size(p.type));
          if (is_vertex && !p.is_list) {
            const double value = read_scalar(data + offset, p.type);
            for (int a = 0; a < 3; ++a) {
              if (axis_index[a] == static_cast<int>(i)) v[a] = value;
            }
          }
          offset += n * scalar_size(p.type);
        }
        if (is_vertex) model.points.push_back(v);
      }
      if (is_vertex) break;
    }
  }

  for (const auto &p : model.points) {
    if (!p.allFinite()) throw ParseError(file, "non-finite vertex coordinate");
  }
  if (diameter) {
    model.diameter = *diameter;
  } else {
    if (model.points.size() < 2) {
      throw ParseError(file, "cannot compute a diameter from fewer than 2 vertices");
    }
    model.diameter = model_diameter(model.points);
  }
  if (!(model.diameter > 0.0)) throw ParseError(file, "model diameter is zero");
  return model;
}

void write_ply_model(const fs::path &path, const ModelPoints &model,
                     PlyEncoding encoding) {
  std::ostringstream out;
  out << "ply\n"
      << (encoding == PlyEncoding::kAscii ? "format ascii 1.0\n"
                                          : "format binary_little_endian 1.0\n")
      << "element vertex " << model.points.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "end_header\n";
  std::string body = out.str();
  for (const auto &p : model.points) {
    if (encoding == PlyEncoding::kAscii) {
      body += text::format_double(p.x()) + " " + text::format_double(p.y()) +
              " " + text::format_double(p.z()) + "\n";
    } else {
      for (int a = 0; a < 3; ++a) {
        const double v = p[a];
        char raw[sizeof(double)];
        std::memcpy(raw, &v, sizeof(double));
        body.append(raw, sizeof(double));
      }
    }
  }
  text::write_file(path, body);
}

}  // namespace edgepose
