#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "edgepose/error.hpp"
#include "edgepose/image.hpp"

namespace edgepose {

namespace {

// png_image must be released on every path once begin_read succeeded.
struct PngImageGuard {
  png_image *image;
  ~PngImageGuard() { png_image_free(image); }
};

}  // namespace

Image load_png(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open file");
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());

  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw IoError(path.string() + ": " + image.message);
  }
  PngImageGuard guard{&image};

  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    throw IoError(path.string() + ": unsupported bit depth (16-bit)");
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const int channels = color ? 3 : 1;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, data.data(), 0, nullptr)) {
    throw IoError(path.string() + ": " + image.message);
  }
  return Image(static_cast<int>(image.width), static_cast<int>(image.height),
               channels, std::move(data));
}

void save_png(const Image &img, const std::filesystem::path &path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  if (!png_image_write_to_file(&image, path.string().c_str(), 0,
                               img.data().data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw IoError(path.string() + ": " + message);
  }
}

}  // namespace edgepose
