#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace edgepose {

// 8-bit raster, row-major, channel-interleaved. Holds both the RGB input and
// its edge-domain counterpart.
class Image {
 public:
  // Zero-filled image. Throws DimensionError unless width, height >= 1 and
  // channels is 1 or 3.
  Image(int width, int height, int channels);
  // Takes ownership of `data`; its size must be width * height * channels.
  Image(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

  std::uint8_t at(int x, int y, int c = 0) const {
    return data_[index(x, y, c)];
  }
  std::uint8_t &at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }

  bool operator==(const Image &) const = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_;
  int height_;
  int channels_;
  std::vector<std::uint8_t> data_;
};

enum class GradientNorm { kL1, kL2 };

// Sobel derivatives and their magnitude under the selected norm.
struct GradientField {
  int width = 0;
  int height = 0;
  std::vector<std::int16_t> gx;
  std::vector<std::int16_t> gy;
  std::vector<std::int32_t> magnitude;
};

struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;  // 0 or 1 per pixel

  bool on(int x, int y) const {
    return mask[static_cast<std::size_t>(y) * width + x] != 0;
  }
  std::size_t count() const;

  bool operator==(const EdgeMap &) const = default;
};

struct CannyOptions {
  GradientNorm norm = GradientNorm::kL2;
  // Applies gaussian_blur_5x5 before differentiation.
  bool pre_blur = false;
};

// BT.601 luma, round half up. A 1-channel image is returned unchanged.
Image to_grayscale(const Image &img);

// 5x5 Gaussian (sigma 1.4, integer kernel summing to 159) with replicated
// borders, applied per channel.
Image gaussian_blur_5x5(const Image &img);

// 3x3 Sobel with replicated borders. L2 magnitude is rounded to the nearest
// integer. Requires a 1-channel image of at least 3x3.
GradientField sobel_gradients(const Image &gray,
                              GradientNorm norm = GradientNorm::kL2);

// Full Canny pipeline: grayscale (if needed), optional blur, Sobel, 4-bin
// non-maximum suppression and 8-connected double-threshold hysteresis.
// Thresholds compare against the raw gradient magnitude and must satisfy
// 0 <= low <= high <= 1020.
EdgeMap canny(const Image &img, double low, double high,
              const CannyOptions &options = {});

// Paints edge pixels white on a copy of a 3-channel image.
Image composite_rgb_edges(const Image &img, const EdgeMap &edges);

// 0/255 single-channel rendering of an edge map.
Image edge_map_to_image(const EdgeMap &edges);

// Replicates a gray image into three channels; 3-channel input is returned
// unchanged.
Image to_rgb(const Image &img);

// 8-bit PNG codec (1 or 3 channels). Alpha is dropped on load; 16-bit files
// are rejected.
Image load_png(const std::filesystem::path &path);
void save_png(const Image &img, const std::filesystem::path &path);

}  // namespace edgepose
