#include "edgepose/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include "edgepose/error.hpp"

namespace edgepose {

namespace {

constexpr double kMaxThreshold = 1020.0;
// tan(22.5 deg) and tan(67.5 deg); no integer gradient lies on either ray.
constexpr double kTan22 = 0.41421356237309503;
constexpr double kTan67 = 2.4142135623730949;

int clamp_index(int v, int n) { return std::clamp(v, 0, n - 1); }

// round(sqrt(n)) for non-negative n, exact in integers.
std::int32_t rounded_sqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  // (r + 0.5)^2 = r^2 + r + 0.25, so round up iff n > r^2 + r.
  if (n - r * r > r) ++r;
  return static_cast<std::int32_t>(r);
}

void require_min_size(const Image &img, const char *what) {
  if (img.width() < 3 || img.height() < 3) {
    throw DimensionError(std::string(what) + ": image must be at least 3x3, got " +
                         std::to_string(img.width()) + "x" +
                         std::to_string(img.height()));
  }
}

}  // namespace

Image::Image(int width, int height, int channels)
    : Image(width, height, channels,
            std::vector<std::uint8_t>(
                static_cast<std::size_t>(std::max(width, 0)) *
                std::max(height, 0) * std::max(channels, 0))) {}

Image::Image(int width, int height, int channels,
             std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw DimensionError("image dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw DimensionError("image must have 1 or 3 channels, got " +
                         std::to_string(channels));
  }
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw DimensionError("image data length does not match its dimensions");
  }
}

std::size_t EdgeMap::count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

Image to_grayscale(const Image &img) {
  if (img.channels() == 1) return img;
  Image gray(img.width(), img.height(), 1);
  auto src = img.data();
  auto dst = gray.data();
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const int r = src[3 * i], g = src[3 * i + 1], b = src[3 * i + 2];
    // Weights scaled by 1000; +500 rounds half up.
    const int v = (299 * r + 587 * g + 114 * b + 500) / 1000;
    dst[i] = static_cast<std::uint8_t>(std::min(v, 255));
  }
  return gray;
}

Image gaussian_blur_5x5(const Image &img) {
  static constexpr std::array<std::array<int, 5>, 5> kKernel = {{
      {2, 4, 5, 4, 2},
      {4, 9, 12, 9, 4},
      {5, 12, 15, 12, 5},
      {4, 9, 12, 9, 4},
      {2, 4, 5, 4, 2},
  }};
  constexpr int kSum = 159;
  Image out(img.width(), img.height(), img.channels());
  const int w = img.width(), h = img.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        int acc = 0;
        for (int ky = 0; ky < 5; ++ky) {
          for (int kx = 0; kx < 5; ++kx) {
            acc += kKernel[ky][kx] * img.at(clamp_index(x + kx - 2, w),
                                            clamp_index(y + ky - 2, h), c);
          }
        }
        out.at(x, y, c) = static_cast<std::uint8_t>((2 * acc + kSum) / (2 * kSum));
      }
    }
  }
  return out;
}

GradientField sobel_gradients(const Image &gray, GradientNorm norm) {
  if (gray.channels() != 1) {
    throw ParameterError("sobel_gradients expects a 1-channel image");
  }
  require_min_size(gray, "sobel_gradients");

  const int w = gray.width(), h = gray.height();
  GradientField g;
  g.width = w;
  g.height = h;
  g.gx.resize(gray.pixel_count());
  g.gy.resize(gray.pixel_count());
  g.magnitude.resize(gray.pixel_count());

  for (int y = 0; y < h; ++y) {
    const int ym = clamp_index(y - 1, h), yp = clamp_index(y + 1, h);
    for (int x = 0; x < w; ++x) {
      const int xm = clamp_index(x - 1, w), xp = clamp_index(x + 1, w);
      const int tl = gray.at(xm, ym), tc = gray.at(x, ym), tr = gray.at(xp, ym);
      const int ml = gray.at(xm, y), mr = gray.at(xp, y);
      const int bl = gray.at(xm, yp), bc = gray.at(x, yp), br = gray.at(xp, yp);

      const int dx = (tr + 2 * mr + br) - (tl + 2 * ml + bl);
      const int dy = (bl + 2 * bc + br) - (tl + 2 * tc + tr);
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      g.gx[i] = static_cast<std::int16_t>(dx);
      g.gy[i] = static_cast<std::int16_t>(dy);
      g.magnitude[i] =
          norm == GradientNorm::kL1
              ? std::abs(dx) + std::abs(dy)
              : rounded_sqrt(static_cast<std::int64_t>(dx) * dx +
                             static_cast<std::int64_t>(dy) * dy);
    }
  }
  return g;
}

EdgeMap canny(const Image &img, double low, double high,
              const CannyOptions &options) {
  if (!(low >= 0.0) || !(high <= kMaxThreshold)) {
    throw ParameterError("canny thresholds must lie in [0, 1020]");
  }
  if (low > high) {
    throw ParameterError("canny low threshold exceeds high threshold");
  }
  require_min_size(img, "canny");

  Image gray = to_grayscale(img);
  if (options.pre_blur) gray = gaussian_blur_5x5(gray);
  const GradientField g = sobel_gradients(gray, options.norm);

  const int w = g.width, h = g.height;
  const auto mag = [&](int x, int y) {
    return g.magnitude[static_cast<std::size_t>(y) * w + x];
  };

  // 0: suppressed or below low, 1: weak candidate, 2: strong seed.
  std::vector<std::uint8_t> state(g.magnitude.size(), 0);
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const int m = g.magnitude[i];
      if (m <= low) continue;

      const double ax = std::abs(g.gx[i]), ay = std::abs(g.gy[i]);
      int before, after;  // neighbor magnitudes along the gradient
      if (ay <= ax * kTan22) {
        before = mag(x - 1, y);
        after = mag(x + 1, y);
      } else if (ay >= ax * kTan67) {
        before = mag(x, y - 1);
        after = mag(x, y + 1);
      } else if ((g.gx[i] > 0) == (g.gy[i] > 0)) {
        before = mag(x - 1, y - 1);
        after = mag(x + 1, y + 1);
      } else {
        before = mag(x + 1, y - 1);
        after = mag(x - 1, y + 1);
      }
      // Strict on the raster-earlier side so plateaus yield 1-pixel edges.
      if (m > before && m >= after) state[i] = m > high ? 2 : 1;
    }
  }

  EdgeMap edges{w, h, std::vector<std::uint8_t>(state.size(), 0)};
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state[i] != 2 || edges.mask[i]) continue;
    edges.mask[i] = 1;
    stack.push_back(i);
    while (!stack.empty()) {
      const std::size_t j = stack.back();
      stack.pop_back();
      const int jx = static_cast<int>(j % w), jy = static_cast<int>(j / w);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = jx + dx, ny = jy + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t k = static_cast<std::size_t>(ny) * w + nx;
          if (state[k] != 0 && !edges.mask[k]) {
            edges.mask[k] = 1;
            stack.push_back(k);
          }
        }
      }
    }
  }
  return edges;
}

Image composite_rgb_edges(const Image &img, const EdgeMap &edges) {
  if (img.channels() != 3) {
    throw ParameterError("composite_rgb_edges expects a 3-channel image");
  }
  if (img.width() != edges.width || img.height() != edges.height) {
    throw DimensionError("edge map and image dimensions differ");
  }
  Image out = img;
  auto px = out.data();
  for (std::size_t i = 0; i < edges.mask.size(); ++i) {
    if (!edges.mask[i]) continue;
    px[3 * i] = px[3 * i + 1] = px[3 * i + 2] = 255;
  }
  return out;
}

Image edge_map_to_image(const EdgeMap &edges) {
  Image out(edges.width, edges.height, 1);
  auto px = out.data();
  for (std::size_t i = 0; i < edges.mask.size(); ++i) {
    px[i] = edges.mask[i] ? 255 : 0;
  }
  return out;
}

Image to_rgb(const Image &img) {
  if (img.channels() == 3) return img;
  Image out(img.width(), img.height(), 3);
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
  }
  return out;
}

}  // namespace edgepose
