#pragma once
// 8-bit interleaved RGB frames and the geometry primitives the preprocessing
// pipeline is built from.

#include <cstdint>
#include <vector>

namespace tfd {

struct ImageU8 {
  int h = 0;
  int w = 0;
  std::vector<uint8_t> px;  // h*w*3, row-major, RGB interleaved

  ImageU8() = default;
  ImageU8(int height, int width)
      : h(height), w(width), px(static_cast<size_t>(height) * width * 3, 0) {}

  uint8_t* at(int y, int x) { return px.data() + (static_cast<size_t>(y) * w + x) * 3; }
  const uint8_t* at(int y, int x) const {
    return px.data() + (static_cast<size_t>(y) * w + x) * 3;
  }
  bool operator==(const ImageU8& o) const {
    return h == o.h && w == o.w && px == o.px;
  }
};

// ITU-R BT.601 luma, rounded to nearest.
inline int luma601(uint8_t r, uint8_t g, uint8_t b) {
  return static_cast<int>(0.299 * r + 0.587 * g + 0.114 * b + 0.5);
}

double luma_mean(const ImageU8& img);
double luma_stddev(const ImageU8& img);

// Whole-image bilinear resize.
ImageU8 resize_bilinear(const ImageU8& src, int out_h, int out_w);

// Bilinear-samples the axis-aligned square patch of side `side` centered at
// (cx, cy) (source pixel coordinates) into an out x out image. Coordinates
// are clamped at the borders.
ImageU8 sample_square_patch(const ImageU8& src, double cx, double cy,
                            double side, int out);

// Float-plane variants used on [0,1] clip data (augmentation path).
// Planes are [h][w] row-major per channel triplet laid out as HxWx3.
void resize_bilinear_f32(const float* src, int sh, int sw, float* dst, int dh,
                         int dw);

}  // namespace tfd
