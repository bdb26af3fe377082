// Copyright 2026 The Regionkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef REGIONKIT_GEOMETRY_H_
#define REGIONKIT_GEOMETRY_H_

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace regionkit {

// Largest coordinate a normalized box may store. Normalized coordinates live
// in the integer range [0, 1000).
inline constexpr int kMaxCoord = 999;
inline constexpr int kCoordScale = 1000;

class GeometryError : public std::invalid_argument {
 public:
  enum class Kind { kInvalidBox, kDegenerateBox, kInvalidMask };

  GeometryError(Kind kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Axis-aligned box in normalized integer coordinates covering the half-open
// region [x1, x2) x [y1, y2). Construction enforces 0 <= x1 < x2 <= 999 and
// the same for y.
class BBox {
 public:
  BBox(int x1, int y1, int x2, int y2);

  // Returns true when the four values would form a valid box.
  static bool IsValid(long long x1, long long y1, long long x2, long long y2);

  int x1() const { return x1_; }
  int y1() const { return y1_; }
  int x2() const { return x2_; }
  int y2() const { return y2_; }

  std::int64_t Area() const {
    return static_cast<std::int64_t>(x2_ - x1_) * (y2_ - y1_);
  }

  std::string ToString() const;

  friend auto operator<=>(const BBox&, const BBox&) = default;

 private:
  int x1_, y1_, x2_, y2_;
};

// Pixel-space box, half-open, prior to normalization.
struct PixelBox {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  int Width() const { return x2 - x1; }
  int Height() const { return y2 - y1; }
  bool IsValidFor(int width, int height) const {
    return 0 <= x1 && x1 < x2 && x2 <= width && 0 <= y1 && y1 < y2 &&
           y2 <= height;
  }

  friend auto operator<=>(const PixelBox&, const PixelBox&) = default;
};

// Binary occupancy grid in row-major order.
class MaskGrid {
 public:
  MaskGrid(int width, int height);
  MaskGrid(int width, int height, std::vector<std::uint8_t> cells);

  int width() const { return width_; }
  int height() const { return height_; }

  bool at(int x, int y) const {
    return cells_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool on = true) {
    cells_[static_cast<std::size_t>(y) * width_ + x] = on ? 1 : 0;
  }
  // Fills the half-open rectangle [x1, x2) x [y1, y2).
  void Fill(const PixelBox& box);

  const std::vector<std::uint8_t>& cells() const { return cells_; }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> cells_;
};

// Intersection over union under the half-open area convention.
double Iou(const BBox& a, const BBox& b);

// Maps each coordinate v to min(999, floor(v * 1000 / dim)), scaling the two
// axes independently. Throws GeometryError if `box` is not valid for the
// image or if the result collapses to zero area.
BBox NormalizeBox(const PixelBox& box, int width, int height);

inline constexpr int kDefaultMinComponentArea = 4;

// One tight bounding box per 4-connected foreground component holding at
// least `min_area` cells, sorted by (top, left).
std::vector<PixelBox> MaskToBoxes(const MaskGrid& mask,
                                  int min_area = kDefaultMinComponentArea);

}  // namespace regionkit

#endif  // REGIONKIT_GEOMETRY_H_
