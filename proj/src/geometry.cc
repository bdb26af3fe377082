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
#include "regionkit/geometry.h"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace regionkit {

BBox::BBox(int x1, int y1, int x2, int y2) : x1_(x1), y1_(y1), x2_(x2), y2_(y2) {
  if (!IsValid(x1, y1, x2, y2)) {
    throw GeometryError(GeometryError::Kind::kInvalidBox,
                        "invalid box " + ToString());
  }
}

bool BBox::IsValid(long long x1, long long y1, long long x2, long long y2) {
  return 0 <= x1 && x1 < x2 && x2 <= kMaxCoord && 0 <= y1 && y1 < y2 &&
         y2 <= kMaxCoord;
}

std::string BBox::ToString() const {
  std::ostringstream os;
  os << "[" << x1_ << ", " << y1_ << ", " << x2_ << ", " << y2_ << "]";
  return os.str();
}

MaskGrid::MaskGrid(int width, int height)
    : MaskGrid(width, height,
               std::vector<std::uint8_t>(
                   static_cast<std::size_t>(std::max(width, 0)) *
                   static_cast<std::size_t>(std::max(height, 0)))) {}

MaskGrid::MaskGrid(int width, int height, std::vector<std::uint8_t> cells)
    : width_(width), height_(height), cells_(std::move(cells)) {
  if (width < 0 || height < 0 ||
      cells_.size() != static_cast<std::size_t>(width) * height) {
    throw GeometryError(GeometryError::Kind::kInvalidMask,
                        "mask cell count does not match its dimensions");
  }
}

void MaskGrid::Fill(const PixelBox& box) {
  for (int y = std::max(box.y1, 0); y < std::min(box.y2, height_); ++y) {
    for (int x = std::max(box.x1, 0); x < std::min(box.x2, width_); ++x) {
      set(x, y);
    }
  }
}

double Iou(const BBox& a, const BBox& b) {
  const std::int64_t iw =
      std::min(a.x2(), b.x2()) - static_cast<std::int64_t>(std::max(a.x1(), b.x1()));
  const std::int64_t ih =
      std::min(a.y2(), b.y2()) - static_cast<std::int64_t>(std::max(a.y1(), b.y1()));
  if (iw <= 0 || ih <= 0) return 0.0;
  const std::int64_t inter = iw * ih;
  const std::int64_t uni = a.Area() + b.Area() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

int ScaleCoord(int v, int dim) {
  const long long scaled = static_cast<long long>(v) * kCoordScale / dim;
  return static_cast<int>(std::min<long long>(kMaxCoord, scaled));
}

}  // namespace

BBox NormalizeBox(const PixelBox& box, int width, int height) {
  if (width <= 0 || height <= 0 || !box.IsValidFor(width, height)) {
    std::ostringstream os;
    os << "pixel box (" << box.x1 << "," << box.y1 << "," << box.x2 << ","
       << box.y2 << ") is not valid for a " << width << "x" << height
       << " image";
    throw GeometryError(GeometryError::Kind::kInvalidBox, os.str());
  }
  const int x1 = ScaleCoord(box.x1, width);
  const int y1 = ScaleCoord(box.y1, height);
  const int x2 = ScaleCoord(box.x2, width);
  const int y2 = ScaleCoord(box.y2, height);
  if (x1 >= x2 || y1 >= y2) {
    std::ostringstream os;
    os << "pixel box (" << box.x1 << "," << box.y1 << "," << box.x2 << ","
       << box.y2 << ") collapses to a degenerate normalized box";
    throw GeometryError(GeometryError::Kind::kDegenerateBox, os.str());
  }
  return BBox(x1, y1, x2, y2);
}

std::vector<PixelBox> MaskToBoxes(const MaskGrid& mask, int min_area) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<std::uint8_t> seen(mask.cells().size(), 0);
  std::vector<int> stack;
  std::vector<PixelBox> boxes;

  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      const int start = sy * w + sx;
      if (!mask.cells()[start] || seen[start]) continue;
      PixelBox box{sx, sy, sx + 1, sy + 1};
      int area = 0;
      seen[start] = 1;
      stack.push_back(start);
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const int x = idx % w;
        const int y = idx / w;
        ++area;
        box.x1 = std::min(box.x1, x);
        box.y1 = std::min(box.y1, y);
        box.x2 = std::max(box.x2, x + 1);
        box.y2 = std::max(box.y2, y + 1);
        const int nx[4] = {x - 1, x + 1, x, x};
        const int ny[4] = {y, y, y - 1, y + 1};
        for (int k = 0; k < 4; ++k) {
          if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
          const int n = ny[k] * w + nx[k];
          if (mask.cells()[n] && !seen[n]) {
            seen[n] = 1;
            stack.push_back(n);
          }
        }
      }
      if (area >= min_area) boxes.push_back(box);
    }
  }

  std::sort(boxes.begin(), boxes.end(), [](const PixelBox& a, const PixelBox& b) {
    return std::tie(a.y1, a.x1, a.y2, a.x2) < std::tie(b.y1, b.x1, b.y2, b.x2);
  });
  return boxes;
}

}  // namespace regionkit
