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
#include "regionkit/mask_io.h"

#include <cctype>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

namespace regionkit {

namespace {

class NetpbmReader {
 public:
  explicit NetpbmReader(std::string_view bytes) : b_(bytes) {}

  // Next header integer, skipping whitespace and '#' comments.
  long ReadInt() {
    SkipSpaceAndComments();
    const std::size_t begin = pos_;
    while (pos_ < b_.size() && std::isdigit(static_cast<unsigned char>(b_[pos_]))) {
      ++pos_;
    }
    if (begin == pos_ || pos_ - begin > 9) {
      throw std::runtime_error("malformed netpbm header");
    }
    return std::stol(std::string(b_.substr(begin, pos_ - begin)));
  }

  // Consumes the single whitespace byte that ends a binary header.
  void EndHeader() {
    if (pos_ >= b_.size() || !std::isspace(static_cast<unsigned char>(b_[pos_]))) {
      throw std::runtime_error("malformed netpbm header");
    }
    ++pos_;
  }

  std::string_view Rest() const { return b_.substr(pos_); }

  // P1 pixels may be written without separators.
  int ReadBit() {
    SkipSpaceAndComments();
    if (pos_ >= b_.size() || (b_[pos_] != '0' && b_[pos_] != '1')) {
      throw std::runtime_error("malformed P1 pixel data");
    }
    return b_[pos_++] - '0';
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < b_.size()) {
      if (std::isspace(static_cast<unsigned char>(b_[pos_]))) {
        ++pos_;
      } else if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view b_;
  std::size_t pos_ = 2;
};

MaskGrid ParseNetpbm(std::string_view bytes) {
  const char kind = bytes[1];
  NetpbmReader r(bytes);
  const long width = r.ReadInt();
  const long height = r.ReadInt();
  if (width <= 0 || height <= 0 || width * height > (1L << 28)) {
    throw std::runtime_error("unsupported netpbm dimensions");
  }
  long maxval = 1;
  if (kind == '2' || kind == '5') maxval = r.ReadInt();
  if (maxval <= 0 || maxval > 65535) throw std::runtime_error("bad netpbm maxval");

  MaskGrid mask(static_cast<int>(width), static_cast<int>(height));
  const auto w = static_cast<int>(width);
  const auto h = static_cast<int>(height);
  switch (kind) {
    case '1':
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) mask.set(x, y, r.ReadBit() != 0);
      break;
    case '2':
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) mask.set(x, y, r.ReadInt() != 0);
      break;
    case '4': {
      r.EndHeader();
      const std::string_view data = r.Rest();
      const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
      if (data.size() < row_bytes * h) throw std::runtime_error("truncated P4 data");
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const auto byte = static_cast<unsigned char>(data[y * row_bytes + x / 8]);
          mask.set(x, y, (byte >> (7 - x % 8)) & 1);
        }
      }
      break;
    }
    case '5': {
      r.EndHeader();
      const std::string_view data = r.Rest();
      const std::size_t bps = maxval > 255 ? 2 : 1;
      if (data.size() < bps * w * h) throw std::runtime_error("truncated P5 data");
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const std::size_t i = bps * (static_cast<std::size_t>(y) * w + x);
          bool on = data[i] != 0;
          if (bps == 2) on = on || data[i + 1] != 0;
          mask.set(x, y, on);
        }
      }
      break;
    }
    default:
      throw std::runtime_error("unsupported netpbm type");
  }
  return mask;
}

MaskGrid ParseTextGrid(std::string_view bytes) {
  std::vector<std::string> rows;
  std::size_t start = 0;
  while (start <= bytes.size()) {
    std::size_t end = bytes.find('\n', start);
    if (end == std::string_view::npos) end = bytes.size();
    std::string row;
    for (char c : bytes.substr(start, end - start)) {
      if (!std::isspace(static_cast<unsigned char>(c))) row.push_back(c);
    }
    if (!row.empty()) rows.push_back(std::move(row));
    start = end + 1;
  }
  if (rows.empty()) throw std::runtime_error("empty mask grid");
  const std::size_t width = rows.front().size();
  for (const std::string& row : rows) {
    if (row.size() != width) throw std::runtime_error("ragged mask grid");
  }
  MaskGrid mask(static_cast<int>(width), static_cast<int>(rows.size()));
  for (std::size_t y = 0; y < rows.size(); ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const char c = rows[y][x];
      mask.set(static_cast<int>(x), static_cast<int>(y), c != '0' && c != '.');
    }
  }
  return mask;
}

}  // namespace

MaskGrid ParseMask(std::string_view bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' && bytes[1] <= '5' &&
      bytes[1] != '3') {
    return ParseNetpbm(bytes);
  }
  return ParseTextGrid(bytes);
}

MaskGrid ReadMask(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read mask " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return ParseMask(bytes);
}

void WriteMaskPgm(const MaskGrid& mask, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write mask " + path.string());
  out << "P5\n" << mask.width() << " " << mask.height() << "\n255\n";
  for (std::uint8_t c : mask.cells()) out.put(c ? static_cast<char>(255) : 0);
}

}  // namespace regionkit
