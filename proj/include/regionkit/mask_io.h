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
#ifndef REGIONKIT_MASK_IO_H_
#define REGIONKIT_MASK_IO_H_

#include <filesystem>
#include <string_view>

#include "regionkit/geometry.h"

namespace regionkit {

// Reads a binary mask. Netpbm files (P1, P2, P4, P5) are recognized by their
// magic number; any non-zero sample is foreground. Anything else is read as a
// text grid, one row per line, where '0' and '.' are background and any other
// non-blank character is foreground. Throws std::runtime_error.
MaskGrid ReadMask(const std::filesystem::path& path);
MaskGrid ParseMask(std::string_view bytes);

// Binary PGM (P5) with foreground 255.
void WriteMaskPgm(const MaskGrid& mask, const std::filesystem::path& path);

}  // namespace regionkit

#endif  // REGIONKIT_MASK_IO_H_
