/*
 * Copyright 2026 The dbamsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dbam/hdc.hpp"

namespace dbam {

/// A hypervector compressed for multi-level cells: each level is the sum of
/// `pf` adjacent bits, so it lies in [0, pf].
struct PackedVector {
  std::uint32_t pf = 1;
  std::vector<std::uint8_t> levels;

  friend bool operator==(const PackedVector&, const PackedVector&) = default;
};

inline constexpr std::uint32_t kMaxPackingFactor = 255;

/// Zero-pads the tail when the dimension is not a multiple of `pf`.
PackedVector pack(const Hypervector& h, std::uint32_t pf);

/// Cells needed for a `dimension`-bit vector at packing factor `pf`.
std::size_t packed_length(std::size_t dimension, std::uint32_t pf);

/// ceil(log2(pf + 1)).
std::uint32_t bits_per_cell(std::uint32_t pf);

/// Everything needed to re-encode queries against a stored library.
struct PackedLibraryHeader {
  HdcParams hdc;
  std::uint32_t pf = 1;
};

// Packed-library file ("DBPL", version 1), all integers little-endian:
//   u32 D, u32 pf, u32 count, u32 F, u32 Q, u64 seed,
//   count rows of ceil(len * bits_per_cell / 8) bytes (levels LSB-first),
//   count ids as (u32 byte length, UTF-8 bytes).
void write_packed_library(std::ostream& out, const PackedLibraryHeader& h,
                          std::span<const std::string> ids,
                          std::span<const PackedVector> rows);
void read_packed_library(std::istream& in, PackedLibraryHeader& h,
                         std::vector<std::string>& ids,
                         std::vector<PackedVector>& rows);

}  // namespace dbam
