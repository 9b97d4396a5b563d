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

#include "dbam/packing.hpp"

#include <algorithm>
#include <bit>

#include "binio.hpp"
#include "dbam/error.hpp"

namespace dbam {

namespace {
constexpr std::uint32_t kPackedVersion = 1;

void check_pf(std::uint32_t pf) {
  if (pf < 1 || pf > kMaxPackingFactor)
    fail(ErrorCode::kInvalidArgument,
         "packing factor must lie in [1, " +
             std::to_string(kMaxPackingFactor) + "], got " +
             std::to_string(pf));
}
}  // namespace

std::size_t packed_length(std::size_t dimension, std::uint32_t pf) {
  check_pf(pf);
  return (dimension + pf - 1) / pf;
}

PackedVector pack(const Hypervector& h, std::uint32_t pf) {
  PackedVector out;
  out.pf = pf;
  out.levels.assign(packed_length(h.dimension(), pf), 0);
  for (std::size_t i = 0; i < h.dimension(); ++i)
    out.levels[i / pf] += static_cast<std::uint8_t>(h.bit(i));
  return out;
}

std::uint32_t bits_per_cell(std::uint32_t pf) {
  check_pf(pf);
  return static_cast<std::uint32_t>(std::bit_width(pf));
}

void write_packed_library(std::ostream& out, const PackedLibraryHeader& h,
                          std::span<const std::string> ids,
                          std::span<const PackedVector> rows) {
  require(ids.size() == rows.size(), "id and row counts differ");
  const std::size_t len = packed_length(h.hdc.dimension, h.pf);
  const std::uint32_t bpc = bits_per_cell(h.pf);

  binio::put_magic(out, "DBPL");
  binio::put<std::uint32_t>(out, kPackedVersion);
  binio::put<std::uint32_t>(out, h.hdc.dimension);
  binio::put<std::uint32_t>(out, h.pf);
  binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(rows.size()));
  binio::put<std::uint32_t>(out, h.hdc.num_ids);
  binio::put<std::uint32_t>(out, h.hdc.num_levels);
  binio::put<std::uint64_t>(out, h.hdc.seed);

  std::vector<char> buf((len * bpc + 7) / 8);
  for (const auto& row : rows) {
    require(row.pf == h.pf && row.levels.size() == len,
            "packed row does not match library header");
    std::fill(buf.begin(), buf.end(), 0);
    std::size_t bitpos = 0;
    for (auto level : row.levels) {
      for (std::uint32_t b = 0; b < bpc; ++b, ++bitpos) {
        if ((level >> b) & 1U)
          buf[bitpos / 8] = static_cast<char>(buf[bitpos / 8] | (1 << (bitpos % 8)));
      }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  for (const auto& id : ids) {
    binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  if (!out) fail(ErrorCode::kIo, "failed writing packed library");
}

void read_packed_library(std::istream& in, PackedLibraryHeader& h,
                         std::vector<std::string>& ids,
                         std::vector<PackedVector>& rows) {
  binio::expect_magic(in, "DBPL");
  const auto version = binio::get<std::uint32_t>(in);
  if (version != kPackedVersion)
    fail(ErrorCode::kParse,
         "unsupported packed library version " + std::to_string(version));
  h.hdc.dimension = binio::get<std::uint32_t>(in);
  h.pf = binio::get<std::uint32_t>(in);
  const auto count = binio::get<std::uint32_t>(in);
  h.hdc.num_ids = binio::get<std::uint32_t>(in);
  h.hdc.num_levels = binio::get<std::uint32_t>(in);
  h.hdc.seed = binio::get<std::uint64_t>(in);
  h.hdc.validate();

  const std::size_t len = packed_length(h.hdc.dimension, h.pf);
  const std::uint32_t bpc = bits_per_cell(h.pf);
  std::vector<unsigned char> buf((len * bpc + 7) / 8);
  rows.clear();
  rows.reserve(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    if (!in.read(reinterpret_cast<char*>(buf.data()),
                 static_cast<std::streamsize>(buf.size())))
      fail(ErrorCode::kParse, "truncated packed library row");
    PackedVector row;
    row.pf = h.pf;
    row.levels.resize(len);
    std::size_t bitpos = 0;
    for (auto& level : row.levels) {
      std::uint32_t v = 0;
      for (std::uint32_t b = 0; b < bpc; ++b, ++bitpos)
        v |= static_cast<std::uint32_t>((buf[bitpos / 8] >> (bitpos % 8)) & 1U) << b;
      if (v > h.pf)
        fail(ErrorCode::kParse, "packed level " + std::to_string(v) +
                                    " exceeds packing factor");
      level = static_cast<std::uint8_t>(v);
    }
    rows.push_back(std::move(row));
  }
  ids.clear();
  ids.reserve(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    const auto n = binio::get<std::uint32_t>(in);
    std::string id(n, '\0');
    if (!in.read(id.data(), n)) fail(ErrorCode::kParse, "truncated id table");
    ids.push_back(std::move(id));
  }
}

}  // namespace dbam
