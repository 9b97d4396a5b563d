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
#include <string_view>
#include <vector>

#include "dbam/spectra_io.hpp"

namespace dbam {

struct HdcParams {
  std::uint32_t dimension = 8192;
  std::uint32_t num_ids = 1;
  std::uint32_t num_levels = 64;
  std::uint64_t seed = 42;

  void validate() const;
  friend bool operator==(const HdcParams&, const HdcParams&) = default;
};

/// Dense binary hypervector stored as little-endian 64-bit words.
class Hypervector {
 public:
  Hypervector() = default;
  explicit Hypervector(std::size_t dimension);

  std::size_t dimension() const noexcept { return dimension_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  bool bit(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  void set_bit(std::size_t i, bool v) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v) words_[i >> 6] |= mask; else words_[i >> 6] &= ~mask;
  }
  void flip_bit(std::size_t i) noexcept {
    words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
  }

  std::size_t popcount() const noexcept;

  Hypervector& operator^=(const Hypervector& other);
  friend Hypervector operator^(Hypervector a, const Hypervector& b) {
    a ^= b;
    return a;
  }
  friend bool operator==(const Hypervector&, const Hypervector&) = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<std::uint64_t> words_;
};

std::size_t hamming(const Hypervector& a, const Hypervector& b);

/// Uniform random hypervector drawn from the counter stream
/// (seed, purpose, index).
Hypervector random_hypervector(std::size_t dimension, std::uint64_t seed,
                               std::string_view purpose, std::uint64_t index);

/// Bitwise majority of the inputs. Dimensions where exactly half of the
/// inputs are set take the bit of `tie_break`.
Hypervector majority(std::span<const Hypervector> inputs,
                     const Hypervector& tie_break);

/// ID and level hypervectors plus the tie-break vector used by the
/// encoder. Immutable after generation.
class ItemMemory {
 public:
  explicit ItemMemory(const HdcParams& p);

  const HdcParams& params() const noexcept { return params_; }
  const Hypervector& id(std::size_t i) const { return ids_.at(i); }
  const Hypervector& level(std::size_t j) const { return levels_.at(j); }
  const Hypervector& tie_break() const noexcept { return tie_; }

  /// Number of positions flipped between consecutive level vectors.
  std::size_t level_step() const noexcept { return level_step_; }

 private:
  HdcParams params_;
  std::vector<Hypervector> ids_;
  std::vector<Hypervector> levels_;
  Hypervector tie_;
  std::size_t level_step_ = 0;
};

ItemMemory gen_item_memory(const HdcParams& p);

/// Majority bundle of I_bin XOR L_level over all entries.
/// Throws Error(kEmptySpectrum) for an empty entry list and
/// kInvalidArgument when an entry is outside the memory.
Hypervector encode(const BinnedSpectrum& b, const ItemMemory& mem);

// Binary dump: "DBHV" magic, u32 version, u32 D, u32 F, u32 Q, u64 seed,
// u32 row count, then rows of D/8 bytes (little-endian words).
void write_hv_rows(std::ostream& out, const HdcParams& p,
                   std::span<const Hypervector> rows);
std::vector<Hypervector> read_hv_rows(std::istream& in, HdcParams& p);

/// Rows are all F id vectors, then Q level vectors, then the tie-break.
void write_item_memory(std::ostream& out, const ItemMemory& mem);

}  // namespace dbam
