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

#include "dbam/hdc.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "binio.hpp"
#include "dbam/error.hpp"
#include "dbam/rng.hpp"

namespace dbam {

namespace {
constexpr std::uint32_t kHvVersion = 1;
}

void HdcParams::validate() const {
  if (dimension < 64 || dimension % 64 != 0)
    fail(ErrorCode::kConfig,
         "hdc: dimension must be a positive multiple of 64");
  if (num_ids < 1) fail(ErrorCode::kConfig, "hdc: need at least one ID vector");
  if (num_levels < 2) fail(ErrorCode::kConfig, "hdc: need at least two levels");
}

Hypervector::Hypervector(std::size_t dimension)
    : dimension_(dimension), words_((dimension + 63) / 64, 0) {}

std::size_t Hypervector::popcount() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

Hypervector& Hypervector::operator^=(const Hypervector& other) {
  require(dimension_ == other.dimension_, "hypervector dimension mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::size_t hamming(const Hypervector& a, const Hypervector& b) {
  require(a.dimension() == b.dimension(), "hypervector dimension mismatch");
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t d = 0;
  for (std::size_t i = 0; i < wa.size(); ++i)
    d += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  return d;
}

Hypervector random_hypervector(std::size_t dimension, std::uint64_t seed,
                               std::string_view purpose, std::uint64_t index) {
  Hypervector hv(dimension);
  const CounterRng rng(seed, purpose, index);
  auto words = hv.words();
  for (std::size_t w = 0; w < words.size(); ++w) words[w] = rng.bits(w);
  if (dimension % 64 != 0)
    words.back() &= (std::uint64_t{1} << (dimension % 64)) - 1;
  return hv;
}

namespace {

// Bit-sliced population counters: plane p holds bit p of the per-dimension
// count, so adding a vector is a ripple-carry over the planes.
class BitCounters {
 public:
  BitCounters(std::size_t words, std::size_t max_count)
      : words_(words),
        planes_(std::max<std::size_t>(1, std::bit_width(max_count))),
        data_(words * planes_, 0) {}

  void add(std::size_t w, std::uint64_t x) noexcept {
    for (std::size_t p = 0; p < planes_ && x != 0; ++p) {
      std::uint64_t& plane = data_[p * words_ + w];
      const std::uint64_t carry = plane & x;
      plane ^= x;
      x = carry;
    }
  }

  // Per-bit (count > t, count == t).
  std::pair<std::uint64_t, std::uint64_t> compare(std::size_t w,
                                                  std::size_t t) const noexcept {
    std::uint64_t gt = 0;
    std::uint64_t eq = ~std::uint64_t{0};
    for (std::size_t p = planes_; p-- > 0;) {
      const std::uint64_t plane = data_[p * words_ + w];
      if ((t >> p) & 1U) {
        eq &= plane;
      } else {
        gt |= eq & plane;
        eq &= ~plane;
      }
    }
    if ((t >> planes_) != 0) return {0, 0};
    return {gt, eq};
  }

 private:
  std::size_t words_;
  std::size_t planes_;
  std::vector<std::uint64_t> data_;
};

Hypervector resolve_majority(const BitCounters& counters, std::size_t count,
                             const Hypervector& tie_break) {
  Hypervector out(tie_break.dimension());
  auto words = out.words();
  const auto tie = tie_break.words();
  const std::size_t half = count / 2;
  const bool even = count % 2 == 0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    const auto [gt, eq] = counters.compare(w, half);
    words[w] = gt | (even ? (eq & tie[w]) : 0);
  }
  return out;
}

}  // namespace

Hypervector majority(std::span<const Hypervector> inputs,
                     const Hypervector& tie_break) {
  require(!inputs.empty(), "majority of an empty set");
  const std::size_t nwords = tie_break.words().size();
  BitCounters counters(nwords, inputs.size());
  for (const auto& hv : inputs) {
    require(hv.dimension() == tie_break.dimension(),
            "hypervector dimension mismatch");
    const auto w = hv.words();
    for (std::size_t i = 0; i < nwords; ++i) counters.add(i, w[i]);
  }
  return resolve_majority(counters, inputs.size(), tie_break);
}

ItemMemory::ItemMemory(const HdcParams& p) : params_(p) {
  p.validate();
  const std::size_t d = p.dimension;

  ids_.reserve(p.num_ids);
  for (std::uint32_t i = 0; i < p.num_ids; ++i)
    ids_.push_back(random_hypervector(d, p.seed, "id", i));

  // Level chain: L_0 is random and each next level flips its own disjoint
  // slice of a seeded permutation of the positions.
  std::vector<std::uint32_t> order(d);
  std::iota(order.begin(), order.end(), 0U);
  SplitMix64 shuffle(mix64(p.seed ^ hash_string("level-order")));
  for (std::size_t i = d - 1; i > 0; --i)
    std::swap(order[i], order[shuffle.below(i + 1)]);

  level_step_ = d / (2 * (p.num_levels - 1));
  levels_.reserve(p.num_levels);
  levels_.push_back(random_hypervector(d, p.seed, "level", 0));
  for (std::uint32_t q = 1; q < p.num_levels; ++q) {
    Hypervector next = levels_.back();
    for (std::size_t k = (q - 1) * level_step_; k < q * level_step_; ++k)
      next.flip_bit(order[k]);
    levels_.push_back(std::move(next));
  }

  tie_ = random_hypervector(d, p.seed, "tie", 0);
}

ItemMemory gen_item_memory(const HdcParams& p) { return ItemMemory(p); }

Hypervector encode(const BinnedSpectrum& b, const ItemMemory& mem) {
  if (b.entries.empty())
    fail(ErrorCode::kEmptySpectrum,
         "spectrum '" + b.id + "' has no entries to encode");
  const auto& p = mem.params();
  const std::size_t nwords = p.dimension / 64;
  BitCounters counters(nwords, b.entries.size());
  for (const auto& e : b.entries) {
    if (e.bin >= p.num_ids || e.level >= p.num_levels) {
      fail(ErrorCode::kInvalidArgument,
           "spectrum '" + b.id + "' entry (" + std::to_string(e.bin) + ", " +
               std::to_string(e.level) + ") outside item memory (" +
               std::to_string(p.num_ids) + " ids, " +
               std::to_string(p.num_levels) + " levels)");
    }
    const auto id = mem.id(e.bin).words();
    const auto lv = mem.level(e.level).words();
    for (std::size_t w = 0; w < nwords; ++w) counters.add(w, id[w] ^ lv[w]);
  }
  return resolve_majority(counters, b.entries.size(), mem.tie_break());
}

void write_hv_rows(std::ostream& out, const HdcParams& p,
                   std::span<const Hypervector> rows) {
  binio::put_magic(out, "DBHV");
  binio::put<std::uint32_t>(out, kHvVersion);
  binio::put<std::uint32_t>(out, p.dimension);
  binio::put<std::uint32_t>(out, p.num_ids);
  binio::put<std::uint32_t>(out, p.num_levels);
  binio::put<std::uint64_t>(out, p.seed);
  binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(rows.size()));
  for (const auto& hv : rows) {
    require(hv.dimension() == p.dimension, "row dimension mismatch");
    for (auto w : hv.words()) binio::put<std::uint64_t>(out, w);
  }
  if (!out) fail(ErrorCode::kIo, "failed writing hypervector rows");
}

std::vector<Hypervector> read_hv_rows(std::istream& in, HdcParams& p) {
  binio::expect_magic(in, "DBHV");
  const auto version = binio::get<std::uint32_t>(in);
  if (version != kHvVersion)
    fail(ErrorCode::kParse,
         "unsupported hypervector file version " + std::to_string(version));
  p.dimension = binio::get<std::uint32_t>(in);
  p.num_ids = binio::get<std::uint32_t>(in);
  p.num_levels = binio::get<std::uint32_t>(in);
  p.seed = binio::get<std::uint64_t>(in);
  p.validate();
  const auto count = binio::get<std::uint32_t>(in);
  std::vector<Hypervector> rows;
  rows.reserve(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    Hypervector hv(p.dimension);
    for (auto& w : hv.words()) w = binio::get<std::uint64_t>(in);
    rows.push_back(std::move(hv));
  }
  return rows;
}

void write_item_memory(std::ostream& out, const ItemMemory& mem) {
  const auto& p = mem.params();
  std::vector<Hypervector> rows;
  rows.reserve(p.num_ids + p.num_levels + 1);
  for (std::uint32_t i = 0; i < p.num_ids; ++i) rows.push_back(mem.id(i));
  for (std::uint32_t j = 0; j < p.num_levels; ++j) rows.push_back(mem.level(j));
  rows.push_back(mem.tie_break());
  write_hv_rows(out, p, rows);
}

}  // namespace dbam
