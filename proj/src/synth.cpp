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

#include "dbam/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "dbam/error.hpp"
#include "dbam/rng.hpp"

namespace dbam {

namespace {

std::string padded(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%06zu", prefix, i);
  return buf;
}

void sort_entries(std::vector<BinEntry>& e) {
  std::sort(e.begin(), e.end(),
            [](const BinEntry& a, const BinEntry& b) { return a.bin < b.bin; });
}

bool has_bin(const std::vector<BinEntry>& e, std::uint32_t bin) {
  return std::any_of(e.begin(), e.end(),
                     [&](const BinEntry& x) { return x.bin == bin; });
}

}  // namespace

void SynthParams::validate(std::uint32_t num_bins) const {
  if (library_size < 1)
    fail(ErrorCode::kConfig, "synth: library_size must be at least 1");
  if (peaks < 1 || peaks > num_bins)
    fail(ErrorCode::kConfig, "synth: peaks must lie in [1, number of bins]");
  for (double r : {drop_rate, add_rate, jitter_rate})
    if (!(r >= 0.0 && r <= 1.0))
      fail(ErrorCode::kConfig, "synth: rates must lie in [0, 1]");
}

std::vector<BinnedSpectrum> synth_references(const SynthParams& p,
                                             std::uint32_t num_bins,
                                             std::uint32_t num_levels,
                                             std::uint64_t seed) {
  p.validate(num_bins);
  std::vector<BinnedSpectrum> refs;
  refs.reserve(p.library_size);
  const std::uint64_t base = mix64(seed ^ hash_string("synth-reference"));
  for (std::size_t r = 0; r < p.library_size; ++r) {
    SplitMix64 rng(mix64(base + r));
    BinnedSpectrum s{padded("ref_", r), {}, num_bins};
    s.entries.reserve(p.peaks);
    while (s.entries.size() < p.peaks) {
      const auto bin = static_cast<std::uint32_t>(rng.below(num_bins));
      if (has_bin(s.entries, bin)) continue;
      s.entries.push_back(
          {bin, static_cast<std::uint32_t>(rng.below(num_levels))});
    }
    sort_entries(s.entries);
    refs.push_back(std::move(s));
  }
  return refs;
}

BinnedSpectrum perturb(const BinnedSpectrum& ref, const SynthParams& p,
                       std::uint32_t num_levels, std::uint64_t stream_seed) {
  SplitMix64 rng(stream_seed);
  BinnedSpectrum out{ref.id, {}, ref.num_bins};
  for (const auto& e : ref.entries) {
    if (rng.bernoulli(p.drop_rate)) continue;
    BinEntry moved = e;
    if (p.jitter_max > 0 && rng.bernoulli(p.jitter_rate)) {
      const auto step = static_cast<std::int64_t>(1 + rng.below(p.jitter_max));
      const std::int64_t sign = rng.bernoulli(0.5) ? 1 : -1;
      const std::int64_t level = std::clamp<std::int64_t>(
          static_cast<std::int64_t>(e.level) + sign * step, 0,
          static_cast<std::int64_t>(num_levels) - 1);
      moved.level = static_cast<std::uint32_t>(level);
    }
    out.entries.push_back(moved);
  }
  if (out.entries.empty()) out.entries.push_back(ref.entries.front());

  const auto additions = std::min<std::size_t>(
      static_cast<std::size_t>(
          std::lround(p.add_rate * static_cast<double>(ref.entries.size()))),
      ref.num_bins - ref.entries.size());
  for (std::size_t a = 0; a < additions;) {
    const auto bin = static_cast<std::uint32_t>(rng.below(ref.num_bins));
    if (has_bin(out.entries, bin) || has_bin(ref.entries, bin)) continue;
    out.entries.push_back(
        {bin, static_cast<std::uint32_t>(rng.below(num_levels))});
    ++a;
  }
  sort_entries(out.entries);
  return out;
}

SynthBenchmark synth_benchmark(const SynthParams& p, std::uint32_t num_bins,
                               std::uint32_t num_levels, std::uint64_t seed) {
  SynthBenchmark b;
  b.references = synth_references(p, num_bins, num_levels, seed);
  const std::uint64_t base = mix64(seed ^ hash_string("synth-query"));
  b.queries.reserve(p.num_queries);
  b.sources.reserve(p.num_queries);
  for (std::size_t q = 0; q < p.num_queries; ++q) {
    SplitMix64 pick(mix64(base + 2 * q));
    const auto src = static_cast<std::size_t>(pick.below(p.library_size));
    BinnedSpectrum query =
        perturb(b.references[src], p, num_levels, mix64(base + 2 * q + 1));
    query.id = padded("query_", q);
    b.queries.push_back(std::move(query));
    b.sources.push_back(src);
  }
  return b;
}

}  // namespace dbam
