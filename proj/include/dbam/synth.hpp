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
#include <vector>

#include "dbam/spectra_io.hpp"

namespace dbam {

/// Synthetic open-search benchmark: random binned references and queries
/// derived from them by dropping, adding and re-levelling peaks.
struct SynthParams {
  std::size_t library_size = 1000;
  std::size_t num_queries = 100;
  std::size_t peaks = 50;
  double drop_rate = 0.2;
  double add_rate = 0.1;
  double jitter_rate = 0.3;
  std::uint32_t jitter_max = 2;

  void validate(std::uint32_t num_bins) const;
  friend bool operator==(const SynthParams&, const SynthParams&) = default;
};

struct SynthBenchmark {
  std::vector<BinnedSpectrum> references;
  std::vector<BinnedSpectrum> queries;
  std::vector<std::size_t> sources;  // reference index each query came from
};

std::vector<BinnedSpectrum> synth_references(const SynthParams& p,
                                             std::uint32_t num_bins,
                                             std::uint32_t num_levels,
                                             std::uint64_t seed);

SynthBenchmark synth_benchmark(const SynthParams& p, std::uint32_t num_bins,
                               std::uint32_t num_levels, std::uint64_t seed);

BinnedSpectrum perturb(const BinnedSpectrum& ref, const SynthParams& p,
                       std::uint32_t num_levels, std::uint64_t stream_seed);

}  // namespace dbam
