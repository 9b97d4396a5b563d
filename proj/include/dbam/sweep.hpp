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
#include <functional>
#include <optional>
#include <vector>

#include "dbam/dbam_engine.hpp"
#include "dbam/hdc.hpp"
#include "dbam/synth.hpp"

namespace dbam {

struct SweepGrid {
  std::vector<double> alphas{0.5, 1.5, 2.5};
  std::vector<std::uint32_t> ms{1, 2, 4, 8, 16};
  std::vector<std::uint32_t> pfs{2, 3, 4};

  void validate() const;
  std::size_t size() const noexcept {
    return alphas.size() * ms.size() * pfs.size();
  }
  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

struct SweepRow {
  double alpha = 0.0;
  std::uint32_t m = 1;
  std::uint32_t pf = 1;
  double recall_at_1 = 0.0;  // pooled over trials
  double recall_at_k = 0.0;
  std::uint64_t identification_count = 0;  // summed over trials
  std::uint64_t total_queries = 0;
  std::uint64_t dbam_reads = 0;  // per reference
  std::uint64_t mlc_reads = 0;   // per reference
  double read_ratio = 0.0;       // mlc_reads / dbam_reads
  double speedup = 0.0;          // closed form
};

/// Produces the references and queries for one trial.
using BenchmarkSource = std::function<SynthBenchmark(std::size_t trial)>;

/// Full Cartesian sweep over the grid. Each trial is encoded once; the
/// oracle is the exact Hamming top-1. Rows are ordered pf, alpha, m.
std::vector<SweepRow> sweep(const BenchmarkSource& source, const HdcParams& p,
                            const SweepGrid& grid, std::size_t k,
                            std::size_t trials,
                            const std::optional<NoiseModel>& noise = {},
                            unsigned threads = 1);

}  // namespace dbam
