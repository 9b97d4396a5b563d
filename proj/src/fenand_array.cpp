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

#include "dbam/fenand_array.hpp"

#include <cmath>
#include <string>

#include "dbam/error.hpp"

namespace dbam {

void ArrayGeometry::validate() const {
  if (wordlines < 1 || bitlines < 1 || blocks < 1 || planes < 1)
    fail(ErrorCode::kConfig, "geometry: all dimensions must be at least 1");
}

void CostParams::validate() const {
  if (!(t_read > 0.0) || !(e_read > 0.0) || !(z_scale_k > 0.0))
    fail(ErrorCode::kConfig, "cost: parameters must be positive");
}

std::size_t folds_per_hv(std::size_t packed_length, std::uint32_t wordlines) {
  require(wordlines >= 1, "wordlines must be at least 1");
  return (packed_length + wordlines - 1) / wordlines;
}

ArrayLayout map_library(std::size_t references, std::size_t packed_length,
                        const ArrayGeometry& g) {
  g.validate();
  const std::size_t folds = folds_per_hv(packed_length, g.wordlines);
  const std::uint64_t required = std::uint64_t{references} * folds;
  if (required > g.total_strings())
    throw CapacityError(required, g.total_strings());

  // Next free bitline per (plane, block).
  std::vector<std::uint32_t> next_free(std::size_t{g.planes} * g.blocks, 0);
  std::vector<StringAddress> assignment;
  assignment.reserve(required);

  for (std::size_t r = 0; r < references; ++r) {
    const std::uint32_t home_plane = static_cast<std::uint32_t>(r % g.planes);
    for (std::size_t f = 0; f < folds; ++f) {
      const std::uint32_t home_block = static_cast<std::uint32_t>(f % g.blocks);
      bool placed = false;
      for (std::uint32_t dp = 0; dp < g.planes && !placed; ++dp) {
        const std::uint32_t plane = (home_plane + dp) % g.planes;
        for (std::uint32_t db = 0; db < g.blocks && !placed; ++db) {
          const std::uint32_t block = (home_block + db) % g.blocks;
          auto& free = next_free[std::size_t{plane} * g.blocks + block];
          if (free < g.bitlines) {
            assignment.push_back({plane, block, free++});
            placed = true;
          }
        }
      }
      // Unreachable given the capacity check above.
      if (!placed) throw CapacityError(required, g.total_strings());
    }
  }
  return ArrayLayout(g, references, folds, std::move(assignment));
}

OpCounters count_ops_dbam(std::uint64_t dimension, std::uint32_t pf,
                          std::uint32_t m) {
  require(dimension >= 1 && pf >= 1 && m >= 1,
          "operation counts need positive parameters");
  const std::uint64_t cells = (dimension + pf - 1) / pf;
  OpCounters c;
  c.subsets_evaluated = (cells + m - 1) / m;
  c.sensing_reads = 2 * c.subsets_evaluated;
  c.wordline_activations = std::uint64_t{m} * c.sensing_reads;
  return c;
}

OpCounters count_ops_mlc_baseline(std::uint64_t dimension, std::uint32_t pf) {
  require(dimension >= 1 && pf >= 1 && pf < 64,
          "operation counts need positive parameters");
  const std::uint64_t cells = (dimension + pf - 1) / pf;
  OpCounters c;
  c.sensing_reads = ((std::uint64_t{1} << pf) - 1) * cells;
  c.wordline_activations = c.sensing_reads;
  return c;
}

double speedup(std::uint32_t m, std::uint32_t pf) {
  require(m >= 1 && pf >= 1, "speedup needs positive parameters");
  return m * (std::ldexp(1.0, static_cast<int>(pf)) - 1.0) / 2.0;
}

CostEstimate cost_report(const OpCounters& per_reference, const CostParams& p,
                         std::uint64_t references,
                         std::uint64_t parallel_strings) {
  require(parallel_strings >= 1, "parallel_strings must be at least 1");
  const std::uint64_t passes =
      (references + parallel_strings - 1) / parallel_strings;
  const auto reads = static_cast<double>(per_reference.sensing_reads);
  return {reads * p.t_read * static_cast<double>(passes),
          reads * p.e_read * static_cast<double>(references)};
}

}  // namespace dbam
