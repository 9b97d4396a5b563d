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

#include "dbam/sweep.hpp"

#include <cmath>

#include "dbam/error.hpp"
#include "dbam/fenand_array.hpp"
#include "dbam/parallel.hpp"
#include "dbam/search.hpp"

namespace dbam {

void SweepGrid::validate() const {
  if (alphas.empty() || ms.empty() || pfs.empty())
    fail(ErrorCode::kConfig, "sweep: every grid axis needs at least one value");
  for (double a : alphas)
    if (!(a >= 0.0)) fail(ErrorCode::kConfig, "sweep: alpha must be >= 0");
  for (auto m : ms)
    if (m < 1) fail(ErrorCode::kConfig, "sweep: m must be >= 1");
  for (auto pf : pfs)
    if (pf < 1 || pf > kMaxPackingFactor)
      fail(ErrorCode::kConfig, "sweep: packing factor out of range");
}

std::vector<SweepRow> sweep(const BenchmarkSource& source, const HdcParams& p,
                            const SweepGrid& grid, std::size_t k,
                            std::size_t trials,
                            const std::optional<NoiseModel>& noise,
                            unsigned threads) {
  grid.validate();
  require(trials >= 1, "sweep needs at least one trial");
  require(k >= 1, "k must be at least 1");

  std::vector<SweepRow> rows;
  for (auto pf : grid.pfs)
    for (double a : grid.alphas)
      for (auto m : grid.ms) {
        SweepRow r;
        r.alpha = a;
        r.m = m;
        r.pf = pf;
        const OpCounters d = count_ops_dbam(p.dimension, pf, m);
        const OpCounters b = count_ops_mlc_baseline(p.dimension, pf);
        r.dbam_reads = d.sensing_reads;
        r.mlc_reads = b.sensing_reads;
        r.read_ratio = static_cast<double>(b.sensing_reads) /
                       static_cast<double>(d.sensing_reads);
        r.speedup = speedup(m, pf);
        rows.push_back(r);
      }

  std::vector<std::uint64_t> hits_at_k(rows.size(), 0);
  const ItemMemory mem(p);
  for (std::size_t t = 0; t < trials; ++t) {
    const SynthBenchmark bench = source(t);
    if (bench.queries.empty())
      fail(ErrorCode::kInvalidArgument, "sweep trial has no queries");

    std::vector<Hypervector> ref_hvs(bench.references.size());
    parallel_for(ref_hvs.size(), threads, [&](std::size_t i) {
      ref_hvs[i] = encode(bench.references[i], mem);
    });
    std::vector<Hypervector> query_hvs(bench.queries.size());
    parallel_for(query_hvs.size(), threads, [&](std::size_t i) {
      query_hvs[i] = encode(bench.queries[i], mem);
    });
    std::vector<std::string> ids;
    ids.reserve(bench.references.size());
    for (const auto& s : bench.references) ids.push_back(s.id);

    std::size_t row = 0;
    for (auto pf : grid.pfs) {
      const Library lib =
          library_from_hypervectors(ids, ref_hvs, p, pf, true, threads);
      const SearchEngine engine(lib, threads);
      for (double a : grid.alphas)
        for (auto m : grid.ms) {
          DbamConfig cfg;
          cfg.alpha_pos = cfg.alpha_neg = a;
          cfg.m = m;
          cfg.pf = pf;
          cfg.noise = noise;
          const EvalSummary s = engine.evaluate_encoded(query_hvs, cfg, k);
          hits_at_k[row] += static_cast<std::uint64_t>(
              std::llround(s.recall_at_k * static_cast<double>(s.total_queries)));
          SweepRow& r = rows[row++];
          r.identification_count += s.identification_count;
          r.total_queries += s.total_queries;
        }
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto total = static_cast<double>(rows[i].total_queries);
    rows[i].recall_at_1 = static_cast<double>(rows[i].identification_count) / total;
    rows[i].recall_at_k = static_cast<double>(hits_at_k[i]) / total;
  }
  return rows;
}

}  // namespace dbam
