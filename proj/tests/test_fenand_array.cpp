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

#include <doctest.h>

#include <set>

#include "dbam/error.hpp"
#include "dbam/fenand_array.hpp"
#include "dbam/packing.hpp"

using namespace dbam;

TEST_CASE("folds per hypervector") {
  CHECK(folds_per_hv(64, 32) == 2);
  CHECK(folds_per_hv(packed_length(8192, 3), 512) == 6);  // 2731 cells
  CHECK(folds_per_hv(32, 32) == 1);
  CHECK(folds_per_hv(33, 32) == 2);
}

TEST_CASE("map_library capacity error reports required and available") {
  const ArrayGeometry g{32, 5, 2, 1};  // 10 strings
  try {
    map_library(6, 64, g);
    FAIL("expected capacity error");
  } catch (const CapacityError& e) {
    CHECK(e.required() == 12);
    CHECK(e.available() == 10);
    CHECK(e.code() == ErrorCode::kCapacity);
  }
  CHECK_NOTHROW(map_library(5, 64, g));
}

TEST_CASE("map_library round-robin placement") {
  const ArrayGeometry g{32, 4, 3, 2};
  const auto layout = map_library(4, 96, g);  // 3 folds each
  CHECK(layout.folds_per_hv() == 3);
  CHECK(layout.strings_used() == 12);
  // Reference r lives in plane r mod 2, fold f in block f.
  CHECK(layout.at(0, 0) == StringAddress{0, 0, 0});
  CHECK(layout.at(0, 2) == StringAddress{0, 2, 0});
  CHECK(layout.at(1, 1) == StringAddress{1, 1, 0});
  CHECK(layout.at(2, 0) == StringAddress{0, 0, 1});
  CHECK(layout.at(3, 2) == StringAddress{1, 2, 1});
  for (std::size_t r = 0; r < 4; ++r) {
    std::set<std::uint32_t> blocks;
    for (std::size_t f = 0; f < 3; ++f) blocks.insert(layout.at(r, f).block);
    CHECK(blocks.size() == 3);
  }
}

TEST_CASE("map_library is injective even when blocks overflow") {
  // One fold per vector: every reference targets block 0 and spills over.
  for (const ArrayGeometry g : {ArrayGeometry{64, 3, 4, 2}, ArrayGeometry{8, 7, 5, 3}}) {
    const std::size_t len = g.wordlines * 2 - 1;
    const std::size_t folds = folds_per_hv(len, g.wordlines);
    const std::size_t refs = g.total_strings() / folds;
    const auto layout = map_library(refs, len, g);
    std::set<StringAddress> seen;
    for (std::size_t r = 0; r < refs; ++r)
      for (std::size_t f = 0; f < folds; ++f) {
        const auto& a = layout.at(r, f);
        CHECK(a.plane < g.planes);
        CHECK(a.block < g.blocks);
        CHECK(a.bitline < g.bitlines);
        seen.insert(a);
      }
    CHECK(seen.size() == refs * folds);
  }
}

TEST_CASE("count_ops_dbam") {
  const auto a = count_ops_dbam(8192, 3, 4);
  CHECK(a.subsets_evaluated == 683);
  CHECK(a.sensing_reads == 1366);
  CHECK(a.wordline_activations == 4 * 1366);
  CHECK(count_ops_dbam(8192, 1, 1).sensing_reads == 2 * 8192);
  const auto b = count_ops_dbam(12, 3, 2);
  CHECK(b.subsets_evaluated == 2);
  CHECK(b.sensing_reads == 4);
}

TEST_CASE("count_ops_mlc_baseline") {
  CHECK(count_ops_mlc_baseline(3, 3).sensing_reads == 7);
  CHECK(count_ops_mlc_baseline(1, 1).sensing_reads == 1);
  CHECK(count_ops_mlc_baseline(12, 3).sensing_reads == 28);
  CHECK(count_ops_mlc_baseline(12, 3).wordline_activations == 28);
}

TEST_CASE("speedup closed form") {
  CHECK(speedup(4, 3) == 14.0);
  CHECK(speedup(4, 4) == 30.0);
  CHECK(speedup(1, 1) == 0.5);
  CHECK(speedup(16, 2) == 24.0);
}

TEST_CASE("speedup equals the counter ratio when m * pf divides D") {
  for (std::uint32_t m : {1U, 2U, 4U, 8U, 16U})
    for (std::uint32_t pf : {1U, 2U, 3U, 4U, 5U, 6U}) {
      const std::uint64_t d = 12 * 5 * 16 * 7;  // divisible by every m*pf
      const double ratio =
          static_cast<double>(count_ops_mlc_baseline(d, pf).sensing_reads) /
          static_cast<double>(count_ops_dbam(d, pf, m).sensing_reads);
      CHECK(ratio == speedup(m, pf));
    }
}

TEST_CASE("cost_report") {
  const CostParams p{1e-6, 2e-12, 4.0};
  const OpCounters one{1, 1, 0};
  auto c = cost_report(one, p, 1, 1);
  CHECK(c.latency == doctest::Approx(1e-6));
  CHECK(c.energy == doctest::Approx(2e-12));

  const OpCounters reads{100, 100, 50};
  const auto single = cost_report(reads, p, 8, 8);
  CHECK(cost_report(reads, p, 8, 16).latency == single.latency);
  CHECK(cost_report(reads, p, 16, 8).latency == doctest::Approx(2 * single.latency));
  CHECK(cost_report(reads, p, 16, 8).energy == doctest::Approx(2 * single.energy));
  CHECK_THROWS_AS(cost_report(reads, p, 1, 0), Error);
}

TEST_CASE("counter merge is commutative") {
  OpCounters a{1, 2, 3}, b{10, 20, 30};
  OpCounters x = a, y = b;
  x += b;
  y += a;
  CHECK(x == y);
  CHECK(a.scaled(3) == OpCounters{3, 6, 9});
}
