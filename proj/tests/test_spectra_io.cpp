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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "dbam/error.hpp"
#include "dbam/spectra_io.hpp"

using namespace dbam;

namespace {

std::vector<Spectrum> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_mgf(in);
}

PreprocessConfig small_cfg() {
  PreprocessConfig c;
  c.mz_min = 100.0;
  c.mz_max = 200.0;
  c.bin_width = 1.0;
  c.max_peaks = 10;
  c.min_intensity_frac = 0.0;
  c.intensity_levels = 8;
  return c;
}

}  // namespace

TEST_CASE("parse_mgf maps a block to a spectrum") {
  const auto s = parse(
      "BEGIN IONS\nTITLE=scan=7\nPEPMASS=512.25 1000\nCHARGE=2+\n"
      "100.0 5.0\n200.0 1.0\nEND IONS\n");
  REQUIRE(s.size() == 1);
  CHECK(s[0].id == "scan=7");
  CHECK(s[0].precursor_mz == doctest::Approx(512.25));
  CHECK(s[0].charge == 2);
  REQUIRE(s[0].peaks.size() == 2);
  CHECK(s[0].peaks[0].mz == 100.0);
  CHECK(s[0].peaks[0].intensity == 5.0);
  CHECK(s[0].peaks[1].mz == 200.0);
}

TEST_CASE("parse_mgf sorts peaks by m/z") {
  const auto s = parse("BEGIN IONS\n200.0 1.0\n100.0 5.0\nEND IONS\n");
  REQUIRE(s.size() == 1);
  CHECK(s[0].peaks[0].mz == 100.0);
  CHECK(s[0].peaks[1].mz == 200.0);
  CHECK(s[0].peaks[0].intensity == 5.0);
}

TEST_CASE("parse_mgf ignores unknown headers, comments and globals") {
  const auto s = parse(
      "# exported\nMASS=Monoisotopic\n\nBEGIN IONS\nRTINSECONDS=12.5\n"
      "SCANS=4\nTITLE=a\n150 2 1+\nEND IONS\nBEGIN IONS\n120\t3\nEND IONS\n");
  REQUIRE(s.size() == 2);
  CHECK(s[0].id == "a");
  CHECK(s[0].peaks.size() == 1);
  CHECK(s[1].id == "spectrum_1");
  CHECK(s[1].charge == 0);
}

TEST_CASE("parse_mgf on empty input returns nothing") {
  CHECK(parse("").empty());
  CHECK(parse("\n\n# only a comment\n").empty());
}

TEST_CASE("parse_mgf reports missing END IONS with a line number") {
  try {
    parse("BEGIN IONS\nTITLE=x\n100 1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.code() == ErrorCode::kParse);
  }
  try {
    parse("BEGIN IONS\n100 1\nBEGIN IONS\n100 1\nEND IONS\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("parse_mgf rejects non-numeric peaks") {
  try {
    parse("BEGIN IONS\n100 1\n1O1.5 abc\nEND IONS\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse("BEGIN IONS\n100 -1\nEND IONS\n"), ParseError);
  CHECK_THROWS_AS(parse("BEGIN IONS\nTITLE=x\nEND IONS\n"), ParseError);
  CHECK_THROWS_AS(parse("END IONS\n"), ParseError);
}

TEST_CASE("preprocess: single peak at mz_min maps to bin 0, top level") {
  const auto cfg = small_cfg();
  const Spectrum s{"s", 0, 0, {{100.0, 3.7}}};
  const auto b = preprocess(s, cfg);
  REQUIRE(b.entries.size() == 1);
  CHECK(b.entries[0] == BinEntry{0, cfg.intensity_levels - 1});
  CHECK(b.num_bins == 100);
}

TEST_CASE("preprocess: colliding bins keep the higher level") {
  auto cfg = small_cfg();
  // Levels floor(sqrt(I / 100) * 8): I = 100 -> 7 (top), I = 25 -> 4,
  // I = 49 -> 5. The last two share bin 50.
  const Spectrum s{"s", 0, 0, {{110.0, 100.0}, {150.2, 25.0}, {150.7, 49.0}}};
  const auto b = preprocess(s, cfg);
  REQUIRE(b.entries.size() == 2);
  CHECK(b.entries[0] == BinEntry{10, 7});
  CHECK(b.entries[1] == BinEntry{50, 5});
}

TEST_CASE("preprocess: m/z range is half-open") {
  const auto cfg = small_cfg();
  const Spectrum s{"s", 0, 0, {{150.0, 1.0}, {200.0, 50.0}}};
  const auto b = preprocess(s, cfg);
  REQUIRE(b.entries.size() == 1);
  CHECK(b.entries[0].bin == 50);
  CHECK(b.entries[0].level == 7);  // base peak after the 200.0 drop
  CHECK_THROWS_AS(preprocess(Spectrum{"x", 0, 0, {{200.0, 1.0}}}, cfg), Error);
}

TEST_CASE("preprocess: intensity floor and peak cap") {
  auto cfg = small_cfg();
  cfg.min_intensity_frac = 0.1;
  cfg.max_peaks = 2;
  const Spectrum s{"s",
                   0,
                   0,
                   {{101, 100.0}, {102, 5.0}, {103, 50.0}, {104, 60.0}}};
  const auto b = preprocess(s, cfg);
  REQUIRE(b.entries.size() == 2);
  CHECK(b.entries[0].bin == 1);  // 100
  CHECK(b.entries[1].bin == 4);  // 60 beats 50; 5 is under the floor
}

TEST_CASE("preprocess: no surviving peak is an empty-spectrum error") {
  const auto cfg = small_cfg();
  try {
    preprocess(Spectrum{"gone", 0, 0, {{10.0, 1.0}, {500.0, 1.0}}}, cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptySpectrum);
  }
}

TEST_CASE("preprocess invariants hold for random spectra") {
  std::mt19937_64 rng(11);
  PreprocessConfig cfg;  // defaults
  const auto bins = cfg.num_bins();
  for (int trial = 0; trial < 200; ++trial) {
    Spectrum s{"r", 0, 0, {}};
    const int n = 1 + static_cast<int>(rng() % 300);
    for (int i = 0; i < n; ++i) {
      s.peaks.push_back({50.0 + (rng() % 150000) / 100.0,
                         static_cast<double>(rng() % 100000) + 1.0});
    }
    std::sort(s.peaks.begin(), s.peaks.end(),
              [](const Peak& a, const Peak& b) { return a.mz < b.mz; });
    BinnedSpectrum b;
    try {
      b = preprocess(s, cfg);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kEmptySpectrum);
      continue;
    }
    CHECK(b.entries.size() <= std::min<std::size_t>(cfg.max_peaks, bins));
    for (std::size_t i = 0; i < b.entries.size(); ++i) {
      CHECK(b.entries[i].bin < bins);
      CHECK(b.entries[i].level < cfg.intensity_levels);
      if (i > 0) CHECK(b.entries[i - 1].bin < b.entries[i].bin);
    }
  }
}

TEST_CASE("preprocess is idempotent on filtered one-peak-per-bin spectra") {
  std::mt19937_64 rng(5);
  PreprocessConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    Spectrum s{"r", 0, 0, {}};
    for (int i = 0; i < 120; ++i)
      s.peaks.push_back({cfg.mz_min + (rng() % 139000) / 100.0,
                         static_cast<double>(rng() % 1000) + 1.0});
    std::sort(s.peaks.begin(), s.peaks.end(),
              [](const Peak& a, const Peak& b) { return a.mz < b.mz; });
    const auto first = preprocess(s, cfg);

    // Keep only the strongest original peak of each emitted bin.
    Spectrum again{"r", 0, 0, {}};
    for (const auto& e : first.entries) {
      Peak best{0.0, -1.0};
      for (const auto& p : s.peaks) {
        const auto bin = static_cast<std::uint32_t>(
            std::floor((p.mz - cfg.mz_min) / cfg.bin_width));
        if (p.mz >= cfg.mz_min && bin == e.bin && p.intensity > best.intensity)
          best = p;
      }
      again.peaks.push_back(best);
    }
    const auto second = preprocess(again, cfg);
    REQUIRE(second.entries.size() == first.entries.size());
    for (std::size_t i = 0; i < first.entries.size(); ++i)
      CHECK(second.entries[i] == first.entries[i]);
  }
}

TEST_CASE("binned_to_json emits id and index/level pairs") {
  const BinnedSpectrum b{"x", {{1, 2}, {5, 0}}, 10};
  const auto text = binned_to_json({b});
  CHECK(text.find("\"id\": \"x\"") != std::string::npos);
  CHECK(text.find("\"entries\"") != std::string::npos);
}
