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

#include "dbam/spectra_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>

#include <json.hpp>

#include "dbam/error.hpp"

namespace dbam {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) ==
                  std::toupper(static_cast<unsigned char>(y));
         });
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// "2+", "3-", "2", "2+ and 3+" -> first signed integer.
int parse_charge(std::string_view v) {
  std::size_t i = 0;
  while (i < v.size() && !std::isdigit(static_cast<unsigned char>(v[i]))) ++i;
  int value = 0;
  auto [ptr, ec] = std::from_chars(v.data() + i, v.data() + v.size(), value);
  if (ec != std::errc()) return 0;
  if (ptr < v.data() + v.size() && *ptr == '-') value = -value;
  return value;
}

void apply_header(Spectrum& s, std::string_view key, std::string_view value,
                  std::size_t line) {
  if (iequals(key, "TITLE")) {
    s.id = std::string(value);
  } else if (iequals(key, "PEPMASS")) {
    const auto toks = split_ws(value);
    if (toks.empty() || !parse_double(toks.front(), s.precursor_mz)) {
      throw ParseError(line, "invalid PEPMASS value '" + std::string(value) +
                                 "'");
    }
  } else if (iequals(key, "CHARGE")) {
    s.charge = parse_charge(value);
  }
}

}  // namespace

void PreprocessConfig::validate() const {
  if (!(mz_min < mz_max))
    fail(ErrorCode::kConfig, "preprocess: mz_min must be below mz_max");
  if (!(bin_width > 0.0))
    fail(ErrorCode::kConfig, "preprocess: bin_width must be positive");
  if (max_peaks < 1)
    fail(ErrorCode::kConfig, "preprocess: max_peaks must be at least 1");
  if (!(min_intensity_frac >= 0.0 && min_intensity_frac <= 1.0))
    fail(ErrorCode::kConfig,
         "preprocess: min_intensity_frac must lie in [0, 1]");
  if (intensity_levels < 2)
    fail(ErrorCode::kConfig, "preprocess: intensity levels must be >= 2");
}

std::uint32_t PreprocessConfig::num_bins() const {
  return static_cast<std::uint32_t>(
      std::ceil((mz_max - mz_min) / bin_width));
}

std::vector<Spectrum> parse_mgf(std::istream& in) {
  std::vector<Spectrum> out;
  std::string raw;
  std::size_t line_no = 0;
  std::size_t block_start = 0;
  bool in_block = false;
  Spectrum cur;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';' ||
        line.front() == '!') {
      continue;
    }
    if (iequals(line, "BEGIN IONS")) {
      if (in_block) {
        throw ParseError(block_start,
                         "BEGIN IONS without matching END IONS (next block "
                         "starts at line " + std::to_string(line_no) + ")");
      }
      in_block = true;
      block_start = line_no;
      cur = Spectrum{};
      continue;
    }
    if (iequals(line, "END IONS")) {
      if (!in_block) throw ParseError(line_no, "END IONS outside of a block");
      if (cur.peaks.empty()) throw ParseError(line_no, "spectrum has no peaks");
      if (cur.id.empty()) cur.id = "spectrum_" + std::to_string(out.size());
      std::stable_sort(cur.peaks.begin(), cur.peaks.end(),
                       [](const Peak& a, const Peak& b) { return a.mz < b.mz; });
      out.push_back(std::move(cur));
      cur = Spectrum{};
      in_block = false;
      continue;
    }
    if (!in_block) continue;  // global parameters such as MASS=Monoisotopic

    const auto eq = line.find('=');
    if (eq != std::string_view::npos &&
        std::isalpha(static_cast<unsigned char>(line.front()))) {
      apply_header(cur, trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
                   line_no);
      continue;
    }

    const auto toks = split_ws(line);
    Peak p;
    if (toks.size() < 2 || !parse_double(toks[0], p.mz) ||
        !parse_double(toks[1], p.intensity)) {
      throw ParseError(line_no,
                       "malformed peak line '" + std::string(line) + "'");
    }
    if (p.intensity < 0.0)
      throw ParseError(line_no, "negative peak intensity");
    cur.peaks.push_back(p);
  }
  if (in_block)
    throw ParseError(block_start, "BEGIN IONS without matching END IONS");
  return out;
}

std::vector<Spectrum> read_mgf_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open MGF file '" + path + "'");
  try {
    return parse_mgf(in);
  } catch (const ParseError& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

BinnedSpectrum preprocess(const Spectrum& s, const PreprocessConfig& cfg) {
  cfg.validate();

  std::vector<Peak> kept;
  kept.reserve(s.peaks.size());
  for (const Peak& p : s.peaks) {
    if (p.mz >= cfg.mz_min && p.mz < cfg.mz_max && p.intensity > 0.0)
      kept.push_back(p);
  }
  if (kept.empty())
    fail(ErrorCode::kEmptySpectrum,
         "spectrum '" + s.id + "' has no peaks inside the m/z range");

  double base = 0.0;
  for (const Peak& p : kept) base = std::max(base, p.intensity);
  const double floor_intensity = cfg.min_intensity_frac * base;
  std::erase_if(kept, [&](const Peak& p) { return p.intensity < floor_intensity; });

  // Highest intensity first; equal intensities keep the lower m/z.
  std::stable_sort(kept.begin(), kept.end(), [](const Peak& a, const Peak& b) {
    return a.intensity > b.intensity;
  });
  if (kept.size() > cfg.max_peaks) kept.resize(cfg.max_peaks);

  const double top = std::sqrt(kept.front().intensity);
  const std::uint32_t bins = cfg.num_bins();
  const std::uint32_t q = cfg.intensity_levels;

  std::vector<BinEntry> entries;
  entries.reserve(kept.size());
  for (const Peak& p : kept) {
    const double norm = std::sqrt(p.intensity) / top;
    auto bin = static_cast<std::uint32_t>(
        std::floor((p.mz - cfg.mz_min) / cfg.bin_width));
    bin = std::min(bin, bins - 1);
    const auto level = std::min<std::uint32_t>(
        q - 1, static_cast<std::uint32_t>(std::floor(norm * q)));
    entries.push_back({bin, level});
  }

  std::sort(entries.begin(), entries.end(),
            [](const BinEntry& a, const BinEntry& b) {
              return a.bin != b.bin ? a.bin < b.bin : a.level > b.level;
            });
  // Collisions keep the highest level, which sorts first within a bin.
  entries.erase(std::unique(entries.begin(), entries.end(),
                            [](const BinEntry& a, const BinEntry& b) {
                              return a.bin == b.bin;
                            }),
                entries.end());

  return BinnedSpectrum{s.id, std::move(entries), bins};
}

std::string binned_to_json(const std::vector<BinnedSpectrum>& spectra) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : spectra) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : b.entries) entries.push_back({e.bin, e.level});
    arr.push_back({{"id", b.id}, {"num_bins", b.num_bins}, {"entries", entries}});
  }
  return arr.dump(1);
}

}  // namespace dbam
