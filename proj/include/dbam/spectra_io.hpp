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
#include <string>
#include <vector>

namespace dbam {

struct Peak {
  double mz = 0.0;
  double intensity = 0.0;
};

/// A centroided MS/MS spectrum as read from disk. Peaks are sorted by m/z.
struct Spectrum {
  std::string id;
  double precursor_mz = 0.0;
  int charge = 0;
  std::vector<Peak> peaks;
};

struct PreprocessConfig {
  double mz_min = 101.0;
  double mz_max = 1500.0;
  double bin_width = 1.0005079;
  std::size_t max_peaks = 50;
  double min_intensity_frac = 0.01;
  std::uint32_t intensity_levels = 64;

  void validate() const;

  /// Number of m/z bins F covering [mz_min, mz_max).
  std::uint32_t num_bins() const;

  friend bool operator==(const PreprocessConfig&, const PreprocessConfig&) = default;
};

struct BinEntry {
  std::uint32_t bin = 0;
  std::uint32_t level = 0;

  friend bool operator==(const BinEntry&, const BinEntry&) = default;
};

/// Sparse (bin, level) representation fed to the hypervector encoder.
/// Entries are strictly increasing in bin index.
struct BinnedSpectrum {
  std::string id;
  std::vector<BinEntry> entries;
  std::uint32_t num_bins = 0;
};

/// Parses MGF text. Unknown header keys and lines outside BEGIN/END IONS
/// blocks are ignored; an empty stream yields an empty list. Throws
/// ParseError carrying the 1-based line number on malformed input.
std::vector<Spectrum> parse_mgf(std::istream& in);
std::vector<Spectrum> read_mgf_file(const std::string& path);

/// Throws Error(kEmptySpectrum) when no peak survives filtering.
BinnedSpectrum preprocess(const Spectrum& s, const PreprocessConfig& cfg);

/// Debug dump: one object per spectrum with id, num_bins and
/// [bin, level] pairs.
std::string binned_to_json(const std::vector<BinnedSpectrum>& spectra);

}  // namespace dbam
