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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dbam/dbam_engine.hpp"
#include "dbam/fenand_array.hpp"
#include "dbam/hdc.hpp"
#include "dbam/packing.hpp"
#include "dbam/spectra_io.hpp"

namespace dbam {

/// Packed reference vectors plus the encoder parameters needed to bring
/// queries into the same space. Raw hypervectors are kept only when the
/// exact-distance oracle is wanted.
struct Library {
  HdcParams params;
  std::uint32_t pf = 1;
  std::vector<std::string> ids;
  std::vector<PackedVector> packed;
  std::vector<std::uint64_t> noise_keys;  // one per reference, from its id
  std::optional<std::vector<Hypervector>> raw;

  std::size_t size() const noexcept { return ids.size(); }
  std::size_t packed_length() const noexcept {
    return dbam::packed_length(params.dimension, pf);
  }
};

Library build_library(std::span<const BinnedSpectrum> spectra,
                      const HdcParams& p, std::uint32_t pf, bool keep_raw,
                      unsigned threads = 1);

/// Packs already-encoded hypervectors. Used to re-pack one encoded set at
/// several packing factors.
Library library_from_hypervectors(std::vector<std::string> ids,
                                  std::span<const Hypervector> hvs,
                                  const HdcParams& p, std::uint32_t pf,
                                  bool keep_raw, unsigned threads = 1);

/// Writes the packed library and, when `raw_path` is non-empty and raw
/// vectors are present, the hypervector sidecar. Both writes are atomic.
void save_library(const Library& lib, const std::string& path,
                  const std::string& raw_path = {});
Library load_library(const std::string& path, const std::string& raw_path = {});

struct RankedHit {
  std::string id;
  std::uint64_t score = 0;
  std::optional<std::uint64_t> oracle_similarity;
  friend bool operator==(const RankedHit&, const RankedHit&) = default;
};

struct OracleHit {
  std::string id;
  std::uint64_t similarity = 0;  // D - Hamming
  friend bool operator==(const OracleHit&, const OracleHit&) = default;
};

struct SearchReport {
  std::string query_id;
  std::size_t k = 0;
  std::vector<RankedHit> ranked;  // score desc, then id asc
  OpCounters counters;
  std::optional<std::vector<OracleHit>> oracle_ranked;  // top-k, same order
};

struct EvalSummary {
  double recall_at_1 = 0.0;
  double recall_at_k = 0.0;
  std::uint64_t identification_count = 0;
  std::uint64_t total_queries = 0;
};

/// Query-side state for one library: the item memory used to encode
/// queries plus the scoring and oracle routines.
class SearchEngine {
 public:
  explicit SearchEngine(const Library& lib, unsigned threads = 1);

  const Library& library() const noexcept { return lib_; }
  Hypervector encode_query(const BinnedSpectrum& q) const;

  SearchReport search(const BinnedSpectrum& query, const DbamConfig& cfg,
                      std::size_t k, bool with_oracle = false) const;
  SearchReport search_encoded(const std::string& query_id,
                              const Hypervector& query_hv,
                              const DbamConfig& cfg, std::size_t k,
                              bool with_oracle, unsigned threads) const;

  /// Similarity D - Hamming against every reference, in library order.
  /// Throws when the library carries no raw vectors.
  std::vector<OracleHit> exact_hamming(const Hypervector& query_hv) const;

  EvalSummary evaluate(std::span<const BinnedSpectrum> queries,
                       const DbamConfig& cfg, std::size_t k) const;
  EvalSummary evaluate_encoded(std::span<const Hypervector> queries,
                               const DbamConfig& cfg, std::size_t k) const;

 private:
  void check_config(const DbamConfig& cfg) const;

  const Library& lib_;
  ItemMemory memory_;
  unsigned threads_;
};

/// Indices of the best `k` entries by value desc, then id asc.
std::vector<std::size_t> top_k(std::span<const std::uint64_t> values,
                               std::span<const std::string> ids,
                               std::size_t k);

SearchReport search(const BinnedSpectrum& query, const Library& lib,
                    const DbamConfig& cfg, std::size_t k);
std::vector<OracleHit> exact_hamming(const Hypervector& query_hv,
                                     const Library& lib);
EvalSummary evaluate(std::span<const BinnedSpectrum> queries,
                     const Library& lib, const DbamConfig& cfg, std::size_t k);

}  // namespace dbam
