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

#include "dbam/search.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "dbam/error.hpp"
#include "dbam/parallel.hpp"
#include "dbam/report_io.hpp"
#include "dbam/rng.hpp"

namespace dbam {

namespace {

void check_unique(std::span<const std::string> ids) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second)
      fail(ErrorCode::kInvalidArgument, "duplicate reference id '" + id + "'");
}

std::vector<std::uint64_t> noise_keys_for(std::span<const std::string> ids) {
  std::vector<std::uint64_t> keys;
  keys.reserve(ids.size());
  for (const auto& id : ids) keys.push_back(hash_string(id));
  return keys;
}

}  // namespace

Library library_from_hypervectors(std::vector<std::string> ids,
                                  std::span<const Hypervector> hvs,
                                  const HdcParams& p, std::uint32_t pf,
                                  bool keep_raw, unsigned threads) {
  p.validate();
  require(ids.size() == hvs.size(), "id and hypervector counts differ");
  require(!ids.empty(), "library needs at least one reference");
  check_unique(ids);
  Library lib;
  lib.params = p;
  lib.pf = pf;
  lib.packed.resize(hvs.size());
  parallel_for(hvs.size(), threads,
               [&](std::size_t i) { lib.packed[i] = pack(hvs[i], pf); });
  lib.noise_keys = noise_keys_for(ids);
  lib.ids = std::move(ids);
  if (keep_raw) lib.raw.emplace(hvs.begin(), hvs.end());
  return lib;
}

Library build_library(std::span<const BinnedSpectrum> spectra,
                      const HdcParams& p, std::uint32_t pf, bool keep_raw,
                      unsigned threads) {
  require(!spectra.empty(), "library needs at least one spectrum");
  p.validate();
  packed_length(p.dimension, pf);  // validates pf

  std::vector<std::string> ids;
  ids.reserve(spectra.size());
  for (const auto& s : spectra) ids.push_back(s.id);
  check_unique(ids);

  const ItemMemory mem(p);
  std::vector<Hypervector> hvs(spectra.size());
  parallel_for(spectra.size(), threads, [&](std::size_t i) {
    try {
      hvs[i] = encode(spectra[i], mem);
    } catch (const Error& e) {
      throw Error(e.code(), "encoding reference '" + spectra[i].id +
                                "': " + e.what());
    }
  });
  return library_from_hypervectors(std::move(ids), hvs, p, pf, keep_raw,
                                   threads);
}

void save_library(const Library& lib, const std::string& path,
                  const std::string& raw_path) {
  std::ostringstream packed;
  write_packed_library(packed, {lib.params, lib.pf}, lib.ids, lib.packed);
  write_file_atomic(path, packed.str());
  if (!raw_path.empty()) {
    if (!lib.raw)
      fail(ErrorCode::kInvalidArgument,
           "library has no raw hypervectors to write");
    std::ostringstream raw;
    write_hv_rows(raw, lib.params, *lib.raw);
    write_file_atomic(raw_path, raw.str());
  }
}

Library load_library(const std::string& path, const std::string& raw_path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open library '" + path + "'");
  Library lib;
  PackedLibraryHeader h;
  read_packed_library(in, h, lib.ids, lib.packed);
  lib.params = h.hdc;
  lib.pf = h.pf;
  check_unique(lib.ids);
  lib.noise_keys = noise_keys_for(lib.ids);

  if (!raw_path.empty()) {
    std::ifstream rin(raw_path, std::ios::binary);
    if (!rin)
      fail(ErrorCode::kIo, "cannot open hypervector sidecar '" + raw_path + "'");
    HdcParams rp;
    auto rows = read_hv_rows(rin, rp);
    if (!(rp == lib.params) || rows.size() != lib.size())
      fail(ErrorCode::kMismatch, "hypervector sidecar '" + raw_path +
                                     "' does not match library '" + path + "'");
    lib.raw = std::move(rows);
  }
  return lib;
}

std::vector<std::size_t> top_k(std::span<const std::uint64_t> values,
                               std::span<const std::string> ids,
                               std::size_t k) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + take, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (values[a] != values[b]) return values[a] > values[b];
                      return ids[a] < ids[b];
                    });
  order.resize(take);
  return order;
}

SearchEngine::SearchEngine(const Library& lib, unsigned threads)
    : lib_(lib), memory_(lib.params), threads_(std::max(1U, threads)) {}

Hypervector SearchEngine::encode_query(const BinnedSpectrum& q) const {
  try {
    return encode(q, memory_);
  } catch (const Error& e) {
    throw Error(e.code(), "encoding query '" + q.id + "': " + e.what());
  }
}

void SearchEngine::check_config(const DbamConfig& cfg) const {
  cfg.validate();
  if (cfg.pf != lib_.pf)
    fail(ErrorCode::kMismatch,
         "configuration packing factor " + std::to_string(cfg.pf) +
             " does not match library packing factor " +
             std::to_string(lib_.pf));
}

std::vector<OracleHit> SearchEngine::exact_hamming(
    const Hypervector& query_hv) const {
  return dbam::exact_hamming(query_hv, lib_);
}

SearchReport SearchEngine::search_encoded(const std::string& query_id,
                                          const Hypervector& query_hv,
                                          const DbamConfig& cfg, std::size_t k,
                                          bool with_oracle,
                                          unsigned threads) const {
  check_config(cfg);
  require(k >= 1, "k must be at least 1");
  const QueryBounds bounds(pack(query_hv, lib_.pf), cfg);

  const std::size_t n = lib_.size();
  std::vector<std::uint64_t> scores(n);
  std::vector<std::uint64_t> subsets(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const ScoreResult r = bounds.score(lib_.packed[i], lib_.noise_keys[i]);
    scores[i] = r.score;
    subsets[i] = r.num_subsets;
  });

  SearchReport rep;
  rep.query_id = query_id;
  rep.k = k;
  for (std::size_t i : top_k(scores, lib_.ids, k))
    rep.ranked.push_back({lib_.ids[i], scores[i], std::nullopt});

  const std::uint64_t total_subsets =
      std::accumulate(subsets.begin(), subsets.end(), std::uint64_t{0});
  rep.counters.subsets_evaluated = total_subsets;
  rep.counters.sensing_reads = 2 * total_subsets;
  rep.counters.wordline_activations = std::uint64_t{cfg.m} * 2 * total_subsets;

  if (with_oracle) {
    const auto hits = exact_hamming(query_hv);
    std::vector<std::uint64_t> sims(n);
    for (std::size_t i = 0; i < n; ++i) sims[i] = hits[i].similarity;
    std::vector<OracleHit> ranked;
    for (std::size_t i : top_k(sims, lib_.ids, k)) ranked.push_back(hits[i]);
    rep.oracle_ranked = std::move(ranked);
    std::size_t next = 0;
    for (std::size_t i : top_k(scores, lib_.ids, k))
      rep.ranked[next++].oracle_similarity = sims[i];
  }
  return rep;
}

SearchReport SearchEngine::search(const BinnedSpectrum& query,
                                  const DbamConfig& cfg, std::size_t k,
                                  bool with_oracle) const {
  return search_encoded(query.id, encode_query(query), cfg, k, with_oracle,
                        threads_);
}

EvalSummary SearchEngine::evaluate_encoded(std::span<const Hypervector> queries,
                                           const DbamConfig& cfg,
                                           std::size_t k) const {
  if (queries.empty())
    fail(ErrorCode::kInvalidArgument, "evaluation needs at least one query");
  check_config(cfg);
  std::vector<std::uint8_t> hit1(queries.size());
  std::vector<std::uint8_t> hitk(queries.size());
  parallel_for(queries.size(), threads_, [&](std::size_t qi) {
    const SearchReport rep =
        search_encoded({}, queries[qi], cfg, k, true, 1);
    const std::string& truth = rep.oracle_ranked->front().id;
    hit1[qi] = rep.ranked.front().id == truth;
    hitk[qi] = std::any_of(rep.ranked.begin(), rep.ranked.end(),
                           [&](const RankedHit& h) { return h.id == truth; });
  });
  EvalSummary s;
  s.total_queries = queries.size();
  s.identification_count =
      std::accumulate(hit1.begin(), hit1.end(), std::uint64_t{0});
  const auto at_k = std::accumulate(hitk.begin(), hitk.end(), std::uint64_t{0});
  s.recall_at_1 = static_cast<double>(s.identification_count) / queries.size();
  s.recall_at_k = static_cast<double>(at_k) / queries.size();
  return s;
}

EvalSummary SearchEngine::evaluate(std::span<const BinnedSpectrum> queries,
                                   const DbamConfig& cfg, std::size_t k) const {
  if (queries.empty())
    fail(ErrorCode::kInvalidArgument, "evaluation needs at least one query");
  std::vector<Hypervector> hvs(queries.size());
  parallel_for(queries.size(), threads_,
               [&](std::size_t i) { hvs[i] = encode_query(queries[i]); });
  return evaluate_encoded(hvs, cfg, k);
}

SearchReport search(const BinnedSpectrum& query, const Library& lib,
                    const DbamConfig& cfg, std::size_t k) {
  return SearchEngine(lib).search(query, cfg, k, lib.raw.has_value());
}

std::vector<OracleHit> exact_hamming(const Hypervector& query_hv,
                                     const Library& lib) {
  if (!lib.raw)
    fail(ErrorCode::kInvalidArgument,
         "exact Hamming oracle needs raw hypervectors in the library");
  std::vector<OracleHit> out(lib.size());
  for (std::size_t i = 0; i < lib.size(); ++i)
    out[i] = {lib.ids[i],
              query_hv.dimension() - hamming(query_hv, (*lib.raw)[i])};
  return out;
}

EvalSummary evaluate(std::span<const BinnedSpectrum> queries,
                     const Library& lib, const DbamConfig& cfg, std::size_t k) {
  return SearchEngine(lib).evaluate(queries, cfg, k);
}

}  // namespace dbam
