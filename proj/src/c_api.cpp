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

#include "dbam/dbam.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "dbam/error.hpp"
#include "dbam/fenand_array.hpp"
#include "dbam/report_io.hpp"
#include "dbam/run_config.hpp"
#include "dbam/search.hpp"
#include "dbam/sweep.hpp"
#include "dbam/synth.hpp"

struct dbam_config {
  dbam::RunConfig cfg;
};

struct dbam_spectra {
  std::vector<dbam::BinnedSpectrum> items;
};

struct dbam_library {
  dbam::Library lib;
};

struct dbam_results {
  std::vector<dbam::SearchReport> reports;
};

struct dbam_sweep_result {
  std::vector<dbam::SweepRow> rows;
  dbam::SweepGrid grid;
};

namespace {

thread_local std::string g_last_error;

dbam_status to_status(dbam::ErrorCode code) {
  using dbam::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return DBAM_ERR_INVALID_ARGUMENT;
    case ErrorCode::kConfig: return DBAM_ERR_CONFIG;
    case ErrorCode::kParse: return DBAM_ERR_PARSE;
    case ErrorCode::kIo: return DBAM_ERR_IO;
    case ErrorCode::kCapacity: return DBAM_ERR_CAPACITY;
    case ErrorCode::kMismatch: return DBAM_ERR_MISMATCH;
    case ErrorCode::kEmptySpectrum: return DBAM_ERR_EMPTY_SPECTRUM;
  }
  return DBAM_ERR_INTERNAL;
}

dbam_status set_error(dbam_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
dbam_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return DBAM_OK;
  } catch (const dbam::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(DBAM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(DBAM_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(DBAM_ERR_INTERNAL, "unknown exception");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr)
    dbam::fail(dbam::ErrorCode::kInvalidArgument,
               std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void check_compatible(const dbam::RunConfig& c, const dbam::Library& lib) {
  const dbam::HdcParams want = c.hdc_params();
  std::string diff;
  auto note = [&](const char* name, auto lib_v, auto cfg_v) {
    if (lib_v != cfg_v)
      diff += std::string(diff.empty() ? "" : ", ") + name + " " +
              std::to_string(lib_v) + " (library) vs " +
              std::to_string(cfg_v) + " (config)";
  };
  note("dimension", lib.params.dimension, want.dimension);
  note("seed", lib.params.seed, want.seed);
  note("pf", lib.pf, c.dbam.pf);
  note("bins", lib.params.num_ids, want.num_ids);
  note("levels", lib.params.num_levels, want.num_levels);
  if (!diff.empty())
    dbam::fail(dbam::ErrorCode::kMismatch,
               "library and configuration disagree: " + diff);
}

std::vector<dbam::BinnedSpectrum> load_binned(const dbam::RunConfig& c,
                                              const std::string& path,
                                              std::size_t* skipped) {
  std::vector<dbam::BinnedSpectrum> out;
  std::size_t dropped = 0;
  for (const auto& s : dbam::read_mgf_file(path)) {
    try {
      out.push_back(dbam::preprocess(s, c.preprocess));
    } catch (const dbam::Error& e) {
      if (e.code() != dbam::ErrorCode::kEmptySpectrum) throw;
      ++dropped;
    }
  }
  if (skipped) *skipped = dropped;
  return out;
}

const dbam::SynthParams& synth_or_fail(const dbam::RunConfig& c) {
  if (!c.synth)
    dbam::fail(dbam::ErrorCode::kConfig,
               "configuration has no synth block");
  return *c.synth;
}

dbam_counters to_c(const dbam::OpCounters& c) {
  return {c.sensing_reads, c.wordline_activations, c.subsets_evaluated};
}

}  // namespace

extern "C" {

int dbam_abi_version(void) { return DBAM_ABI_VERSION; }

const char* dbam_status_string(dbam_status status) {
  switch (status) {
    case DBAM_OK: return "ok";
    case DBAM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DBAM_ERR_CONFIG: return "configuration error";
    case DBAM_ERR_PARSE: return "parse error";
    case DBAM_ERR_IO: return "I/O error";
    case DBAM_ERR_CAPACITY: return "capacity exceeded";
    case DBAM_ERR_MISMATCH: return "parameter mismatch";
    case DBAM_ERR_EMPTY_SPECTRUM: return "empty spectrum";
    case DBAM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* dbam_last_error(void) { return g_last_error.c_str(); }

void dbam_string_free(char* s) { std::free(s); }

dbam_status dbam_config_create(dbam_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new dbam_config{};
  });
}

dbam_status dbam_config_from_json(const char* json, dbam_config** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = nullptr;
    auto c = std::make_unique<dbam_config>();
    c->cfg = dbam::parse_run_config(json);
    *out = c.release();
  });
}

dbam_status dbam_config_to_json(const dbam_config* cfg, char** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = dup_string(dbam::dump_run_config(cfg->cfg));
  });
}

void dbam_config_destroy(dbam_config* cfg) { delete cfg; }

dbam_status dbam_spectra_load_mgf(const dbam_config* cfg, const char* path,
                                  dbam_spectra** out, size_t* skipped) {
  return guarded([&] {
    need(cfg, "cfg");
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    auto s = std::make_unique<dbam_spectra>();
    s->items = load_binned(cfg->cfg, path, skipped);
    *out = s.release();
  });
}

dbam_status dbam_spectra_synth_references(const dbam_config* cfg,
                                          dbam_spectra** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = nullptr;
    const auto& c = cfg->cfg;
    auto s = std::make_unique<dbam_spectra>();
    s->items = dbam::synth_references(synth_or_fail(c), c.preprocess.num_bins(),
                                      c.preprocess.intensity_levels, c.seed);
    *out = s.release();
  });
}

dbam_status dbam_spectra_synth_queries(const dbam_config* cfg,
                                       dbam_spectra** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = nullptr;
    const auto& c = cfg->cfg;
    auto s = std::make_unique<dbam_spectra>();
    s->items = dbam::synth_benchmark(synth_or_fail(c), c.preprocess.num_bins(),
                                     c.preprocess.intensity_levels, c.seed)
                   .queries;
    *out = s.release();
  });
}

size_t dbam_spectra_count(const dbam_spectra* s) {
  return s ? s->items.size() : 0;
}

dbam_status dbam_spectra_to_json(const dbam_spectra* s, char** out) {
  return guarded([&] {
    need(s, "spectra");
    need(out, "out");
    *out = dup_string(dbam::binned_to_json(s->items));
  });
}

void dbam_spectra_destroy(dbam_spectra* s) { delete s; }

dbam_status dbam_library_build(const dbam_config* cfg,
                               const dbam_spectra* spectra, int keep_raw,
                               dbam_library** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(spectra, "spectra");
    need(out, "out");
    *out = nullptr;
    const auto& c = cfg->cfg;
    auto l = std::make_unique<dbam_library>();
    l->lib = dbam::build_library(spectra->items, c.hdc_params(), c.dbam.pf,
                                 keep_raw != 0, c.threads);
    *out = l.release();
  });
}

dbam_status dbam_library_save(const dbam_library* lib, const char* path,
                              const char* raw_path) {
  return guarded([&] {
    need(lib, "lib");
    need(path, "path");
    dbam::save_library(lib->lib, path, raw_path ? raw_path : "");
  });
}

dbam_status dbam_library_load(const char* path, const char* raw_path,
                              dbam_library** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    auto l = std::make_unique<dbam_library>();
    l->lib = dbam::load_library(path, raw_path ? raw_path : "");
    *out = l.release();
  });
}

dbam_status dbam_library_get_info(const dbam_library* lib,
                                  dbam_library_info* out) {
  return guarded([&] {
    need(lib, "lib");
    need(out, "out");
    const auto& l = lib->lib;
    *out = {l.size(),
            l.params.dimension,
            l.pf,
            l.params.num_ids,
            l.params.num_levels,
            l.params.seed,
            l.raw ? 1 : 0};
  });
}

dbam_status dbam_library_layout(const dbam_library* lib, const dbam_config* cfg,
                                dbam_layout_info* out) {
  return guarded([&] {
    need(lib, "lib");
    need(cfg, "cfg");
    need(out, "out");
    const auto& g = cfg->cfg.geometry;
    const std::size_t folds =
        dbam::folds_per_hv(lib->lib.packed_length(), g.wordlines);
    *out = {folds, std::uint64_t{lib->lib.size()} * folds, g.total_strings()};
    const auto layout =
        dbam::map_library(lib->lib.size(), lib->lib.packed_length(), g);
    out->strings_used = layout.strings_used();
  });
}

void dbam_library_destroy(dbam_library* lib) { delete lib; }

dbam_status dbam_search(const dbam_config* cfg, const dbam_library* lib,
                        const dbam_spectra* queries, int oracle,
                        dbam_results** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(lib, "lib");
    need(queries, "queries");
    need(out, "out");
    *out = nullptr;
    const auto& c = cfg->cfg;
    check_compatible(c, lib->lib);
    if (oracle && !lib->lib.raw)
      dbam::fail(dbam::ErrorCode::kInvalidArgument,
                 "oracle requested but the library has no raw hypervectors "
                 "(build with the sidecar and load it)");
    const dbam::SearchEngine engine(lib->lib, c.threads);
    auto r = std::make_unique<dbam_results>();
    r->reports.reserve(queries->items.size());
    for (const auto& q : queries->items)
      r->reports.push_back(engine.search(q, c.dbam, c.k, oracle != 0));
    *out = r.release();
  });
}

size_t dbam_results_query_count(const dbam_results* r) {
  return r ? r->reports.size() : 0;
}

const char* dbam_results_query_id(const dbam_results* r, size_t q) {
  if (!r || q >= r->reports.size()) return nullptr;
  return r->reports[q].query_id.c_str();
}

size_t dbam_results_hit_count(const dbam_results* r, size_t q) {
  if (!r || q >= r->reports.size()) return 0;
  return r->reports[q].ranked.size();
}

dbam_status dbam_results_get_hit(const dbam_results* r, size_t q, size_t rank,
                                 dbam_hit* out) {
  return guarded([&] {
    need(r, "results");
    need(out, "out");
    if (q >= r->reports.size() || rank >= r->reports[q].ranked.size())
      dbam::fail(dbam::ErrorCode::kInvalidArgument, "index out of range");
    const auto& h = r->reports[q].ranked[rank];
    *out = {h.id.c_str(), h.score,
            h.oracle_similarity ? static_cast<std::int64_t>(*h.oracle_similarity)
                                : -1};
  });
}

dbam_status dbam_results_get_counters(const dbam_results* r, size_t q,
                                      dbam_counters* out) {
  return guarded([&] {
    need(r, "results");
    need(out, "out");
    if (q >= r->reports.size())
      dbam::fail(dbam::ErrorCode::kInvalidArgument, "index out of range");
    *out = to_c(r->reports[q].counters);
  });
}

dbam_status dbam_results_oracle_agrees(const dbam_results* r, size_t q,
                                      int* out) {
  return guarded([&] {
    need(r, "results");
    need(out, "out");
    if (q >= r->reports.size())
      dbam::fail(dbam::ErrorCode::kInvalidArgument, "index out of range");
    const auto& rep = r->reports[q];
    if (!rep.oracle_ranked)
      dbam::fail(dbam::ErrorCode::kInvalidArgument, "search ran without the oracle");
    *out = !rep.ranked.empty() && !rep.oracle_ranked->empty() &&
           rep.ranked.front().id == rep.oracle_ranked->front().id;
  });
}

dbam_status dbam_results_write_csv(const dbam_results* r, const char* path) {
  return guarded([&] {
    need(r, "results");
    need(path, "path");
    dbam::write_file_atomic(path, dbam::reports_to_csv(r->reports));
  });
}

dbam_status dbam_results_write_json(const dbam_results* r, const char* path) {
  return guarded([&] {
    need(r, "results");
    need(path, "path");
    dbam::write_file_atomic(path, dbam::reports_to_json(r->reports));
  });
}

void dbam_results_destroy(dbam_results* r) { delete r; }

dbam_status dbam_sweep_run(const dbam_config* cfg, dbam_sweep_result** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = nullptr;
    const auto& c = cfg->cfg;
    dbam::BenchmarkSource source;
    std::size_t trials = c.sweep_trials;
    if (c.synth) {
      const auto bins = c.preprocess.num_bins();
      const auto levels = c.preprocess.intensity_levels;
      const auto synth = *c.synth;
      const auto seed = c.seed;
      source = [=](std::size_t t) {
        return dbam::synth_benchmark(synth, bins, levels,
                                     seed + static_cast<std::uint64_t>(t));
      };
    } else {
      if (c.paths.mgf.empty() || c.paths.queries.empty())
        dbam::fail(dbam::ErrorCode::kConfig,
                   "sweep needs a synth block or paths.mgf and paths.queries");
      dbam::SynthBenchmark bench;
      bench.references = load_binned(c, c.paths.mgf, nullptr);
      bench.queries = load_binned(c, c.paths.queries, nullptr);
      source = [bench](std::size_t) { return bench; };
      trials = 1;
    }
    auto s = std::make_unique<dbam_sweep_result>();
    s->grid = c.sweep;
    s->rows = dbam::sweep(source, c.hdc_params(), c.sweep, c.k, trials,
                          c.dbam.noise, c.threads);
    *out = s.release();
  });
}

size_t dbam_sweep_row_count(const dbam_sweep_result* s) {
  return s ? s->rows.size() : 0;
}

dbam_status dbam_sweep_get_row(const dbam_sweep_result* s, size_t i,
                               dbam_sweep_row* out) {
  return guarded([&] {
    need(s, "sweep");
    need(out, "out");
    if (i >= s->rows.size())
      dbam::fail(dbam::ErrorCode::kInvalidArgument, "index out of range");
    const auto& r = s->rows[i];
    *out = {r.alpha,        r.m,          r.pf,
            r.recall_at_1,  r.recall_at_k, r.identification_count,
            r.total_queries, r.dbam_reads, r.mlc_reads,
            r.read_ratio,   r.speedup};
  });
}

dbam_status dbam_sweep_write_csv(const dbam_sweep_result* s, const char* path) {
  return guarded([&] {
    need(s, "sweep");
    need(path, "path");
    dbam::write_file_atomic(path, dbam::sweep_to_csv(s->rows));
  });
}

dbam_status dbam_sweep_write_heatmap(const dbam_sweep_result* s,
                                     const char* path) {
  return guarded([&] {
    need(s, "sweep");
    need(path, "path");
    dbam::write_file_atomic(path, dbam::sweep_heatmap_json(s->rows, s->grid));
  });
}

void dbam_sweep_destroy(dbam_sweep_result* s) { delete s; }

dbam_status dbam_bench(const dbam_config* cfg, uint64_t references,
                       dbam_bench_report* out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    const auto& c = cfg->cfg;
    if (references < 1)
      dbam::fail(dbam::ErrorCode::kInvalidArgument,
                 "bench needs at least one reference");
    const auto d = dbam::count_ops_dbam(c.dimension, c.dbam.pf, c.dbam.m);
    const auto b = dbam::count_ops_mlc_baseline(c.dimension, c.dbam.pf);
    const auto cost = c.cost_params();
    const std::size_t folds = dbam::folds_per_hv(
        dbam::packed_length(c.dimension, c.dbam.pf), c.geometry.wordlines);
    const std::uint64_t parallel =
        std::max<std::uint64_t>(1, c.geometry.total_strings() / folds);
    const auto dc = dbam::cost_report(d, cost, references, parallel);
    const auto bc = dbam::cost_report(b, cost, references, parallel);
    *out = {};
    out->dimension = c.dimension;
    out->pf = c.dbam.pf;
    out->m = c.dbam.m;
    out->dbam = to_c(d);
    out->baseline = to_c(b);
    out->measured_ratio = static_cast<double>(b.sensing_reads) /
                          static_cast<double>(d.sensing_reads);
    out->predicted_speedup = dbam::speedup(c.dbam.m, c.dbam.pf);
    out->references = references;
    out->parallel_references = parallel;
    out->dbam_latency_s = dc.latency;
    out->dbam_energy_j = dc.energy;
    out->baseline_latency_s = bc.latency;
    out->baseline_energy_j = bc.energy;
    out->z_scale_k = cost.z_scale_k;
  });
}

double dbam_speedup(uint32_t m, uint32_t pf) {
  if (m < 1 || pf < 1) return 0.0;
  return dbam::speedup(m, pf);
}

}  // extern "C"
