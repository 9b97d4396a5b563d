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

// dbamsim: command-line front end over the dbam C API.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 any other
// failure (I/O, parse, capacity, parameter mismatch).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "dbam/dbam.h"

namespace {

using json = nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& msg) { throw CliError{kExitUsage, msg}; }

void check(dbam_status st) {
  if (st == DBAM_OK) return;
  const int code = st == DBAM_ERR_CONFIG ? kExitUsage : kExitFailure;
  throw CliError{code, std::string(dbam_status_string(st)) + ": " + dbam_last_error()};
}

template <class T, void (*D)(T*)>
struct Deleter {
  void operator()(T* p) const { D(p); }
};
using Config = std::unique_ptr<dbam_config, Deleter<dbam_config, dbam_config_destroy>>;
using Spectra = std::unique_ptr<dbam_spectra, Deleter<dbam_spectra, dbam_spectra_destroy>>;
using Library = std::unique_ptr<dbam_library, Deleter<dbam_library, dbam_library_destroy>>;
using Results = std::unique_ptr<dbam_results, Deleter<dbam_results, dbam_results_destroy>>;
using SweepResult =
    std::unique_ptr<dbam_sweep_result, Deleter<dbam_sweep_result, dbam_sweep_destroy>>;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::size_t> k;
  std::optional<double> alpha, alpha_pos, alpha_neg;
  std::optional<std::uint32_t> m, pf, dimension;
  std::vector<std::string> noise;
  bool no_noise = false;
  std::vector<std::string> synth;
  std::string mgf, queries, library, raw, out;
  bool dump_config = false;

  // search
  bool oracle = false;
  std::string json_out;
  // sweep
  std::string heatmap;
  std::string alphas, ms, pfs;
  std::optional<std::size_t> trials;
  // bench
  std::uint64_t references = 1000;
};

std::vector<std::string> split_pairs(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& a : args) {
    std::string cur;
    for (char ch : a) {
      if (ch == ',' || ch == ' ') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

json parse_number(const std::string& key, const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded() || !v.is_number())
    usage_error("expected a number for '" + key + "', got '" + text + "'");
  return v;
}

json parse_list(const char* flag, const std::string& text) {
  json arr = json::array();
  for (const auto& item : split_pairs({text})) arr.push_back(parse_number(flag, item));
  if (arr.empty()) usage_error(std::string(flag) + " needs at least one value");
  return arr;
}

// Applies key=value pairs onto `target`, translating short names.
void apply_pairs(json& target, const std::vector<std::string>& args, const char* flag,
                 const std::vector<std::pair<std::string, std::string>>& aliases) {
  if (!target.is_object()) target = json::object();
  for (const auto& pair : split_pairs(args)) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0)
      usage_error(std::string(flag) + ": expected key=value, got '" + pair + "'");
    std::string key = pair.substr(0, eq);
    for (const auto& [from, to] : aliases)
      if (key == from) key = to;
    target[key] = parse_number(key, pair.substr(eq + 1));
  }
}

json load_config_json(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) usage_error("cannot read config file '" + path + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    usage_error("config file '" + path + "' is not a JSON object");
  return j;
}

Config effective_config(const Options& o) {
  json j = load_config_json(o.config_path);
  auto section = [&j](const char* name) -> json& {
    json& s = j[name];
    if (!s.is_object()) s = json::object();
    return s;
  };
  if (o.seed) section("hdc")["seed"] = *o.seed;
  if (o.dimension) section("hdc")["dimension"] = *o.dimension;
  if (o.threads) j["threads"] = *o.threads;
  if (o.k) j["k"] = *o.k;
  if (o.alpha) section("dbam")["alpha_pos"] = section("dbam")["alpha_neg"] = *o.alpha;
  if (o.alpha_pos) section("dbam")["alpha_pos"] = *o.alpha_pos;
  if (o.alpha_neg) section("dbam")["alpha_neg"] = *o.alpha_neg;
  if (o.m) section("dbam")["m"] = *o.m;
  if (o.pf) section("dbam")["pf"] = *o.pf;
  if (o.no_noise) section("dbam")["noise"] = nullptr;
  if (!o.noise.empty())
    apply_pairs(section("dbam")["noise"], o.noise, "--noise",
                {{"sigma", "sigma_vt"}, {"mw", "memory_window"}});
  if (!o.synth.empty())
    apply_pairs(j["synth"], o.synth, "--synth",
                {{"drop", "drop_rate"}, {"add", "add_rate"}, {"jitter", "jitter_rate"}});
  for (const auto& [flag, key, value] :
       {std::tuple{"--mgf", "mgf", &o.mgf}, {"--queries", "queries", &o.queries},
        {"--library", "library", &o.library}, {"--raw", "raw", &o.raw},
        {"--out", "out", &o.out}}) {
    (void)flag;
    if (!value->empty()) section("paths")[key] = *value;
  }
  if (!o.alphas.empty()) section("sweep")["alphas"] = parse_list("--alphas", o.alphas);
  if (!o.ms.empty()) section("sweep")["ms"] = parse_list("--ms", o.ms);
  if (!o.pfs.empty()) section("sweep")["pfs"] = parse_list("--pfs", o.pfs);
  if (o.trials) section("sweep")["trials"] = *o.trials;

  dbam_config* cfg = nullptr;
  check(dbam_config_from_json(j.dump().c_str(), &cfg));
  return Config(cfg);
}

json config_json(const dbam_config* cfg) {
  char* text = nullptr;
  check(dbam_config_to_json(cfg, &text));
  json j = json::parse(text);
  dbam_string_free(text);
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Writes through `write` to `path`, or to stdout when `path` is empty.
template <class Fn>
void emit(const std::string& path, Fn write) {
  if (!path.empty()) {
    check(write(path.c_str()));
    return;
  }
  const auto tmp = std::filesystem::temp_directory_path() /
                   ("dbamsim_" + std::to_string(::getpid()) + ".out");
  const dbam_status st = write(tmp.c_str());
  if (st == DBAM_OK) std::cout << slurp(tmp.string());
  std::filesystem::remove(tmp);
  check(st);
}

Spectra load_spectra(const dbam_config* cfg, const std::string& path, const char* what) {
  dbam_spectra* s = nullptr;
  std::size_t skipped = 0;
  check(dbam_spectra_load_mgf(cfg, path.c_str(), &s, &skipped));
  Spectra owned(s);
  if (skipped > 0)
    std::cerr << "note: skipped " << skipped << " " << what
              << " spectra with no peaks after preprocessing\n";
  if (dbam_spectra_count(s) == 0)
    throw CliError{kExitFailure, std::string("no usable ") + what + " spectra in " + path};
  return owned;
}

int cmd_build(const Options&, const dbam_config* cfg) {
  const json c = config_json(cfg);
  const std::string mgf = c["paths"]["mgf"];
  const std::string out = c["paths"]["library"].get<std::string>().empty()
                              ? c["paths"]["out"].get<std::string>()
                              : c["paths"]["library"].get<std::string>();
  const std::string raw = c["paths"]["raw"];
  if (out.empty()) usage_error("build needs an output path (--out or --library)");

  Spectra spectra;
  if (!mgf.empty()) {
    spectra = load_spectra(cfg, mgf, "reference");
  } else if (!c["synth"].is_null()) {
    dbam_spectra* s = nullptr;
    check(dbam_spectra_synth_references(cfg, &s));
    spectra.reset(s);
  } else {
    usage_error("build needs --mgf or a synth block (--synth)");
  }

  dbam_library* lib = nullptr;
  check(dbam_library_build(cfg, spectra.get(), raw.empty() ? 0 : 1, &lib));
  Library owned(lib);
  dbam_layout_info layout{};
  check(dbam_library_layout(lib, cfg, &layout));
  check(dbam_library_save(lib, out.c_str(), raw.c_str()));

  dbam_library_info info{};
  check(dbam_library_get_info(lib, &info));
  std::cout << "references: " << info.references << "\n"
            << "dimension: " << info.dimension << "\n"
            << "packing_factor: " << info.pf << "\n"
            << "folds_per_hv: " << layout.folds_per_hv << "\n"
            << "strings_used: " << layout.strings_used << " of "
            << layout.strings_available << "\n"
            << "library: " << out << "\n";
  if (!raw.empty()) std::cout << "raw: " << raw << "\n";
  return 0;
}

int cmd_search(const Options& o, const dbam_config* cfg) {
  const json c = config_json(cfg);
  const std::string lib_path = c["paths"]["library"];
  const std::string raw = c["paths"]["raw"];
  const std::string queries_path = c["paths"]["queries"];
  if (lib_path.empty()) usage_error("search needs --library");
  if (o.oracle && raw.empty()) usage_error("--oracle needs the raw sidecar (--raw)");

  dbam_library* lib = nullptr;
  check(dbam_library_load(lib_path.c_str(), raw.c_str(), &lib));
  Library lib_owned(lib);

  Spectra queries;
  if (!queries_path.empty()) {
    queries = load_spectra(cfg, queries_path, "query");
  } else if (!c["synth"].is_null()) {
    dbam_spectra* s = nullptr;
    check(dbam_spectra_synth_queries(cfg, &s));
    queries.reset(s);
  } else {
    usage_error("search needs --queries or a synth block (--synth)");
  }

  dbam_results* res = nullptr;
  check(dbam_search(cfg, lib, queries.get(), o.oracle ? 1 : 0, &res));
  Results owned(res);
  emit(c["paths"]["out"].get<std::string>(),
       [res](const char* p) { return dbam_results_write_csv(res, p); });
  if (!o.json_out.empty()) check(dbam_results_write_json(res, o.json_out.c_str()));

  const std::size_t nq = dbam_results_query_count(res);
  std::cerr << "searched " << nq << " queries";
  if (o.oracle) {
    std::size_t agree = 0;
    for (std::size_t q = 0; q < nq; ++q) {
      int a = 0;
      check(dbam_results_oracle_agrees(res, q, &a));
      agree += a != 0;
    }
    std::cerr << ", oracle top-1 agreement " << agree << "/" << nq;
  }
  std::cerr << "\n";
  return 0;
}

int cmd_sweep(const Options& o, const dbam_config* cfg) {
  const json c = config_json(cfg);
  dbam_sweep_result* s = nullptr;
  check(dbam_sweep_run(cfg, &s));
  SweepResult owned(s);
  emit(c["paths"]["out"].get<std::string>(),
       [s](const char* p) { return dbam_sweep_write_csv(s, p); });
  if (!o.heatmap.empty()) check(dbam_sweep_write_heatmap(s, o.heatmap.c_str()));
  std::cerr << "sweep: " << dbam_sweep_row_count(s) << " grid points\n";
  return 0;
}

void print_counters(const char* label, const dbam_counters& c) {
  std::printf("%-10s sensing_reads=%llu wordline_activations=%llu subsets=%llu\n", label,
              static_cast<unsigned long long>(c.sensing_reads),
              static_cast<unsigned long long>(c.wordline_activations),
              static_cast<unsigned long long>(c.subsets_evaluated));
}

int cmd_bench(const Options& o, const dbam_config* cfg) {
  dbam_bench_report r{};
  check(dbam_bench(cfg, o.references, &r));
  std::printf("dimension=%u pf=%u m=%u references=%llu\n", r.dimension, r.pf, r.m,
              static_cast<unsigned long long>(r.references));
  std::printf("per reference:\n");
  print_counters("  dbam", r.dbam);
  print_counters("  mlc", r.baseline);
  std::printf("measured_ratio=%.6g predicted_speedup=%.6g\n", r.measured_ratio,
              r.predicted_speedup);
  if (r.measured_ratio < 1.0)
    std::printf("warning: D-BAM slower than SLC single-read (ratio %.6g < 1)\n",
                r.measured_ratio);
  else if (r.measured_ratio != r.predicted_speedup)
    std::printf("note: m*pf does not divide the dimension; the last subset is partial\n");
  std::printf("parallel_references=%llu\n",
              static_cast<unsigned long long>(r.parallel_references));
  std::printf("dbam:     latency=%.6g s energy=%.6g J\n", r.dbam_latency_s, r.dbam_energy_j);
  std::printf("baseline: latency=%.6g s energy=%.6g J\n", r.baseline_latency_s,
              r.baseline_energy_j);
  std::printf("z_scale_k=%.6g (scaling factor for multi-die projections)\n", r.z_scale_k);
  return 0;
}

void add_common(CLI::App& app, Options& o) {
  app.add_option("--config", o.config_path, "JSON configuration file");
  app.add_option("--seed", o.seed, "Encoder seed");
  app.add_option("--dimension", o.dimension, "Hypervector dimension (multiple of 64)");
  app.add_option("--threads", o.threads, "Worker thread cap")->check(CLI::PositiveNumber);
  app.add_option("--k", o.k, "Hits reported per query");
  app.add_option("--alpha", o.alpha, "Sets both tolerances");
  app.add_option("--alpha-pos", o.alpha_pos, "Upper-bound tolerance");
  app.add_option("--alpha-neg", o.alpha_neg, "Lower-bound tolerance");
  app.add_option("--m", o.m, "Cells per subset");
  app.add_option("--pf", o.pf, "Packing factor");
  app.add_option("--noise", o.noise, "Cell variation: sigma=..,mw=..,seed=..")
      ->expected(1, 3);
  app.add_flag("--no-noise", o.no_noise, "Disable cell variation from the config");
  app.add_option("--synth", o.synth,
                 "Synthetic benchmark: library_size=..,num_queries=..,peaks=..,"
                 "drop=..,add=..,jitter=..,jitter_max=..")
      ->expected(1, 7);
  app.add_option("--mgf", o.mgf, "Reference MGF file");
  app.add_option("--queries", o.queries, "Query MGF file");
  app.add_option("--library", o.library, "Packed library file");
  app.add_option("--raw", o.raw, "Raw hypervector sidecar file");
  app.add_option("--out", o.out, "Primary output file (stdout when omitted)");
  app.add_flag("--dump-config", o.dump_config,
               "Print the effective configuration as JSON and exit");
}

int run(int argc, char** argv) {
  CLI::App app{"D-BAM similarity search simulator", "dbamsim"};
  app.require_subcommand(0, 1);
  Options o;
  add_common(app, o);
  app.fallthrough();

  auto* build = app.add_subcommand("build", "Encode and pack a reference library");
  auto* search = app.add_subcommand("search", "Score queries against a library");
  search->add_flag("--oracle", o.oracle, "Add exact Hamming similarity and agreement");
  search->add_option("--json", o.json_out, "Also write results as JSON");
  auto* sweep = app.add_subcommand("sweep", "Recall and read counts over an (alpha, m, pf) grid");
  sweep->add_option("--heatmap", o.heatmap, "Heatmap JSON output");
  sweep->add_option("--alphas", o.alphas, "Comma-separated tolerance values");
  sweep->add_option("--ms", o.ms, "Comma-separated subset sizes");
  sweep->add_option("--pfs", o.pfs, "Comma-separated packing factors");
  sweep->add_option("--trials", o.trials, "Synthetic trials per grid point");
  auto* bench = app.add_subcommand("bench", "Read-operation counts and cost estimates");
  bench->add_option("--references", o.references, "Library size for cost scaling")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  const Config cfg = effective_config(o);
  if (o.dump_config) {
    std::cout << config_json(cfg.get()).dump(2) << "\n";
    return 0;
  }
  if (*build) return cmd_build(o, cfg.get());
  if (*search) return cmd_search(o, cfg.get());
  if (*sweep) return cmd_sweep(o, cfg.get());
  if (*bench) return cmd_bench(o, cfg.get());
  std::cerr << app.help();
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
