// Compares the serial reference implementations against the OpenMP-parallel
// kernels (row uplift, climate uplift, BGP evaluation, pearson) on synthetic
// data and reports wall times plus an equality check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "energykg/analysis.hpp"
#include "energykg/ntriples.hpp"
#include "energykg/query.hpp"
#include "energykg/table.hpp"
#include "energykg/uplift.hpp"

namespace {

using namespace energykg;
using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    fn();
    const auto t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

EnergyTable synthetic_table(std::size_t rows, std::size_t headings, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> inc(0.0, 2.0);
  EnergyTable table;
  table.source = "<bench>";
  for (std::size_t h = 0; h < headings; ++h)
    table.headings.push_back("DE_KN_residential" + std::to_string(h + 1) + "_pv");
  std::vector<double> counters(headings, 0.0);
  const Instant start = parse_instant("2016-01-01T00:00:00Z");
  for (std::size_t r = 0; r < rows; ++r) {
    EnergyRow row;
    row.timestamp = start + Instant(r) * 3600;
    row.line = r + 2;
    for (std::size_t h = 0; h < headings; ++h) {
      counters[h] += inc(rng);
      row.readings.push_back(counters[h]);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<ClimateRecord> synthetic_records(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> tenths(-50, 300);
  std::vector<ClimateRecord> records;
  const Day start = parse_day("2010-01-01");
  for (std::size_t i = 0; i < n; ++i) {
    ClimateRecord rec;
    rec.station_id = "GHCND_GME00121926";
    rec.date = start + Day(i / 2);
    rec.datatype = (i % 2) ? "PRCP" : "TMAX";
    rec.value = double(tenths(rng));
    rec.unit = "tenths";
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t rows = 20000;
  std::size_t headings = 6;
  std::size_t vec_n = 8'000'000;
  int reps = 3;
  std::uint64_t seed = 1;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    const auto next = [&] { return std::stoull(argv[++i]); };
    if (arg == "--rows" && i + 1 < argc)
      rows = next();
    else if (arg == "--headings" && i + 1 < argc)
      headings = next();
    else if (arg == "--vector" && i + 1 < argc)
      vec_n = next();
    else if (arg == "--reps" && i + 1 < argc)
      reps = int(next());
    else if (arg == "--seed" && i + 1 < argc)
      seed = next();
    else if (arg == "--smoke") {
      rows = 512;
      headings = 3;
      vec_n = 100000;
      reps = 1;
    } else {
      std::fprintf(stderr,
                   "usage: bench_kernels [--rows N] [--headings N] [--vector N] [--reps N] "
                   "[--seed N] [--smoke]\n");
      return 1;
    }
  }

#ifdef _OPENMP
  std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled\n");
#endif

  const TermRegistry registry = TermRegistry::defaults();
  const Vocab vocab(registry);
  const Minter minter{Iri(registry.base())};
  const RoleTable roles = RoleTable::defaults();

  // -- row uplift ------------------------------------------------------
  const EnergyTable table = synthetic_table(rows, headings, seed);
  const auto descriptors = descriptors_for(table, roles);
  Graph serial_graph, parallel_graph;
  const double t_rows_serial = time_ms(
      [&] { serial_graph = uplift_rows_serial(table, descriptors, vocab, minter); }, reps);
  const double t_rows_parallel =
      time_ms([&] { parallel_graph = uplift_rows(table, descriptors, vocab, minter); }, reps);
  const bool rows_equal = serialize_ntriples(serial_graph) == serialize_ntriples(parallel_graph);
  std::printf("uplift_rows      %8zu cells  serial %9.2f ms  parallel %9.2f ms  x%.2f  %s\n",
              rows * headings, t_rows_serial, t_rows_parallel, t_rows_serial / t_rows_parallel,
              rows_equal ? "equal" : "MISMATCH");

  // -- climate uplift ---------------------------------------------------
  const auto records = synthetic_records(rows, seed + 1);
  const DatatypeRegistry datatypes = DatatypeRegistry::defaults();
  Graph cs, cp;
  const double t_cl_serial =
      time_ms([&] { cs = uplift_climate_serial(records, datatypes, vocab, minter); }, reps);
  const double t_cl_parallel =
      time_ms([&] { cp = uplift_climate(records, datatypes, vocab, minter); }, reps);
  const bool climate_equal = serialize_ntriples(cs) == serialize_ntriples(cp);
  std::printf("uplift_climate   %8zu records serial %9.2f ms  parallel %9.2f ms  x%.2f  %s\n",
              records.size(), t_cl_serial, t_cl_parallel, t_cl_serial / t_cl_parallel,
              climate_equal ? "equal" : "MISMATCH");

  // -- query evaluation --------------------------------------------------
  // two shapes: a full-output join (result materialization dominates) and a
  // selective one (per-candidate join work dominates)
  parallel_graph.freeze();
  bool q_equal = true;
  const auto bench_query = [&](const char* label, const std::string& text) {
    const Query q = parse_query(text, registry);
    ResultSet rs_serial, rs_parallel;
    const double t_serial = time_ms([&] { rs_serial = evaluate_serial(parallel_graph, q); }, reps);
    const double t_parallel = time_ms([&] { rs_parallel = evaluate(parallel_graph, q); }, reps);
    const bool equal = results_tsv(rs_serial) == results_tsv(rs_parallel);
    q_equal = q_equal && equal;
    std::printf("%-16s %8zu rows   serial %9.2f ms  parallel %9.2f ms  x%.2f  %s\n", label,
                rs_parallel.rows.size(), t_serial, t_parallel, t_serial / t_parallel,
                equal ? "equal" : "MISMATCH");
  };
  const std::string prologue =
      "PREFIX seas: <https://w3id.org/seas/> PREFIX sosa: <http://www.w3.org/ns/sosa/> ";
  bench_query("evaluate/full",
              prologue +
                  "SELECT ?e ?v ?t WHERE { ?e seas:evaluatedValue ?v . ?e sosa:resultTime ?t . "
                  "FILTER(?v >= 1.0) }");
  bench_query("evaluate/narrow",
              prologue + "SELECT ?e ?v ?t WHERE { ?e seas:evaluatedValue ?v . ?e sosa:resultTime "
                         "?t . FILTER(?v >= " +
                  canonical_double(double(rows) * 0.95) + ") }");

  // -- pearson -----------------------------------------------------------
  std::mt19937_64 rng(seed + 2);
  std::uniform_real_distribution<double> dist(-100.0, 100.0);
  std::vector<double> x(vec_n), y(vec_n);
  for (std::size_t i = 0; i < vec_n; ++i) {
    x[i] = dist(rng);
    y[i] = 0.25 * x[i] + dist(rng);
  }
  double r_serial = 0, r_parallel = 0;
  const double t_p_serial = time_ms([&] { r_serial = pearson_serial(x, y); }, reps);
  const double t_p_parallel = time_ms([&] { r_parallel = pearson(x, y); }, reps);
  std::printf("pearson          %8zu points serial %9.2f ms  parallel %9.2f ms  x%.2f  |dr|=%g\n",
              vec_n, t_p_serial, t_p_parallel, t_p_serial / t_p_parallel,
              std::abs(r_serial - r_parallel));

  const bool ok = rows_equal && climate_equal && q_equal && std::abs(r_serial - r_parallel) < 1e-12;
  return ok ? 0 : 1;
}
