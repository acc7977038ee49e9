#include "energykg/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>

#include "energykg/error.hpp"

namespace energykg {

DailySeries cumulative_to_daily(std::span<const std::pair<Instant, double>> samples,
                                ResetDiagnostics* diag) {
  DailySeries out;
  out.unit = "kWh";
  if (samples.size() < 2) return out;

  // last reading per calendar day, relying on time-sorted input
  std::map<Day, double> last;
  Instant prev_t = samples.front().first;
  for (const auto& [t, v] : samples) {
    if (t < prev_t) fail(ErrorKind::Data, "cumulative samples are not time-sorted");
    prev_t = t;
    last[day_of(t)] = v;
  }

  auto it = last.begin();
  double prev_reading = it->second;
  for (++it; it != last.end(); ++it) {
    const double diff = it->second - prev_reading;
    if (diff < 0) {
      if (diag) ++diag->resets_skipped;
    } else {
      out.points[it->first] = diff;
    }
    prev_reading = it->second;
  }
  return out;
}

DailySeries unit_normalize(const DailySeries& series, std::string_view datatype,
                           const DatatypeRegistry& registry) {
  const auto entry = registry.find(datatype);
  if (!entry)
    fail(ErrorKind::Data, "unknown datatype code '" + std::string(datatype) + "'");
  DailySeries out;
  out.unit = entry->unit;
  for (const auto& [day, value] : series.points) out.points[day] = value * entry->scale;
  return out;
}

std::vector<std::tuple<Day, double, double>> align_join(const DailySeries& a,
                                                        const DailySeries& b) {
  std::vector<std::tuple<Day, double, double>> out;
  auto ia = a.points.begin();
  auto ib = b.points.begin();
  while (ia != a.points.end() && ib != b.points.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      out.emplace_back(ia->first, ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  return out;
}

namespace {

void check_pearson_inputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorKind::Data, "pearson: length mismatch");
  if (x.size() < 2) fail(ErrorKind::Data, "pearson: need at least 2 points");
}

double finish_pearson(double sxy, double sxx, double syy) {
  if (sxx <= 0 || syy <= 0) fail(ErrorKind::Data, "pearson: zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

double pearson_serial(std::span<const double> x, std::span<const double> y) {
  check_pearson_inputs(x, y);
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return finish_pearson(sxy, sxx, syy);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pearson_inputs(x, y);
  const std::size_t n = x.size();
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;

  // Per-chunk partial sums combined serially in chunk order: the result is
  // the same bit pattern for any thread count.
  std::vector<std::array<double, 2>> mean_parts(chunks, {0, 0});
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (chunks > 1)
#endif
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t b = c * kChunk;
    const std::size_t e = std::min(n, b + kChunk);
    double sx = 0, sy = 0;
    for (std::size_t i = b; i < e; ++i) {
      sx += x[i];
      sy += y[i];
    }
    mean_parts[c] = {sx, sy};
  }
  double mx = 0, my = 0;
  for (const auto& p : mean_parts) {
    mx += p[0];
    my += p[1];
  }
  mx /= double(n);
  my /= double(n);

  std::vector<std::array<double, 3>> mom_parts(chunks, {0, 0, 0});
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (chunks > 1)
#endif
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t b = c * kChunk;
    const std::size_t e = std::min(n, b + kChunk);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = b; i < e; ++i) {
      const double dx = x[i] - mx;
      const double dy = y[i] - my;
      sxy += dx * dy;
      sxx += dx * dx;
      syy += dy * dy;
    }
    mom_parts[c] = {sxy, sxx, syy};
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (const auto& p : mom_parts) {
    sxy += p[0];
    sxx += p[1];
    syy += p[2];
  }
  return finish_pearson(sxy, sxx, syy);
}

std::string device_label(const Iri& device) {
  const std::string& text = device.str();
  const auto slash = text.find_last_of("/#");
  return slash == std::string::npos ? text : text.substr(slash + 1);
}

std::string correlation_csv(const CorrelationTable& table) {
  std::string out = "datatype,device,r,n\n";
  for (const auto& [datatype, cells] : table.rows) {
    for (const auto& device : table.devices) {
      const auto it = cells.find(device);
      if (it == cells.end()) continue;
      out += datatype;
      out.push_back(',');
      out += device;
      out.push_back(',');
      out += canonical_double(it->second.r);
      out.push_back(',');
      out += std::to_string(it->second.n);
      out.push_back('\n');
    }
  }
  return out;
}

std::string scatter_csv(std::span<const ScatterRow> rows) {
  std::string out = "device,date,energy_kwh,tmax_c,prcp_mm\n";
  for (const auto& row : rows) {
    out += row.device;
    out.push_back(',');
    out += format_day(row.date);
    out.push_back(',');
    out += canonical_double(row.energy_kwh);
    out.push_back(',');
    out += canonical_double(row.tmax_c);
    out.push_back(',');
    out += canonical_double(row.prcp_mm);
    out.push_back('\n');
  }
  return out;
}

}  // namespace energykg
