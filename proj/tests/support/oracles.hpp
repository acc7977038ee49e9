// Independent reference implementations used to check the library. These
// deliberately avoid the code paths under test: linear scans instead of
// indexes, exhaustive enumeration instead of the join planner, long-double
// two-pass sums instead of the production pearson, string-keyed flat tables
// instead of the RDF detour.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "energykg/query.hpp"
#include "energykg/rdf.hpp"

namespace oracle {

using namespace energykg;

// ---- match oracle: plain scan over all triples -----------------------------

inline std::vector<Triple> scan_match(const std::vector<Triple>& triples,
                                      const std::optional<Iri>& s, const std::optional<Iri>& p,
                                      const std::optional<Term>& o) {
  std::vector<Triple> out;
  for (const auto& t : triples) {
    if (s && !(t.subject == *s)) continue;
    if (p && !(t.predicate == *p)) continue;
    if (o && !(t.object == *o)) continue;
    out.push_back(t);
  }
  return out;
}

// ---- BGP oracle: exhaustive assignment enumeration -------------------------

namespace detail {

using Bindings = std::map<std::string, Term>;

inline bool slot_matches(const PatternSlot& slot, const Term& value, Bindings& bound) {
  if (const auto* term = std::get_if<Term>(&slot)) return *term == value;
  const auto& name = std::get<Var>(slot).name;
  const auto it = bound.find(name);
  if (it != bound.end()) return it->second == value;
  bound.emplace(name, value);
  return true;
}

// Comparison mirrors the spec: doubles numerically, dateTimes
// chronologically (for the strict Z form, lexicographic string order is
// chronological order, so plain string compare is used here), plain
// literals lexically, IRIs only for equality. Type mismatches drop the row.
inline bool oracle_filter(const FilterExpr& f, const Term& bound) {
  const auto cmp_result = [&](int c) {
    switch (f.op) {
      case CmpOp::Eq: return c == 0;
      case CmpOp::Ne: return c != 0;
      case CmpOp::Lt: return c < 0;
      case CmpOp::Le: return c <= 0;
      case CmpOp::Gt: return c > 0;
      case CmpOp::Ge: return c >= 0;
    }
    return false;
  };
  if (std::holds_alternative<Iri>(f.constant)) {
    const bool eq = bound == f.constant;
    return f.op == CmpOp::Eq ? eq : !eq;
  }
  if (const auto* c = std::get_if<TypedLiteral>(&f.constant)) {
    const auto* b = std::get_if<TypedLiteral>(&bound);
    if (!b || !(b->datatype == c->datatype)) return false;
    if (c->datatype == wk::xsd_double()) {
      char* end = nullptr;
      const double lhs = std::strtod(b->lexical.c_str(), &end);
      if (end != b->lexical.c_str() + b->lexical.size()) return false;
      const double rhs = std::strtod(c->lexical.c_str(), nullptr);
      return cmp_result(lhs < rhs ? -1 : (lhs > rhs ? 1 : 0));
    }
    if (c->datatype == wk::xsd_dateTime())
      return cmp_result(b->lexical.compare(c->lexical) < 0
                            ? -1
                            : (b->lexical == c->lexical ? 0 : 1));
    return false;
  }
  const auto* c = std::get_if<PlainLiteral>(&f.constant);
  const auto* b = std::get_if<PlainLiteral>(&bound);
  if (!b || !c) return false;
  return cmp_result(b->lexical.compare(c->lexical) < 0 ? -1 : (b->lexical == c->lexical ? 0 : 1));
}

inline void enumerate(const std::vector<Triple>& triples, const Query& q, std::size_t depth,
                      Bindings bound, std::vector<Bindings>& out) {
  if (depth == q.patterns.size()) {
    for (const auto& f : q.filters) {
      if (!oracle_filter(f, bound.at(f.var))) return;
    }
    out.push_back(std::move(bound));
    return;
  }
  const auto& pattern = q.patterns[depth];
  for (const auto& t : triples) {
    Bindings next = bound;
    if (slot_matches(pattern.subject, Term(t.subject), next) &&
        slot_matches(pattern.predicate, Term(t.predicate), next) &&
        slot_matches(pattern.object, t.object, next)) {
      enumerate(triples, q, depth + 1, std::move(next), out);
    }
  }
}

}  // namespace detail

// Projected rows serialized for multiset comparison (sorted).
inline std::vector<std::string> enumerate_bgp(const Graph& g, const Query& q) {
  std::vector<detail::Bindings> all;
  detail::enumerate(g.triples_sorted(), q, 0, {}, all);
  std::vector<std::string> rows;
  rows.reserve(all.size());
  for (const auto& bound : all) {
    std::string row;
    for (const auto& var : q.select_vars) {
      row += term_token(bound.at(var));
      row.push_back('\t');
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

inline std::vector<std::string> result_multiset(const ResultSet& rs) {
  std::vector<std::string> rows;
  rows.reserve(rs.rows.size());
  for (const auto& r : rs.rows) {
    std::string row;
    for (const auto& term : r.values) {
      row += term_token(term);
      row.push_back('\t');
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

// ---- pearson oracle: textbook two-pass in long double ----------------------

inline double pearson_twopass(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= (long double)n;
  my /= (long double)n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return double(sxy / std::sqrt(sxx * syy));
}

// ---- flat-file pipeline oracle ---------------------------------------------
// Recomputes the correlation table straight from the CSV texts: no RDF, no
// library date math (ISO strings sort chronologically), its own CSV split.

struct FlatCell {
  double r = 0;
  std::size_t n = 0;
};

// datatype -> heading -> cell
using FlatTable = std::map<std::string, std::map<std::string, FlatCell>>;

namespace flat {

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace flat

// `scales`: datatype -> multiplier (pearson is scale-invariant, but keep the
// oracle faithful to the full pipeline anyway).
inline FlatTable flat_pipeline(const std::string& energy_csv, const std::string& climate_csv,
                               int year, const std::vector<std::string>& pv_headings,
                               const std::map<std::string, double>& scales) {
  const std::string lo = std::to_string(year) + "-01-01T00:00:00Z";
  const std::string hi = std::to_string(year + 1) + "-01-01T00:00:00Z";

  // last reading per day per heading, in file (= chronological) order
  const auto elines = flat::lines_of(energy_csv);
  const auto header = flat::split(elines.at(0));
  std::map<std::string, std::map<std::string, double>> last;  // heading -> day -> reading
  for (std::size_t i = 1; i < elines.size(); ++i) {
    if (elines[i].empty()) continue;
    const auto fields = flat::split(elines[i]);
    const std::string& ts = fields.at(0);
    if (ts < lo || !(ts < hi)) continue;
    const std::string day = ts.substr(0, 10);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      if (fields[c].empty()) continue;
      last[header.at(c)][day] = std::strtod(fields[c].c_str(), nullptr);
    }
  }

  // daily differences, skipping negative ones
  std::map<std::string, std::map<std::string, double>> daily;  // heading -> day -> kWh
  for (const auto& [heading, readings] : last) {
    auto it = readings.begin();
    if (it == readings.end()) continue;
    double prev = it->second;
    for (++it; it != readings.end(); ++it) {
      const double diff = it->second - prev;
      if (diff >= 0) daily[heading][it->first] = diff;
      prev = it->second;
    }
  }

  // weather series per datatype
  const auto clines = flat::lines_of(climate_csv);
  std::map<std::string, std::map<std::string, double>> weather;  // datatype -> day -> value
  for (std::size_t i = 1; i < clines.size(); ++i) {
    if (clines[i].empty()) continue;
    const auto fields = flat::split(clines[i]);
    const std::string& date = fields.at(1);
    if (date.substr(0, 4) != std::to_string(year)) continue;
    const auto scale_it = scales.find(fields.at(2));
    const double scale = scale_it == scales.end() ? 1.0 : scale_it->second;
    weather[fields.at(2)][date] = std::strtod(fields.at(3).c_str(), nullptr) * scale;
  }

  FlatTable table;
  for (const auto& [datatype, wseries] : weather) {
    for (const auto& heading : pv_headings) {
      const auto dit = daily.find(heading);
      if (dit == daily.end()) continue;
      std::vector<double> xs, ys;
      for (const auto& [day, energy] : dit->second) {
        const auto wit = wseries.find(day);
        if (wit == wseries.end()) continue;
        xs.push_back(wit->second);
        ys.push_back(energy);
      }
      if (xs.size() < 2) continue;
      table[datatype][heading] = FlatCell{pearson_twopass(xs, ys), xs.size()};
    }
  }
  return table;
}

}  // namespace oracle
