// Shared randomized-input generators for the test suites. Everything is
// seeded and deterministic.
#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "energykg/heading.hpp"
#include "energykg/query.hpp"
#include "energykg/rdf.hpp"
#include "energykg/table.hpp"
#include "energykg/timeutil.hpp"

namespace testgen {

using namespace energykg;

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

// ---- heading descriptors -------------------------------------------------

inline std::vector<std::string> role_kinds(const RoleTable& roles) {
  std::vector<std::string> kinds;
  for (const auto& [kind, role] : roles.entries()) kinds.push_back(kind);
  return kinds;
}

inline SystemDescriptor random_descriptor(Rng& rng, const RoleTable& roles) {
  static const char* countries[] = {"DE", "FR", "NL", "IE", "AT"};
  static const char* localities[] = {"KN", "BN", "X1", "AMS", "DUB"};
  const auto kinds = role_kinds(roles);
  SystemDescriptor d;
  d.country = countries[uniform_int(rng, 0, 4)];
  d.locality = localities[uniform_int(rng, 0, 4)];
  d.site_kind = static_cast<SiteKind>(uniform_int(rng, 0, 2));
  d.site_ordinal = uniform_int(rng, 1, 20);
  d.device_kind = kinds[uniform_int(rng, 0, int(kinds.size()) - 1)];
  if (chance(rng, 0.4)) d.device_ordinal = uniform_int(rng, 1, 9);
  d.power_role = *roles.role(d.device_kind);
  return d;
}

// ---- RDF terms and graphs ------------------------------------------------

inline std::string random_local(Rng& rng) {
  static const char* alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
  std::string out;
  const int n = uniform_int(rng, 1, 12);
  for (int i = 0; i < n; ++i) out.push_back(alphabet[uniform_int(rng, 0, 62)]);
  return out;
}

inline Iri random_iri(Rng& rng) {
  static const char* bases[] = {"http://example.org/a/", "http://example.org/b#",
                                "https://w3id.org/x/", "urn:thing:"};
  return Iri(std::string(bases[uniform_int(rng, 0, 3)]) + random_local(rng));
}

// Lexical forms exercising escapes and multi-byte UTF-8.
inline std::string random_lexical(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "plain", "with space", "quote\"inside", "back\\slash", "tab\tchar",
      "new\nline", "cr\rreturn", "unié", "snow☃man", "",
      "7.25", "2016-05-01T00:00:00Z", "trailing ", " leading"};
  std::string out = pieces[std::size_t(uniform_int(rng, 0, int(pieces.size()) - 1))];
  if (chance(rng, 0.3)) out += pieces[std::size_t(uniform_int(rng, 0, int(pieces.size()) - 1))];
  return out;
}

struct TermPool {
  std::vector<Iri> subjects;
  std::vector<Iri> predicates;
  std::vector<Term> objects;
};

inline TermPool random_pool(Rng& rng, int subjects = 12, int predicates = 6, int objects = 16) {
  TermPool pool;
  for (int i = 0; i < subjects; ++i) pool.subjects.push_back(random_iri(rng));
  for (int i = 0; i < predicates; ++i) pool.predicates.push_back(random_iri(rng));
  for (int i = 0; i < objects; ++i) {
    switch (uniform_int(rng, 0, 3)) {
      case 0:
        pool.objects.emplace_back(random_iri(rng));
        break;
      case 1:
        pool.objects.push_back(double_literal(uniform_real(rng, -1000, 1000)));
        break;
      case 2:
        pool.objects.push_back(datetime_literal(
            Instant(uniform_int(rng, 0, 2'000'000)) * 731 % 1'500'000'000));
        break;
      default:
        pool.objects.push_back(Term(PlainLiteral{random_lexical(rng)}));
    }
  }
  return pool;
}

inline Triple random_triple(Rng& rng, const TermPool& pool) {
  return Triple{pool.subjects[std::size_t(uniform_int(rng, 0, int(pool.subjects.size()) - 1))],
                pool.predicates[std::size_t(uniform_int(rng, 0, int(pool.predicates.size()) - 1))],
                pool.objects[std::size_t(uniform_int(rng, 0, int(pool.objects.size()) - 1))]};
}

inline Graph random_graph(Rng& rng, const TermPool& pool, int max_triples) {
  Graph g;
  const int n = uniform_int(rng, 0, max_triples);
  for (int i = 0; i < n; ++i) g.insert(random_triple(rng, pool));
  return g;
}

// Graph with arbitrary (escape-heavy) terms for round-trip tests.
inline Graph random_nasty_graph(Rng& rng, int max_triples) {
  Graph g;
  const int n = uniform_int(rng, 0, max_triples);
  for (int i = 0; i < n; ++i) {
    Term object = [&]() -> Term {
      switch (uniform_int(rng, 0, 3)) {
        case 0:
          return Term(random_iri(rng));
        case 1:
          return Term(PlainLiteral{random_lexical(rng)});
        case 2:
          return double_literal(uniform_real(rng, -1e6, 1e6));
        default:
          return Term(TypedLiteral{random_lexical(rng), random_iri(rng)});
      }
    }();
    g.insert(Triple{random_iri(rng), random_iri(rng), std::move(object)});
  }
  return g;
}

// ---- queries ---------------------------------------------------------------

// A random BGP over the pool's vocabulary: <=3 patterns, <=1 filter,
// variables drawn from a small shared set so joins actually happen.
inline Query random_query(Rng& rng, const TermPool& pool, const Graph& g, int max_patterns) {
  static const std::vector<std::string> var_names = {"a", "b", "c", "d"};
  Query q;
  const int patterns = uniform_int(rng, 1, max_patterns);
  std::vector<std::string> used_vars;
  const auto var = [&]() -> std::string {
    const auto& name = var_names[std::size_t(uniform_int(rng, 0, int(var_names.size()) - 1))];
    bool seen = false;
    for (const auto& u : used_vars) seen = seen || u == name;
    if (!seen) used_vars.push_back(name);
    return name;
  };
  const auto triples = g.triples_sorted();
  const auto graph_triple = [&]() -> std::optional<Triple> {
    if (triples.empty()) return std::nullopt;
    return triples[std::size_t(uniform_int(rng, 0, int(triples.size()) - 1))];
  };
  for (int i = 0; i < patterns; ++i) {
    // anchor half the patterns on an existing triple so results are nonempty
    const auto anchor = chance(rng, 0.5) ? graph_triple() : std::nullopt;
    const auto pick_s = [&]() -> PatternSlot {
      if (anchor && chance(rng, 0.6)) return Term(anchor->subject);
      if (chance(rng, 0.2))
        return Term(pool.subjects[std::size_t(uniform_int(rng, 0, int(pool.subjects.size()) - 1))]);
      return Var{var()};
    };
    const auto pick_p = [&]() -> PatternSlot {
      if (anchor && chance(rng, 0.6)) return Term(anchor->predicate);
      if (chance(rng, 0.2))
        return Term(
            pool.predicates[std::size_t(uniform_int(rng, 0, int(pool.predicates.size()) - 1))]);
      return Var{var()};
    };
    const auto pick_o = [&]() -> PatternSlot {
      if (anchor && chance(rng, 0.5)) return Term(anchor->object);
      if (chance(rng, 0.2))
        return Term(pool.objects[std::size_t(uniform_int(rng, 0, int(pool.objects.size()) - 1))]);
      return Var{var()};
    };
    q.patterns.push_back(TriplePattern{pick_s(), pick_p(), pick_o()});
  }
  if (used_vars.empty()) {
    // fully ground query; select nothing via star
    q.star = true;
    return q;
  }
  // select a nonempty subset (or star)
  if (chance(rng, 0.3)) {
    q.star = true;
    std::vector<std::string> pattern_vars;
    const auto note = [&](const PatternSlot& slot) {
      if (const auto* v = std::get_if<Var>(&slot)) {
        for (const auto& e : pattern_vars)
          if (e == v->name) return;
        pattern_vars.push_back(v->name);
      }
    };
    for (const auto& p : q.patterns) {
      note(p.subject);
      note(p.predicate);
      note(p.object);
    }
    q.select_vars = pattern_vars;
  } else {
    for (const auto& v : used_vars)
      if (chance(rng, 0.7)) q.select_vars.push_back(v);
    if (q.select_vars.empty()) q.select_vars.push_back(used_vars.front());
  }
  if (chance(rng, 0.5)) {
    FilterExpr f{used_vars[std::size_t(uniform_int(rng, 0, int(used_vars.size()) - 1))],
                 static_cast<CmpOp>(uniform_int(rng, 0, 5)), double_literal(0)};
    switch (uniform_int(rng, 0, 2)) {
      case 0:
        f.constant = double_literal(uniform_real(rng, -1000, 1000));
        break;
      case 1:
        f.constant = datetime_literal(Instant(uniform_int(rng, 0, 1'400'000'000)));
        break;
      default:
        f.constant = Term(PlainLiteral{random_lexical(rng)});
    }
    if (std::holds_alternative<Iri>(f.constant) ||
        (uniform_int(rng, 0, 9) == 0)) {  // occasionally IRI equality
      f.constant = Term(random_iri(rng));
      f.op = chance(rng, 0.5) ? CmpOp::Eq : CmpOp::Ne;
    }
    q.filters.push_back(std::move(f));
  }
  return q;
}

// ---- synthetic correlation fixtures ---------------------------------------

struct Fixture {
  std::vector<std::string> headings;   // PV devices first
  std::size_t pv_devices = 0;
  std::string energy_csv;
  std::string climate_csv;
  int year = 2016;
};

// 7-60 days, 1-6 PV devices, several samples per day, injected missing cells
// and exactly one counter reset.
inline Fixture random_fixture(Rng& rng) {
  Fixture fx;
  const int days = uniform_int(rng, 7, 60);
  const int devices = uniform_int(rng, 1, 6);
  fx.pv_devices = std::size_t(devices);
  for (int d = 0; d < devices; ++d) {
    if (d == 0)
      fx.headings.push_back("DE_KN_residential1_pv");
    else
      fx.headings.push_back("DE_KN_" + std::string(d % 2 ? "industrial" : "residential") +
                            std::to_string(d + 1) + (d % 3 == 0 ? "_pv_1" : "_pv"));
  }
  if (chance(rng, 0.5)) fx.headings.push_back("DE_KN_residential1_dishwasher");

  const int samples_per_day = uniform_int(rng, 1, 4);
  const Day start = parse_day("2016-03-01") + Day(uniform_int(rng, 0, 120));
  std::vector<double> counters(fx.headings.size());
  for (auto& c : counters) c = uniform_real(rng, 0, 100);

  // choose the reset point: one device, one day past the first third
  const int reset_day = uniform_int(rng, days / 3 + 1, days - 2);
  const std::size_t reset_device = std::size_t(uniform_int(rng, 0, int(fx.headings.size()) - 1));
  bool reset_done = false;

  std::string csv = "utc_timestamp";
  for (const auto& h : fx.headings) csv += "," + h;
  csv.push_back('\n');
  for (int d = 0; d < days; ++d) {
    for (int s = 0; s < samples_per_day; ++s) {
      const Instant t = day_start(start + Day(d)) + Instant(s) * (86400 / samples_per_day);
      csv += format_instant(t);
      for (std::size_t h = 0; h < fx.headings.size(); ++h) {
        counters[h] += uniform_real(rng, 0.01, 3.0);
        if (!reset_done && d == reset_day && s == 0 && h == reset_device) {
          counters[h] = uniform_real(rng, 0.0, 1.0);  // counter reset
          reset_done = true;
        }
        if (chance(rng, 0.08)) {
          csv += ",";  // missing cell
        } else {
          csv += "," + canonical_double(counters[h]);
        }
      }
      csv.push_back('\n');
    }
  }
  fx.energy_csv = std::move(csv);

  std::string climate = "station,date,datatype,value,unit\n";
  for (int d = 0; d < days; ++d) {
    const std::string date = format_day(start + Day(d));
    if (!chance(rng, 0.05)) {
      const int tmax = 80 + d * 3 + uniform_int(rng, -20, 20);
      climate += "GHCND:GME00121926," + date + ",TMAX," + std::to_string(tmax) + ",tenths\n";
    }
    if (!chance(rng, 0.05)) {
      const int prcp = (d % 3 == 0) ? uniform_int(rng, 10, 200) : 0;
      climate += "GHCND:GME00121926," + date + ",PRCP," + std::to_string(prcp) + ",tenths\n";
    }
  }
  fx.climate_csv = std::move(climate);
  fx.year = year_of(start);
  return fx;
}

}  // namespace testgen
