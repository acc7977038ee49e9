#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "energykg/iri.hpp"
#include "energykg/timeutil.hpp"

namespace energykg {

struct TypedLiteral {
  std::string lexical;
  Iri datatype;
  bool operator==(const TypedLiteral&) const = default;
};

struct PlainLiteral {
  std::string lexical;
  bool operator==(const PlainLiteral&) const = default;
};

// No blank nodes and no language tags anywhere in this pipeline.
using Term = std::variant<Iri, TypedLiteral, PlainLiteral>;

// Fixed W3C namespaces (not configuration).
namespace wk {
const Iri& xsd_double();
const Iri& xsd_dateTime();
const Iri& rdf_type();
}  // namespace wk

Term double_literal(double value);
Term datetime_literal(Instant t);
std::string canonical_double(double value);

// N-Triples token for a term: <iri>, "lexical"^^<dt> or "lexical".
std::string term_token(const Term& term);
std::string escape_ntriples(std::string_view raw);

struct Triple {
  Iri subject;
  Iri predicate;
  Term object;
  bool operator==(const Triple&) const = default;
};

std::string triple_line(const Triple& t);

// In-memory triple set with subject-, predicate- and object-first permutation
// indexes. Single writer while loading; freeze() marks the transition after
// which the graph is immutable and safe for concurrent readers.
class Graph {
public:
  using TermId = std::uint32_t;
  using Row = std::array<TermId, 3>;

  Graph() = default;
  Graph(Graph&&) = default;
  Graph& operator=(Graph&&) = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // Returns true when the triple was new. Validates literal invariants
  // (finite xsd:double, UTC-only xsd:dateTime).
  bool insert(Triple t);
  void insert_all(const Graph& other);

  bool contains(const Triple& t) const;
  std::size_t size() const { return spo_.size(); }
  bool empty() const { return spo_.empty(); }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  // All triples agreeing with the bound positions, ordered lexicographically
  // by their serialized N-Triples form. The lookup walks the permutation
  // index whose leading positions cover the bound ones, so the most
  // selective bound position is always an index prefix.
  std::vector<Triple> match(const std::optional<Iri>& s, const std::optional<Iri>& p,
                            const std::optional<Term>& o) const;

  // Upper-bound match count used for join planning: the smallest
  // per-position occurrence count among bound positions.
  std::size_t estimate(const std::optional<Iri>& s, const std::optional<Iri>& p,
                       const std::optional<Term>& o) const;

  // Zero-copy variant of match for hot loops: invokes fn(subject, predicate,
  // object) with references into the interned term table, in index order
  // (not the serialized order match() guarantees).
  template <class Fn>
  void scan(const std::optional<Iri>& s, const std::optional<Iri>& p,
            const std::optional<Term>& o, Fn&& fn) const {
    std::optional<TermId> si, pi, oi;
    if (s) {
      si = lookup(Term(*s));
      if (!si) return;
    }
    if (p) {
      pi = lookup(Term(*p));
      if (!pi) return;
    }
    if (o) {
      oi = lookup(*o);
      if (!oi) return;
    }
    for_each_row(si, pi, oi, [&](const Row& row) {
      fn(std::get<Iri>(terms_[row[0]]), std::get<Iri>(terms_[row[1]]), terms_[row[2]]);
    });
  }

  std::vector<Triple> triples_sorted() const { return match(std::nullopt, std::nullopt, std::nullopt); }

  // Full consistency re-scan of all three indexes against the triple set;
  // throws on any disagreement. Test and diagnostics hook.
  void check_index_integrity() const;

private:
  struct LessSPO {
    bool operator()(const Row& a, const Row& b) const {
      return a < b;
    }
  };
  struct LessPOS {
    bool operator()(const Row& a, const Row& b) const {
      return std::array<TermId, 3>{a[1], a[2], a[0]} < std::array<TermId, 3>{b[1], b[2], b[0]};
    }
  };
  struct LessOSP {
    bool operator()(const Row& a, const Row& b) const {
      return std::array<TermId, 3>{a[2], a[0], a[1]} < std::array<TermId, 3>{b[2], b[0], b[1]};
    }
  };

  TermId intern(const Term& term);
  std::optional<TermId> lookup(const Term& term) const;
  Triple materialize(const Row& row) const;
  bool token_less(const Row& a, const Row& b) const;
  std::vector<Row> rows_matching(std::optional<TermId> s, std::optional<TermId> p,
                                 std::optional<TermId> o) const;

  // Walks the permutation index whose leading positions cover the bound
  // ones, so every bound combination is one contiguous range.
  template <class Fn>
  void for_each_row(const std::optional<TermId>& s, const std::optional<TermId>& p,
                    const std::optional<TermId>& o, Fn&& fn) const {
    const auto walk = [&](const auto& set, Row low, auto keep) {
      for (auto it = set.lower_bound(low); it != set.end() && keep(*it); ++it) fn(*it);
    };
    if (s && p && o) {
      const Row row{*s, *p, *o};
      if (spo_.count(row)) fn(row);
    } else if (s && p) {
      walk(spo_, Row{*s, *p, 0}, [&](const Row& r) { return r[0] == *s && r[1] == *p; });
    } else if (p && o) {
      walk(pos_, Row{0, *p, *o}, [&](const Row& r) { return r[1] == *p && r[2] == *o; });
    } else if (s && o) {
      walk(osp_, Row{*s, 0, *o}, [&](const Row& r) { return r[2] == *o && r[0] == *s; });
    } else if (s) {
      walk(spo_, Row{*s, 0, 0}, [&](const Row& r) { return r[0] == *s; });
    } else if (p) {
      walk(pos_, Row{0, *p, 0}, [&](const Row& r) { return r[1] == *p; });
    } else if (o) {
      walk(osp_, Row{0, 0, *o}, [&](const Row& r) { return r[2] == *o; });
    } else {
      for (const Row& r : spo_) fn(r);
    }
  }

  std::vector<Term> terms_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TermId> by_token_;

  std::set<Row, LessSPO> spo_;
  std::set<Row, LessPOS> pos_;
  std::set<Row, LessOSP> osp_;

  std::unordered_map<TermId, std::size_t> s_count_, p_count_, o_count_;

  bool frozen_ = false;
};

}  // namespace energykg
