#include <algorithm>
#include <charconv>
#include <map>

#include "energykg/error.hpp"
#include "energykg/query.hpp"

namespace energykg {

namespace {

// Variables are interned into slot indices at plan time; a binding set is a
// flat slot vector, which keeps the join loops free of per-row map traffic.
using Bindings = std::vector<std::optional<Term>>;

std::optional<double> as_double(const Term& term) {
  const auto* lit = std::get_if<TypedLiteral>(&term);
  if (!lit || !(lit->datatype == wk::xsd_double())) return std::nullopt;
  double v = 0;
  const auto res =
      std::from_chars(lit->lexical.data(), lit->lexical.data() + lit->lexical.size(), v);
  if (res.ec != std::errc() || res.ptr != lit->lexical.data() + lit->lexical.size())
    return std::nullopt;
  return v;
}

std::optional<Instant> as_instant(const Term& term) {
  const auto* lit = std::get_if<TypedLiteral>(&term);
  if (!lit || !(lit->datatype == wk::xsd_dateTime())) return std::nullopt;
  try {
    return parse_instant(lit->lexical);
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool apply_op(CmpOp op, int cmp) {
  switch (op) {
    case CmpOp::Eq: return cmp == 0;
    case CmpOp::Ne: return cmp != 0;
    case CmpOp::Lt: return cmp < 0;
    case CmpOp::Le: return cmp <= 0;
    case CmpOp::Gt: return cmp > 0;
    case CmpOp::Ge: return cmp >= 0;
  }
  return false;
}

// SPARQL-style type errors drop the row rather than aborting evaluation.
bool filter_passes(const FilterExpr& f, const Term& bound) {
  if (std::holds_alternative<Iri>(f.constant)) {
    const bool equal = bound == f.constant;
    return f.op == CmpOp::Eq ? equal : !equal;
  }
  if (const auto* lit = std::get_if<TypedLiteral>(&f.constant)) {
    if (lit->datatype == wk::xsd_double()) {
      const auto lhs = as_double(bound);
      const auto rhs = as_double(f.constant);
      if (!lhs || !rhs) return false;
      return apply_op(f.op, *lhs < *rhs ? -1 : (*lhs > *rhs ? 1 : 0));
    }
    const auto lhs = as_instant(bound);
    const auto rhs = as_instant(f.constant);
    if (!lhs || !rhs) return false;
    return apply_op(f.op, *lhs < *rhs ? -1 : (*lhs > *rhs ? 1 : 0));
  }
  const auto* rhs = std::get_if<PlainLiteral>(&f.constant);
  const auto* lhs = std::get_if<PlainLiteral>(&bound);
  if (!lhs || !rhs) return false;
  return apply_op(f.op, lhs->lexical.compare(rhs->lexical) < 0
                            ? -1
                            : (lhs->lexical == rhs->lexical ? 0 : 1));
}

constexpr int kGround = -1;

// One pattern position, pre-resolved: a ground term or a variable slot.
struct SlotSpec {
  int var = kGround;    // slot index, or kGround
  const Term* term = nullptr;
};

struct PatternSpec {
  SlotSpec s, p, o;
};

struct GateSpec {
  const FilterExpr* filter = nullptr;
  int var = 0;
};

struct Planned {
  std::vector<PatternSpec> steps;                // in evaluation order
  std::vector<std::vector<GateSpec>> gates;      // filters by earliest depth
  std::vector<std::string> vars;                 // slot index -> name
  std::vector<int> select_slots;                 // per select var
  int order_slot = kGround;
};

int intern_var(std::vector<std::string>& vars, const std::string& name) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return int(i);
  vars.push_back(name);
  return int(vars.size()) - 1;
}

// Static greedy plan: repeatedly take the pattern with the most positions
// that are ground-or-bound, breaking ties by the smallest index estimate on
// its ground positions, then by position in the query.
Planned plan(const Graph& g, const Query& q) {
  const std::size_t n = q.patterns.size();
  std::vector<bool> used(n, false);
  std::vector<std::string> bound_vars;
  const auto is_bound = [&](const PatternSlot& slot) {
    const auto* v = std::get_if<Var>(&slot);
    if (!v) return true;
    for (const auto& name : bound_vars)
      if (name == v->name) return true;
    return false;
  };

  std::vector<std::size_t> order;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    int best_rank = -1;
    std::size_t best_est = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      const auto& pat = q.patterns[i];
      const int rank =
          int(is_bound(pat.subject)) + int(is_bound(pat.predicate)) + int(is_bound(pat.object));
      const auto* st = std::get_if<Term>(&pat.subject);
      const auto* pt = std::get_if<Term>(&pat.predicate);
      const auto* ot = std::get_if<Term>(&pat.object);
      const std::size_t est =
          g.estimate(st ? std::optional<Iri>(std::get<Iri>(*st)) : std::nullopt,
                     pt ? std::optional<Iri>(std::get<Iri>(*pt)) : std::nullopt,
                     ot ? std::optional<Term>(*ot) : std::nullopt);
      if (best == n || rank > best_rank || (rank == best_rank && est < best_est)) {
        best = i;
        best_rank = rank;
        best_est = est;
      }
    }
    used[best] = true;
    order.push_back(best);
    for (const PatternSlot* slot :
         {&q.patterns[best].subject, &q.patterns[best].predicate, &q.patterns[best].object}) {
      if (const auto* v = std::get_if<Var>(slot)) {
        bool seen = false;
        for (const auto& name : bound_vars) seen = seen || name == v->name;
        if (!seen) bound_vars.push_back(v->name);
      }
    }
  }

  Planned out;
  const auto spec_of = [&](const PatternSlot& slot) {
    if (const auto* v = std::get_if<Var>(&slot))
      return SlotSpec{intern_var(out.vars, v->name), nullptr};
    return SlotSpec{kGround, std::get_if<Term>(&slot)};
  };
  for (const std::size_t idx : order) {
    const auto& pat = q.patterns[idx];
    out.steps.push_back(
        PatternSpec{spec_of(pat.subject), spec_of(pat.predicate), spec_of(pat.object)});
  }

  // Every select/filter/order variable must name a pattern variable; the
  // parser guarantees it, hand-built queries might not.
  const std::size_t pattern_vars = out.vars.size();
  for (const auto& f : q.filters) intern_var(out.vars, f.var);
  for (const auto& name : q.select_vars) out.select_slots.push_back(intern_var(out.vars, name));
  if (q.order_by) out.order_slot = intern_var(out.vars, q.order_by->var);
  if (out.vars.size() != pattern_vars)
    fail(ErrorKind::Query, "variable ?" + out.vars.back() + " does not occur in any pattern");

  // Attach each filter to the earliest depth at which its variable is bound.
  out.gates.resize(n);
  std::vector<bool> attached(q.filters.size(), false);
  std::vector<bool> have(out.vars.size(), false);
  for (std::size_t depth = 0; depth < n; ++depth) {
    for (const SlotSpec* s : {&out.steps[depth].s, &out.steps[depth].p, &out.steps[depth].o})
      if (s->var != kGround) have[std::size_t(s->var)] = true;
    for (std::size_t fi = 0; fi < q.filters.size(); ++fi) {
      if (attached[fi]) continue;
      const int slot = intern_var(out.vars, q.filters[fi].var);  // always pre-existing
      if (have[std::size_t(slot)]) {
        out.gates[depth].push_back(GateSpec{&q.filters[fi], slot});
        attached[fi] = true;
      }
    }
  }

  return out;
}

// Ground positions of one step under the current bindings; false when a
// subject/predicate variable is bound to a literal (nothing can match).
bool resolve(const PatternSpec& step, const Bindings& bound, std::optional<Iri>& s,
             std::optional<Iri>& p, std::optional<Term>& o) {
  const auto fix_iri = [&](const SlotSpec& spec, std::optional<Iri>& out) {
    if (spec.term) {
      out = std::get<Iri>(*spec.term);
      return true;
    }
    const auto& slot = bound[std::size_t(spec.var)];
    if (!slot) return true;
    const auto* iri = std::get_if<Iri>(&*slot);
    if (!iri) return false;
    out = *iri;
    return true;
  };
  if (step.o.term) {
    o = *step.o.term;
  } else if (const auto& slot = bound[std::size_t(step.o.var)]; slot) {
    o = *slot;
  }
  return fix_iri(step.s, s) && fix_iri(step.p, p);
}

bool term_matches(const Term& bound, const Iri& value) {
  const auto* iri = std::get_if<Iri>(&bound);
  return iri && *iri == value;
}

// Extends `bound` with one matched row; repeated variables within a pattern
// must agree. Term copies happen only for slots that actually bind. Newly
// bound slots are recorded for undo.
bool bind_row(const PatternSpec& step, const Iri& ts, const Iri& tp, const Term& to,
              Bindings& bound, int added[3], int& added_count) {
  const auto bind_iri = [&](const SlotSpec& spec, const Iri& value) {
    if (spec.var == kGround) return true;  // ground positions already matched
    auto& slot = bound[std::size_t(spec.var)];
    if (slot) return term_matches(*slot, value);
    slot = Term(value);
    added[added_count++] = spec.var;
    return true;
  };
  const auto bind_term = [&](const SlotSpec& spec, const Term& value) {
    if (spec.var == kGround) return true;
    auto& slot = bound[std::size_t(spec.var)];
    if (slot) return *slot == value;
    slot = value;
    added[added_count++] = spec.var;
    return true;
  };
  return bind_iri(step.s, ts) && bind_iri(step.p, tp) && bind_term(step.o, to);
}

bool gates_pass(const Planned& planned, std::size_t depth, const Bindings& bound) {
  for (const GateSpec& gate : planned.gates[depth]) {
    if (!filter_passes(*gate.filter, *bound[std::size_t(gate.var)])) return false;
  }
  return true;
}

void join_recursive(const Graph& g, const Planned& planned, std::size_t depth, Bindings& bound,
                    std::vector<Bindings>& out) {
  if (depth == planned.steps.size()) {
    out.push_back(bound);
    return;
  }
  const PatternSpec& step = planned.steps[depth];
  std::optional<Iri> s, p;
  std::optional<Term> o;
  if (!resolve(step, bound, s, p, o)) return;
  g.scan(s, p, o, [&](const Iri& ts, const Iri& tp, const Term& to) {
    int added[3];
    int added_count = 0;
    if (bind_row(step, ts, tp, to, bound, added, added_count) &&
        gates_pass(planned, depth, bound)) {
      join_recursive(g, planned, depth + 1, bound, out);
    }
    for (int i = 0; i < added_count; ++i) bound[std::size_t(added[i])].reset();
  });
}

int compare_order_key(const Term& a, const Term& b) {
  if (const auto da = as_double(a), db = as_double(b); da && db)
    return *da < *db ? -1 : (*da > *db ? 1 : 0);
  if (const auto ta = as_instant(a), tb = as_instant(b); ta && tb)
    return *ta < *tb ? -1 : (*ta > *tb ? 1 : 0);
  const std::string ka = term_token(a);
  const std::string kb = term_token(b);
  return ka.compare(kb);
}

ResultSet assemble(const Query& q, const Planned& planned, std::vector<Bindings> solutions) {
  // Project, then order: ORDER BY key first (which may be an unselected
  // variable), serialized-row comparison as the tiebreak and as the
  // canonical order when no ORDER BY is given.
  struct Staged {
    SolutionRow row;
    const Term* key = nullptr;
    std::string tiebreak;
  };
  std::vector<Staged> staged;
  staged.reserve(solutions.size());
  for (auto& bound : solutions) {
    Staged s;
    s.row.values.reserve(planned.select_slots.size());
    for (const int slot : planned.select_slots) s.row.values.push_back(*bound[std::size_t(slot)]);
    for (const Term& term : s.row.values) {
      s.tiebreak += term_token(term);
      s.tiebreak.push_back('\t');
    }
    staged.push_back(std::move(s));
  }
  if (q.order_by) {
    // keys point into `solutions`, which stays alive across the sort
    for (std::size_t i = 0; i < staged.size(); ++i)
      staged[i].key = &*solutions[i][std::size_t(planned.order_slot)];
  }
  std::stable_sort(staged.begin(), staged.end(), [&](const Staged& a, const Staged& b) {
    if (q.order_by) {
      const int c = compare_order_key(*a.key, *b.key);
      if (c != 0) return q.order_by->descending ? c > 0 : c < 0;
    }
    return a.tiebreak < b.tiebreak;
  });
  if (q.limit && staged.size() > *q.limit) staged.resize(*q.limit);

  ResultSet rs;
  rs.vars = q.select_vars;
  rs.rows.reserve(staged.size());
  for (auto& s : staged) rs.rows.push_back(std::move(s.row));
  return rs;
}

std::vector<Bindings> join_all_serial(const Graph& g, const Planned& planned) {
  std::vector<Bindings> out;
  Bindings bound(planned.vars.size());
  join_recursive(g, planned, 0, bound, out);
  return out;
}

std::vector<Bindings> join_all_parallel(const Graph& g, const Planned& planned) {
  // Split the first pattern's candidate list across threads in fixed-size
  // chunks; each candidate extends independently. Chunk outputs are
  // concatenated in candidate order, so results do not depend on scheduling
  // or thread count.
  const PatternSpec& first = planned.steps[0];
  std::optional<Iri> s, p;
  std::optional<Term> o;
  const Bindings empty(planned.vars.size());
  if (!resolve(first, empty, s, p, o)) return {};
  // Candidate rows as references into the graph's term table (stable while
  // the frozen graph lives), in index order.
  struct RowRef {
    const Iri* s;
    const Iri* p;
    const Term* o;
  };
  std::vector<RowRef> candidates;
  g.scan(s, p, o,
         [&](const Iri& ts, const Iri& tp, const Term& to) { candidates.push_back({&ts, &tp, &to}); });
  const std::size_t per_chunk = 64;
  const std::size_t num_chunks =
      candidates.empty() ? 0 : (candidates.size() + per_chunk - 1) / per_chunk;
  std::vector<std::vector<Bindings>> partial(num_chunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (num_chunks > 1)
#endif
  for (std::size_t c = 0; c < num_chunks; ++c) {
    const std::size_t begin = c * per_chunk;
    const std::size_t end = std::min(candidates.size(), begin + per_chunk);
    Bindings bound(planned.vars.size());
    for (std::size_t i = begin; i < end; ++i) {
      int added[3];
      int added_count = 0;
      if (bind_row(first, *candidates[i].s, *candidates[i].p, *candidates[i].o, bound, added,
                   added_count) &&
          gates_pass(planned, 0, bound)) {
        join_recursive(g, planned, 1, bound, partial[c]);
      }
      for (int j = 0; j < added_count; ++j) bound[std::size_t(added[j])].reset();
    }
  }
  std::vector<Bindings> out;
  std::size_t total = 0;
  for (const auto& part : partial) total += part.size();
  out.reserve(total);
  for (auto& part : partial)
    for (auto& b : part) out.push_back(std::move(b));
  return out;
}

ResultSet evaluate_impl(const Graph& g, const Query& q, bool parallel) {
  if (!g.frozen()) fail(ErrorKind::Query, "graph must be frozen before evaluation");
  const Planned planned = plan(g, q);
  auto solutions = parallel ? join_all_parallel(g, planned) : join_all_serial(g, planned);
  return assemble(q, planned, std::move(solutions));
}

}  // namespace

ResultSet evaluate(const Graph& g, const Query& q) { return evaluate_impl(g, q, true); }

ResultSet evaluate_serial(const Graph& g, const Query& q) { return evaluate_impl(g, q, false); }

}  // namespace energykg
