#include "gsd/interpretation.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace gsd {

int Interpretation::element_index(const std::string& id) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == id) return static_cast<int>(i);
  return -1;
}

Interpretation make_interpretation(std::vector<std::string> elements,
                                   std::map<std::string, std::uint64_t> concept_ext,
                                   std::map<std::string, std::vector<std::uint64_t>> role_ext,
                                   std::map<std::string, int> individuals, bool una) {
  if (elements.empty()) throw Error("interpretation: domain must be non-empty");
  if (elements.size() > kMaxDomain) throw Error("interpretation: domain larger than 64 elements");
  {
    std::vector<std::string> sorted = elements;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error("interpretation: duplicate element id");
  }
  Interpretation out;
  out.elements = std::move(elements);
  out.una = una;
  const std::uint64_t dom = out.domain_mask();
  for (auto& [name, mask] : concept_ext) {
    if (mask & ~dom) throw Error("interpretation: concept extension of " + name + " outside domain");
  }
  for (auto& [name, rows] : role_ext) {
    if (rows.size() != out.elements.size())
      throw Error("interpretation: role extension of " + name + " has wrong row count");
    for (std::uint64_t row : rows)
      if (row & ~dom) throw Error("interpretation: role extension of " + name + " outside domain");
  }
  for (auto& [name, idx] : individuals) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= out.elements.size())
      throw Error("interpretation: individual " + name + " mapped outside domain");
  }
  if (una) {
    std::vector<int> targets;
    for (auto& [name, idx] : individuals) targets.push_back(idx);
    std::sort(targets.begin(), targets.end());
    if (std::adjacent_find(targets.begin(), targets.end()) != targets.end())
      throw Error("interpretation: individual map not injective under una");
  }
  out.concept_ext = std::move(concept_ext);
  out.role_ext = std::move(role_ext);
  out.individuals = std::move(individuals);
  return out;
}

// ── Evaluation ──────────────────────────────────────────────────────────────

namespace {

struct Evaluator {
  const Interpretation& interp;
  std::unordered_map<const void*, std::uint64_t> concept_memo;
  std::unordered_map<const void*, std::vector<std::uint64_t>> role_memo;

  std::size_t dim() const { return interp.size(); }
  std::uint64_t dom() const { return interp.domain_mask(); }

  int element_of(const Term& t) const {
    if (t.is_variable()) throw Error("evaluation: non-ground input (variable ?" + t.name + ")");
    auto it = interp.individuals.find(t.name);
    if (it == interp.individuals.end())
      throw Error("evaluation: individual '" + t.name + "' is not interpreted");
    return it->second;
  }

  const std::vector<std::uint64_t>& role(const RolePtr& r) {
    auto it = role_memo.find(r.get());
    if (it != role_memo.end()) return it->second;
    std::vector<std::uint64_t> rows(dim(), 0);
    using K = RoleExpr::Kind;
    switch (r->kind) {
      case K::Name: {
        auto e = interp.role_ext.find(r->name);
        if (e != interp.role_ext.end()) rows = e->second;
        break;
      }
      case K::Inverse: {
        const auto& sub = role(r->sub);
        for (std::size_t i = 0; i < dim(); ++i)
          for (std::size_t j = 0; j < dim(); ++j)
            if (sub[j] >> i & 1) rows[i] |= std::uint64_t{1} << j;
        break;
      }
      case K::Singleton: {
        int a = element_of(r->t1), b = element_of(r->t2);
        rows[a] |= std::uint64_t{1} << b;
        break;
      }
      case K::Union:
      case K::Difference: {
        const auto& l = role(r->sub);
        const auto& rr = role(r->rhs);
        for (std::size_t i = 0; i < dim(); ++i)
          rows[i] = r->kind == K::Union ? (l[i] | rr[i]) : (l[i] & ~rr[i]);
        break;
      }
      case K::RangeRestrict: {
        const auto& sub = role(r->sub);
        std::uint64_t filter = concept_expr(r->filter);
        for (std::size_t i = 0; i < dim(); ++i) rows[i] = sub[i] & filter;
        break;
      }
      case K::DomainRestrict: {
        const auto& sub = role(r->sub);
        std::uint64_t filter = concept_expr(r->filter);
        for (std::size_t i = 0; i < dim(); ++i) rows[i] = (filter >> i & 1) ? sub[i] : 0;
        break;
      }
    }
    return role_memo.emplace(r.get(), std::move(rows)).first->second;
  }

  std::uint64_t concept_expr(const ConceptPtr& c) {
    auto it = concept_memo.find(c.get());
    if (it != concept_memo.end()) return it->second;
    std::uint64_t mask = 0;
    using K = ConceptExpr::Kind;
    switch (c->kind) {
      case K::Name: {
        auto e = interp.concept_ext.find(c->name);
        if (e != interp.concept_ext.end()) mask = e->second;
        break;
      }
      case K::Nominal:
        mask = std::uint64_t{1} << element_of(c->term);
        break;
      case K::Top: mask = dom(); break;
      case K::Bottom: mask = 0; break;
      case K::And: mask = concept_expr(c->lhs) & concept_expr(c->rhs); break;
      case K::Or: mask = concept_expr(c->lhs) | concept_expr(c->rhs); break;
      case K::Not: mask = dom() & ~concept_expr(c->lhs); break;
      case K::Exists:
      case K::Forall:
      case K::AtLeast:
      case K::AtMost: {
        const auto& rows = role(c->role);
        std::uint64_t filler = concept_expr(c->lhs);
        for (std::size_t i = 0; i < dim(); ++i) {
          int count = std::popcount(rows[i] & filler);
          bool in = false;
          switch (c->kind) {
            case K::Exists: in = count >= 1; break;
            case K::Forall: in = (rows[i] & ~filler) == 0; break;
            case K::AtLeast: in = count >= static_cast<int>(c->n); break;
            default: in = count <= static_cast<int>(c->n); break;
          }
          if (in) mask |= std::uint64_t{1} << i;
        }
        break;
      }
    }
    concept_memo.emplace(c.get(), mask);
    return mask;
  }

  bool axiom(const AxiomPtr& a) {
    using K = Axiom::Kind;
    switch (a->kind) {
      case K::ConceptInclusion:
        return (concept_expr(a->c1) & ~concept_expr(a->c2)) == 0;
      case K::RoleInclusion: {
        const auto& l = role(a->r1);
        const auto& r = role(a->r2);
        for (std::size_t i = 0; i < dim(); ++i)
          if (l[i] & ~r[i]) return false;
        return true;
      }
      case K::ConceptAssertion:
        return concept_expr(a->c1) >> element_of(a->t1) & 1;
      case K::RoleAssertion:
        return role(a->r1)[element_of(a->t1)] >> element_of(a->t2) & 1;
    }
    throw Error("models: bad axiom kind");
  }

  bool formula(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Atom: return axiom(f->atom);
      case Formula::Kind::And: return formula(f->lhs) && formula(f->rhs);
      case Formula::Kind::Or: return formula(f->lhs) || formula(f->rhs);
      case Formula::Kind::Neg: return !formula(f->lhs);
    }
    throw Error("models: bad formula kind");
  }
};

}  // namespace

std::uint64_t eval_concept(const Interpretation& interp, const ConceptPtr& c) {
  Evaluator ev{interp};
  return ev.concept_expr(c);
}

std::vector<std::uint64_t> eval_role(const Interpretation& interp, const RolePtr& r) {
  Evaluator ev{interp};
  return ev.role(r);
}

bool models(const Interpretation& interp, const FormulaPtr& kb) {
  if (!is_ground(kb)) throw Error("models: formula is not ground");
  Evaluator ev{interp};
  return ev.formula(kb);
}

// ── Fingerprint ─────────────────────────────────────────────────────────────

namespace {

// Serializes the interpretation under the given element reordering
// (order[new_index] = old element index).
std::string serialize_under(const Interpretation& interp, const std::vector<int>& order) {
  std::vector<int> pos(interp.size());  // old index -> new index
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  std::ostringstream out;
  out << "d" << interp.size() << ";u" << interp.una << ";";
  for (const auto& [name, mask] : interp.concept_ext) {
    out << "C" << name << "=";
    for (std::size_t i = 0; i < order.size(); ++i)
      if (mask >> order[i] & 1) out << i << ",";
    out << ";";
  }
  for (const auto& [name, rows] : interp.role_ext) {
    out << "R" << name << "=";
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = 0; j < order.size(); ++j)
        if (rows[order[i]] >> order[j] & 1) out << i << ">" << j << ",";
    out << ";";
  }
  for (const auto& [name, idx] : interp.individuals) out << "N" << name << "=" << pos[idx] << ";";
  return out.str();
}

}  // namespace

std::string canonical_fingerprint(const Interpretation& interp) {
  const std::size_t d = interp.size();
  std::vector<bool> named(d, false);
  for (const auto& [name, idx] : interp.individuals) named[idx] = true;

  // Anchor: named elements first, ordered by the sorted set of names that
  // denote them; anonymous elements follow, grouped by an invariant color.
  std::vector<std::vector<std::string>> names_of(d);
  for (const auto& [name, idx] : interp.individuals) names_of[idx].push_back(name);
  for (auto& v : names_of) std::sort(v.begin(), v.end());

  std::vector<int> named_elems, anon_elems;
  for (std::size_t i = 0; i < d; ++i) (named[i] ? named_elems : anon_elems).push_back(static_cast<int>(i));
  std::sort(named_elems.begin(), named_elems.end(),
            [&](int a, int b) { return names_of[a] < names_of[b]; });

  // Invariant color for anonymous elements: concept memberships and degrees.
  auto color = [&](int e) {
    std::ostringstream c;
    for (const auto& [name, mask] : interp.concept_ext) c << (mask >> e & 1);
    for (const auto& [name, rows] : interp.role_ext) {
      int out_deg = std::popcount(rows[e]);
      int in_deg = 0;
      for (std::uint64_t row : rows) in_deg += row >> e & 1;
      c << "|" << out_deg << "." << in_deg;
    }
    return c.str();
  };
  std::stable_sort(anon_elems.begin(), anon_elems.end(),
                   [&](int a, int b) { return color(a) < color(b); });

  // Color classes of anonymous elements; permute within classes and take the
  // minimal serialization.  Falls back to the refined order alone when the
  // class sizes would make that search too large (still deterministic, may
  // then distinguish some isomorphic interpretations).
  std::vector<std::pair<std::size_t, std::size_t>> classes;  // [begin, end) into anon_elems
  for (std::size_t i = 0; i < anon_elems.size();) {
    std::size_t j = i + 1;
    while (j < anon_elems.size() && color(anon_elems[i]) == color(anon_elems[j])) ++j;
    classes.emplace_back(i, j);
    i = j;
  }
  std::uint64_t perm_count = 1;
  for (auto [b, e] : classes) {
    for (std::size_t k = 2; k <= e - b; ++k) {
      perm_count *= k;
      if (perm_count > 40320) break;
    }
    if (perm_count > 40320) break;
  }

  std::vector<int> base_order = named_elems;
  base_order.insert(base_order.end(), anon_elems.begin(), anon_elems.end());
  if (perm_count > 40320 || classes.empty()) return serialize_under(interp, base_order);

  std::string best;
  std::vector<int> anon_perm = anon_elems;
  // Enumerate per-class permutations via odometer over class permutations.
  std::vector<std::vector<int>> class_elems;
  for (auto [b, e] : classes)
    class_elems.emplace_back(anon_elems.begin() + b, anon_elems.begin() + e);
  for (auto& ce : class_elems) std::sort(ce.begin(), ce.end());

  std::vector<std::vector<int>> perms(class_elems.size());
  std::function<void(std::size_t)> rec = [&](std::size_t ci) {
    if (ci == class_elems.size()) {
      std::vector<int> order = named_elems;
      for (const auto& p : perms) order.insert(order.end(), p.begin(), p.end());
      std::string s = serialize_under(interp, order);
      if (best.empty() || s < best) best = std::move(s);
      return;
    }
    std::vector<int> p = class_elems[ci];
    do {
      perms[ci] = p;
      rec(ci + 1);
    } while (std::next_permutation(p.begin(), p.end()));
  };
  rec(0);
  return best;
}

// ── Expansion ───────────────────────────────────────────────────────────────

Interpretation expand_domain(const Interpretation& interp, int k) {
  if (k < 0) throw Error("expand_domain: negative count");
  if (k == 0) return interp;
  if (interp.size() + k > kMaxDomain) throw BudgetError("expand_domain: domain bound 64 exceeded");
  Interpretation out = interp;
  FreshNamePool pool("_a");
  for (const auto& e : out.elements) pool.avoid(e);
  for (const auto& [name, idx] : out.individuals) pool.avoid(name);
  for (int i = 0; i < k; ++i) {
    std::string fresh = pool.next();
    out.individuals[fresh] = static_cast<int>(out.elements.size());
    out.elements.push_back(fresh);
  }
  for (auto& [name, rows] : out.role_ext) rows.resize(out.elements.size(), 0);
  return out;
}

// ── Text format ─────────────────────────────────────────────────────────────

std::string to_string(const Interpretation& interp) {
  std::ostringstream out;
  out << "domain";
  for (const auto& e : interp.elements) out << ' ' << e;
  out << '\n';
  if (interp.una) out << "una on\n";
  for (const auto& [name, idx] : interp.individuals)
    out << "name " << name << " = " << interp.elements[idx] << '\n';
  for (const auto& [name, mask] : interp.concept_ext) {
    out << "concept " << name << " = {";
    bool first = true;
    for (std::size_t i = 0; i < interp.size(); ++i)
      if (mask >> i & 1) {
        if (!first) out << ", ";
        out << interp.elements[i];
        first = false;
      }
    out << "}\n";
  }
  for (const auto& [name, rows] : interp.role_ext) {
    out << "role " << name << " = {";
    bool first = true;
    for (std::size_t i = 0; i < interp.size(); ++i)
      for (std::size_t j = 0; j < interp.size(); ++j)
        if (rows[i] >> j & 1) {
          if (!first) out << ", ";
          out << '(' << interp.elements[i] << ',' << interp.elements[j] << ')';
          first = false;
        }
    out << "}\n";
  }
  return out.str();
}

std::vector<std::string> mask_to_ids(const Interpretation& interp, std::uint64_t mask) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < interp.size(); ++i)
    if (mask >> i & 1) out.push_back(interp.elements[i]);
  return out;
}

}  // namespace gsd
