#include "gsd/syntax.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace gsd {

// ── Factories ───────────────────────────────────────────────────────────────

RolePtr role_name(std::string name) {
  auto r = std::make_shared<RoleExpr>(RoleExpr::Kind::Name);
  r->name = std::move(name);
  return r;
}

RolePtr inverse(const RolePtr& r) {
  using K = RoleExpr::Kind;
  switch (r->kind) {
    case K::Name: {
      auto out = std::make_shared<RoleExpr>(K::Inverse);
      out->sub = r;
      return out;
    }
    case K::Inverse:
      return r->sub;  // inv inv p = p
    case K::Singleton:
      return singleton_role(r->t2, r->t1);
    case K::Union:
      return role_union(inverse(r->sub), inverse(r->rhs));
    case K::Difference:
      return role_difference(inverse(r->sub), inverse(r->rhs));
    case K::RangeRestrict:
      // the converse of "r with range in C" restricts the first component
      return domain_restrict(r->filter, inverse(r->sub));
    case K::DomainRestrict:
      return range_restrict(inverse(r->sub), r->filter);
  }
  throw Error("inverse: bad role kind");
}

RolePtr singleton_role(Term t1, Term t2) {
  auto r = std::make_shared<RoleExpr>(RoleExpr::Kind::Singleton);
  r->t1 = std::move(t1);
  r->t2 = std::move(t2);
  return r;
}

static RolePtr binary_role(RoleExpr::Kind k, RolePtr a, RolePtr b) {
  auto r = std::make_shared<RoleExpr>(k);
  r->sub = std::move(a);
  r->rhs = std::move(b);
  return r;
}

RolePtr role_union(RolePtr a, RolePtr b) { return binary_role(RoleExpr::Kind::Union, std::move(a), std::move(b)); }
RolePtr role_difference(RolePtr a, RolePtr b) { return binary_role(RoleExpr::Kind::Difference, std::move(a), std::move(b)); }

RolePtr range_restrict(RolePtr r, ConceptPtr c) {
  auto out = std::make_shared<RoleExpr>(RoleExpr::Kind::RangeRestrict);
  out->sub = std::move(r);
  out->filter = std::move(c);
  return out;
}

RolePtr domain_restrict(ConceptPtr c, RolePtr r) {
  auto out = std::make_shared<RoleExpr>(RoleExpr::Kind::DomainRestrict);
  out->sub = std::move(r);
  out->filter = std::move(c);
  return out;
}

ConceptPtr concept_name(std::string name) {
  auto c = std::make_shared<ConceptExpr>(ConceptExpr::Kind::Name);
  c->name = std::move(name);
  return c;
}

ConceptPtr nominal(Term t) {
  auto c = std::make_shared<ConceptExpr>(ConceptExpr::Kind::Nominal);
  c->term = std::move(t);
  return c;
}

ConceptPtr top() { return std::make_shared<ConceptExpr>(ConceptExpr::Kind::Top); }
ConceptPtr bottom() { return std::make_shared<ConceptExpr>(ConceptExpr::Kind::Bottom); }

static ConceptPtr binary_concept(ConceptExpr::Kind k, ConceptPtr a, ConceptPtr b) {
  auto c = std::make_shared<ConceptExpr>(k);
  c->lhs = std::move(a);
  c->rhs = std::move(b);
  return c;
}

ConceptPtr c_and(ConceptPtr a, ConceptPtr b) { return binary_concept(ConceptExpr::Kind::And, std::move(a), std::move(b)); }
ConceptPtr c_or(ConceptPtr a, ConceptPtr b) { return binary_concept(ConceptExpr::Kind::Or, std::move(a), std::move(b)); }

ConceptPtr c_not(ConceptPtr c) {
  auto out = std::make_shared<ConceptExpr>(ConceptExpr::Kind::Not);
  out->lhs = std::move(c);
  return out;
}

static ConceptPtr restriction(ConceptExpr::Kind k, std::uint32_t n, RolePtr r, ConceptPtr filler) {
  auto c = std::make_shared<ConceptExpr>(k);
  c->n = n;
  c->role = std::move(r);
  c->lhs = std::move(filler);
  return c;
}

ConceptPtr exists(RolePtr r, ConceptPtr c) { return restriction(ConceptExpr::Kind::Exists, 0, std::move(r), std::move(c)); }
ConceptPtr forall(RolePtr r, ConceptPtr c) { return restriction(ConceptExpr::Kind::Forall, 0, std::move(r), std::move(c)); }
ConceptPtr at_least(std::uint32_t n, RolePtr r, ConceptPtr c) { return restriction(ConceptExpr::Kind::AtLeast, n, std::move(r), std::move(c)); }
ConceptPtr at_most(std::uint32_t n, RolePtr r, ConceptPtr c) { return restriction(ConceptExpr::Kind::AtMost, n, std::move(r), std::move(c)); }

AxiomPtr concept_inclusion(ConceptPtr lhs, ConceptPtr rhs) {
  auto a = std::make_shared<Axiom>(Axiom::Kind::ConceptInclusion);
  a->c1 = std::move(lhs);
  a->c2 = std::move(rhs);
  return a;
}

AxiomPtr role_inclusion(RolePtr lhs, RolePtr rhs) {
  auto a = std::make_shared<Axiom>(Axiom::Kind::RoleInclusion);
  a->r1 = std::move(lhs);
  a->r2 = std::move(rhs);
  return a;
}

AxiomPtr concept_assertion(Term t, ConceptPtr c) {
  auto a = std::make_shared<Axiom>(Axiom::Kind::ConceptAssertion);
  a->t1 = std::move(t);
  a->c1 = std::move(c);
  return a;
}

AxiomPtr role_assertion(Term t1, Term t2, RolePtr r) {
  auto a = std::make_shared<Axiom>(Axiom::Kind::RoleAssertion);
  a->t1 = std::move(t1);
  a->t2 = std::move(t2);
  a->r1 = std::move(r);
  return a;
}

FormulaPtr f_atom(AxiomPtr a) {
  auto f = std::make_shared<Formula>(Formula::Kind::Atom);
  f->atom = std::move(a);
  return f;
}

static FormulaPtr binary_formula(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>(k);
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}

FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return binary_formula(Formula::Kind::And, std::move(a), std::move(b)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return binary_formula(Formula::Kind::Or, std::move(a), std::move(b)); }

FormulaPtr f_neg(FormulaPtr f) {
  auto out = std::make_shared<Formula>(Formula::Kind::Neg);
  out->lhs = std::move(f);
  return out;
}

Step add_concept(std::string target, ConceptPtr payload) {
  Step s;
  s.kind = Step::Kind::AddConcept;
  s.target = std::move(target);
  s.concept_payload = std::move(payload);
  return s;
}

Step remove_concept(std::string target, ConceptPtr payload) {
  Step s = add_concept(std::move(target), std::move(payload));
  s.kind = Step::Kind::RemoveConcept;
  return s;
}

Step add_role(std::string target, RolePtr payload) {
  Step s;
  s.kind = Step::Kind::AddRole;
  s.target = std::move(target);
  s.role_payload = std::move(payload);
  return s;
}

Step remove_role(std::string target, RolePtr payload) {
  Step s = add_role(std::move(target), std::move(payload));
  s.kind = Step::Kind::RemoveRole;
  return s;
}

Step conditional(FormulaPtr guard, Action then_branch, Action else_branch) {
  Step s;
  s.kind = Step::Kind::Conditional;
  s.guard = std::move(guard);
  s.then_branch = std::make_shared<Action>(std::move(then_branch));
  s.else_branch = std::make_shared<Action>(std::move(else_branch));
  return s;
}

Action concat(const Action& a, const Action& b) {
  Action out;
  out.steps.reserve(a.steps.size() + b.steps.size());
  out.steps.insert(out.steps.end(), a.steps.begin(), a.steps.end());
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return out;
}

// ── Structural equality ─────────────────────────────────────────────────────

bool equal(const RolePtr& a, const RolePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  using K = RoleExpr::Kind;
  switch (a->kind) {
    case K::Name: return a->name == b->name;
    case K::Inverse: return equal(a->sub, b->sub);
    case K::Singleton: return a->t1 == b->t1 && a->t2 == b->t2;
    case K::Union:
    case K::Difference: return equal(a->sub, b->sub) && equal(a->rhs, b->rhs);
    case K::RangeRestrict:
    case K::DomainRestrict: return equal(a->sub, b->sub) && equal(a->filter, b->filter);
  }
  return false;
}

bool equal(const ConceptPtr& a, const ConceptPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  using K = ConceptExpr::Kind;
  switch (a->kind) {
    case K::Name: return a->name == b->name;
    case K::Nominal: return a->term == b->term;
    case K::Top:
    case K::Bottom: return true;
    case K::And:
    case K::Or: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case K::Not: return equal(a->lhs, b->lhs);
    case K::Exists:
    case K::Forall: return equal(a->role, b->role) && equal(a->lhs, b->lhs);
    case K::AtLeast:
    case K::AtMost: return a->n == b->n && equal(a->role, b->role) && equal(a->lhs, b->lhs);
  }
  return false;
}

bool equal(const AxiomPtr& a, const AxiomPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  using K = Axiom::Kind;
  switch (a->kind) {
    case K::ConceptInclusion: return equal(a->c1, b->c1) && equal(a->c2, b->c2);
    case K::RoleInclusion: return equal(a->r1, b->r1) && equal(a->r2, b->r2);
    case K::ConceptAssertion: return a->t1 == b->t1 && equal(a->c1, b->c1);
    case K::RoleAssertion: return a->t1 == b->t1 && a->t2 == b->t2 && equal(a->r1, b->r1);
  }
  return false;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  using K = Formula::Kind;
  switch (a->kind) {
    case K::Atom: return equal(a->atom, b->atom);
    case K::And:
    case K::Or: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case K::Neg: return equal(a->lhs, b->lhs);
  }
  return false;
}

static bool equal_step(const Step& a, const Step& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Step::Kind::AddConcept:
    case Step::Kind::RemoveConcept:
      return a.target == b.target && equal(a.concept_payload, b.concept_payload);
    case Step::Kind::AddRole:
    case Step::Kind::RemoveRole:
      return a.target == b.target && equal(a.role_payload, b.role_payload);
    case Step::Kind::Conditional:
      return equal(a.guard, b.guard) && equal(*a.then_branch, *b.then_branch) &&
             equal(*a.else_branch, *b.else_branch);
  }
  return false;
}

bool equal(const Action& a, const Action& b) {
  if (a.steps.size() != b.steps.size()) return false;
  for (std::size_t i = 0; i < a.steps.size(); ++i)
    if (!equal_step(a.steps[i], b.steps[i])) return false;
  return true;
}

// ── Printing ────────────────────────────────────────────────────────────────
// Precedence levels; children printed with parentheses when their level is
// lower than required, and right children of equal level are parenthesized so
// re-parsing restores the same (left-associated) tree.

namespace {

constexpr int kConceptOr = 1, kConceptAnd = 2, kConceptUnary = 3, kConceptPrim = 4;
constexpr int kRoleSum = 1, kRolePostfix = 2, kRolePrim = 3;
constexpr int kFormulaOr = 1, kFormulaAnd = 2, kFormulaNeg = 3, kFormulaAtom = 4;

int concept_level(const ConceptExpr& c) {
  using K = ConceptExpr::Kind;
  switch (c.kind) {
    case K::Or: return kConceptOr;
    case K::And: return kConceptAnd;
    case K::Not:
    case K::Exists:
    case K::Forall:
    case K::AtLeast:
    case K::AtMost: return kConceptUnary;
    default: return kConceptPrim;
  }
}

int role_level(const RoleExpr& r) {
  using K = RoleExpr::Kind;
  switch (r.kind) {
    case K::Union:
    case K::Difference: return kRoleSum;
    case K::RangeRestrict: return kRolePostfix;
    default: return kRolePrim;
  }
}

void print_concept(std::string& out, const ConceptPtr& c, int min_level);
void print_role(std::string& out, const RolePtr& r, int min_level);

void print_term(std::string& out, const Term& t) {
  if (t.is_variable()) out += '?';
  out += t.name;
}

void print_role(std::string& out, const RolePtr& r, int min_level) {
  const int level = role_level(*r);
  const bool parens = level < min_level;
  if (parens) out += '(';
  using K = RoleExpr::Kind;
  switch (r->kind) {
    case K::Name:
      out += r->name;
      break;
    case K::Inverse:
      out += "inv ";
      out += r->sub->name;
      break;
    case K::Singleton:
      out += "{(";
      print_term(out, r->t1);
      out += ',';
      print_term(out, r->t2);
      out += ")}";
      break;
    case K::Union:
    case K::Difference:
      print_role(out, r->sub, kRoleSum);
      out += r->kind == K::Union ? " + " : " - ";
      print_role(out, r->rhs, kRoleSum + 1);
      break;
    case K::RangeRestrict:
      print_role(out, r->sub, kRolePostfix);
      out += " | ";
      print_concept(out, r->filter, kConceptPrim);
      break;
    case K::DomainRestrict:
      // internal-only form; the leading bracket is rejected by the parser
      out += '[';
      print_concept(out, r->filter, 0);
      out += "] ";
      print_role(out, r->sub, kRolePrim);
      break;
  }
  if (parens) out += ')';
}

void print_concept(std::string& out, const ConceptPtr& c, int min_level) {
  const int level = concept_level(*c);
  const bool parens = level < min_level;
  if (parens) out += '(';
  using K = ConceptExpr::Kind;
  switch (c->kind) {
    case K::Name:
      out += c->name;
      break;
    case K::Nominal:
      out += '{';
      print_term(out, c->term);
      out += '}';
      break;
    case K::Top: out += "Top"; break;
    case K::Bottom: out += "Bot"; break;
    case K::And:
    case K::Or:
      print_concept(out, c->lhs, level);
      out += c->kind == K::And ? " and " : " or ";
      print_concept(out, c->rhs, level + 1);
      break;
    case K::Not:
      out += "not ";
      print_concept(out, c->lhs, kConceptUnary);
      break;
    case K::Exists:
    case K::Forall:
    case K::AtLeast:
    case K::AtMost:
      if (c->kind == K::Exists) out += "exists ";
      else if (c->kind == K::Forall) out += "forall ";
      else if (c->kind == K::AtLeast) out += "atleast " + std::to_string(c->n) + " ";
      else out += "atmost " + std::to_string(c->n) + " ";
      print_role(out, c->role, kRoleSum);
      out += " . ";
      print_concept(out, c->lhs, kConceptUnary);
      break;
  }
  if (parens) out += ')';
}

void print_axiom(std::string& out, const AxiomPtr& a) {
  using K = Axiom::Kind;
  switch (a->kind) {
    case K::ConceptInclusion:
      print_concept(out, a->c1, kConceptOr);
      out += " <= ";
      print_concept(out, a->c2, kConceptOr);
      break;
    case K::RoleInclusion:
      print_role(out, a->r1, kRoleSum);
      out += " <= ";
      print_role(out, a->r2, kRoleSum);
      break;
    case K::ConceptAssertion:
      print_term(out, a->t1);
      out += " : ";
      print_concept(out, a->c1, kConceptOr);
      break;
    case K::RoleAssertion:
      out += '(';
      print_term(out, a->t1);
      out += ',';
      print_term(out, a->t2);
      out += ") : ";
      print_role(out, a->r1, kRoleSum);
      break;
  }
}

void print_formula(std::string& out, const FormulaPtr& f, int min_level) {
  const int level = f->kind == Formula::Kind::Atom ? kFormulaAtom
                  : f->kind == Formula::Kind::Neg  ? kFormulaNeg
                  : f->kind == Formula::Kind::And  ? kFormulaAnd
                                                   : kFormulaOr;
  const bool parens = level < min_level;
  if (parens) out += '(';
  switch (f->kind) {
    case Formula::Kind::Atom:
      print_axiom(out, f->atom);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      print_formula(out, f->lhs, level);
      out += f->kind == Formula::Kind::And ? " & " : " v ";
      print_formula(out, f->rhs, level + 1);
      break;
    case Formula::Kind::Neg:
      out += "! ";
      print_formula(out, f->lhs, kFormulaNeg);
      break;
  }
  if (parens) out += ')';
}

void print_action(std::string& out, const Action& a);

void print_step(std::string& out, const Step& s) {
  switch (s.kind) {
    case Step::Kind::AddConcept:
    case Step::Kind::RemoveConcept:
      out += s.target;
      out += s.kind == Step::Kind::AddConcept ? " += " : " -= ";
      print_concept(out, s.concept_payload, kConceptOr);
      break;
    case Step::Kind::AddRole:
    case Step::Kind::RemoveRole:
      out += s.target;
      out += s.kind == Step::Kind::AddRole ? " += " : " -= ";
      print_role(out, s.role_payload, kRoleSum);
      break;
    case Step::Kind::Conditional:
      out += "if ";
      print_formula(out, s.guard, kFormulaOr);
      out += " then { ";
      print_action(out, *s.then_branch);
      out += " }";
      if (!s.else_branch->empty()) {
        out += " else { ";
        print_action(out, *s.else_branch);
        out += " }";
      }
      break;
  }
}

void print_action(std::string& out, const Action& a) {
  if (a.empty()) {
    out += "skip";
    return;
  }
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    if (i) out += " ; ";
    print_step(out, a.steps[i]);
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  print_term(out, t);
  return out;
}

std::string to_string(const ConceptPtr& c) {
  std::string out;
  print_concept(out, c, 0);
  return out;
}

std::string to_string(const RolePtr& r) {
  std::string out;
  print_role(out, r, 0);
  return out;
}

std::string to_string(const AxiomPtr& a) {
  std::string out;
  print_axiom(out, a);
  return out;
}

std::string to_string(const FormulaPtr& f) {
  std::string out;
  print_formula(out, f, 0);
  return out;
}

std::string to_string(const Action& a) {
  std::string out;
  print_action(out, a);
  return out;
}

// ── Signature / variables ───────────────────────────────────────────────────

void Signature::merge(const Signature& other) {
  concept_names.insert(other.concept_names.begin(), other.concept_names.end());
  role_names.insert(other.role_names.begin(), other.role_names.end());
  individuals.insert(other.individuals.begin(), other.individuals.end());
  max_counting_rank = std::max(max_counting_rank, other.max_counting_rank);
}

namespace {

struct Collector {
  Signature sig;
  std::vector<std::string> vars;  // first-occurrence order
  std::set<std::string> seen_vars;

  void term(const Term& t) {
    if (t.is_variable()) {
      if (seen_vars.insert(t.name).second) vars.push_back(t.name);
    } else {
      sig.individuals.insert(t.name);
    }
  }

  void role(const RolePtr& r) {
    using K = RoleExpr::Kind;
    switch (r->kind) {
      case K::Name: sig.role_names.insert(r->name); break;
      case K::Inverse: role(r->sub); break;
      case K::Singleton: term(r->t1); term(r->t2); break;
      case K::Union:
      case K::Difference: role(r->sub); role(r->rhs); break;
      case K::RangeRestrict:
      case K::DomainRestrict: role(r->sub); concept_expr(r->filter); break;
    }
  }

  void concept_expr(const ConceptPtr& c) {
    using K = ConceptExpr::Kind;
    switch (c->kind) {
      case K::Name: sig.concept_names.insert(c->name); break;
      case K::Nominal: term(c->term); break;
      case K::Top:
      case K::Bottom: break;
      case K::And:
      case K::Or: concept_expr(c->lhs); concept_expr(c->rhs); break;
      case K::Not: concept_expr(c->lhs); break;
      case K::Exists:
      case K::Forall: role(c->role); concept_expr(c->lhs); break;
      case K::AtLeast:
      case K::AtMost:
        sig.max_counting_rank = std::max(sig.max_counting_rank, c->n);
        role(c->role);
        concept_expr(c->lhs);
        break;
    }
  }

  void axiom(const AxiomPtr& a) {
    using K = Axiom::Kind;
    switch (a->kind) {
      case K::ConceptInclusion: concept_expr(a->c1); concept_expr(a->c2); break;
      case K::RoleInclusion: role(a->r1); role(a->r2); break;
      case K::ConceptAssertion: term(a->t1); concept_expr(a->c1); break;
      case K::RoleAssertion: term(a->t1); term(a->t2); role(a->r1); break;
    }
  }

  void formula(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Atom: axiom(f->atom); break;
      case Formula::Kind::And:
      case Formula::Kind::Or: formula(f->lhs); formula(f->rhs); break;
      case Formula::Kind::Neg: formula(f->lhs); break;
    }
  }

  void action(const Action& a) {
    for (const Step& s : a.steps) {
      switch (s.kind) {
        case Step::Kind::AddConcept:
        case Step::Kind::RemoveConcept:
          sig.concept_names.insert(s.target);
          concept(s.concept_payload);
          break;
        case Step::Kind::AddRole:
        case Step::Kind::RemoveRole:
          sig.role_names.insert(s.target);
          role(s.role_payload);
          break;
        case Step::Kind::Conditional:
          formula(s.guard);
          action(*s.then_branch);
          action(*s.else_branch);
          break;
      }
    }
  }
};

}  // namespace

Signature signature_of(const FormulaPtr& f) {
  Collector c;
  c.formula(f);
  return std::move(c.sig);
}

Signature signature_of(const Action& a) {
  Collector c;
  c.action(a);
  return std::move(c.sig);
}

Signature signature_of(const ConceptPtr& cp) {
  Collector c;
  c.concept_expr(cp);
  return std::move(c.sig);
}

Signature signature_of(const RolePtr& r) {
  Collector c;
  c.role(r);
  return std::move(c.sig);
}

std::vector<std::string> free_variables(const FormulaPtr& f) {
  Collector c;
  c.formula(f);
  return std::move(c.vars);
}

std::vector<std::string> free_variables(const Action& a) {
  Collector c;
  c.action(a);
  return std::move(c.vars);
}

bool is_ground(const FormulaPtr& f) { return free_variables(f).empty(); }
bool is_ground(const Action& a) { return free_variables(a).empty(); }

// ── Substitution ────────────────────────────────────────────────────────────

namespace {

Term subst_term(const Term& t, const Substitution& s) {
  if (t.is_variable()) {
    auto it = s.find(t.name);
    if (it != s.end()) return Term::individual(it->second);
  }
  return t;
}

RolePtr subst_role(const RolePtr& r, const Substitution& s);

ConceptPtr subst_concept(const ConceptPtr& c, const Substitution& s) {
  using K = ConceptExpr::Kind;
  switch (c->kind) {
    case K::Name:
    case K::Top:
    case K::Bottom: return c;
    case K::Nominal: {
      Term t = subst_term(c->term, s);
      return t == c->term ? c : nominal(t);
    }
    case K::And:
    case K::Or: {
      auto l = subst_concept(c->lhs, s), r = subst_concept(c->rhs, s);
      if (l == c->lhs && r == c->rhs) return c;
      return c->kind == K::And ? c_and(l, r) : c_or(l, r);
    }
    case K::Not: {
      auto l = subst_concept(c->lhs, s);
      return l == c->lhs ? c : c_not(l);
    }
    case K::Exists:
    case K::Forall:
    case K::AtLeast:
    case K::AtMost: {
      auto role = subst_role(c->role, s);
      auto filler = subst_concept(c->lhs, s);
      if (role == c->role && filler == c->lhs) return c;
      switch (c->kind) {
        case K::Exists: return exists(role, filler);
        case K::Forall: return forall(role, filler);
        case K::AtLeast: return at_least(c->n, role, filler);
        default: return at_most(c->n, role, filler);
      }
    }
  }
  throw Error("subst_concept: bad kind");
}

RolePtr subst_role(const RolePtr& r, const Substitution& s) {
  using K = RoleExpr::Kind;
  switch (r->kind) {
    case K::Name:
    case K::Inverse: return r;
    case K::Singleton: {
      Term a = subst_term(r->t1, s), b = subst_term(r->t2, s);
      if (a == r->t1 && b == r->t2) return r;
      return singleton_role(a, b);
    }
    case K::Union:
    case K::Difference: {
      auto l = subst_role(r->sub, s), rr = subst_role(r->rhs, s);
      if (l == r->sub && rr == r->rhs) return r;
      return r->kind == K::Union ? role_union(l, rr) : role_difference(l, rr);
    }
    case K::RangeRestrict:
    case K::DomainRestrict: {
      auto sub = subst_role(r->sub, s);
      auto filter = subst_concept(r->filter, s);
      if (sub == r->sub && filter == r->filter) return r;
      return r->kind == K::RangeRestrict ? range_restrict(sub, filter) : domain_restrict(filter, sub);
    }
  }
  throw Error("subst_role: bad kind");
}

AxiomPtr subst_axiom(const AxiomPtr& a, const Substitution& s) {
  using K = Axiom::Kind;
  switch (a->kind) {
    case K::ConceptInclusion: {
      auto l = subst_concept(a->c1, s), r = subst_concept(a->c2, s);
      if (l == a->c1 && r == a->c2) return a;
      return concept_inclusion(l, r);
    }
    case K::RoleInclusion: {
      auto l = subst_role(a->r1, s), r = subst_role(a->r2, s);
      if (l == a->r1 && r == a->r2) return a;
      return role_inclusion(l, r);
    }
    case K::ConceptAssertion: {
      Term t = subst_term(a->t1, s);
      auto c = subst_concept(a->c1, s);
      if (t == a->t1 && c == a->c1) return a;
      return concept_assertion(t, c);
    }
    case K::RoleAssertion: {
      Term t1 = subst_term(a->t1, s), t2 = subst_term(a->t2, s);
      auto r = subst_role(a->r1, s);
      if (t1 == a->t1 && t2 == a->t2 && r == a->r1) return a;
      return role_assertion(t1, t2, r);
    }
  }
  throw Error("subst_axiom: bad kind");
}

FormulaPtr subst_formula(const FormulaPtr& f, const Substitution& s) {
  switch (f->kind) {
    case Formula::Kind::Atom: {
      auto a = subst_axiom(f->atom, s);
      return a == f->atom ? f : f_atom(a);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      auto l = subst_formula(f->lhs, s), r = subst_formula(f->rhs, s);
      if (l == f->lhs && r == f->rhs) return f;
      return f->kind == Formula::Kind::And ? f_and(l, r) : f_or(l, r);
    }
    case Formula::Kind::Neg: {
      auto l = subst_formula(f->lhs, s);
      return l == f->lhs ? f : f_neg(l);
    }
  }
  throw Error("subst_formula: bad kind");
}

Action subst_action(const Action& a, const Substitution& s) {
  Action out;
  out.steps.reserve(a.steps.size());
  for (const Step& st : a.steps) {
    Step copy = st;
    switch (st.kind) {
      case Step::Kind::AddConcept:
      case Step::Kind::RemoveConcept:
        copy.concept_payload = subst_concept(st.concept_payload, s);
        break;
      case Step::Kind::AddRole:
      case Step::Kind::RemoveRole:
        copy.role_payload = subst_role(st.role_payload, s);
        break;
      case Step::Kind::Conditional:
        copy.guard = subst_formula(st.guard, s);
        copy.then_branch = std::make_shared<Action>(subst_action(*st.then_branch, s));
        copy.else_branch = std::make_shared<Action>(subst_action(*st.else_branch, s));
        break;
    }
    out.steps.push_back(std::move(copy));
  }
  return out;
}

}  // namespace

FormulaPtr apply_substitution(const FormulaPtr& f, const Substitution& s) { return subst_formula(f, s); }
Action apply_substitution(const Action& a, const Substitution& s) { return subst_action(a, s); }
ConceptPtr apply_substitution(const ConceptPtr& c, const Substitution& s) { return subst_concept(c, s); }
RolePtr apply_substitution(const RolePtr& r, const Substitution& s) { return subst_role(r, s); }

std::pair<Action, Substitution> canonical_grounding(const Action& alpha,
                                                    const std::set<std::string>& avoid) {
  std::vector<std::string> vars = free_variables(alpha);
  if (vars.empty()) return {alpha, {}};
  Signature sig = signature_of(alpha);
  FreshNamePool pool("_f", avoid);
  pool.avoid_all(sig.individuals);
  Substitution subst;
  for (const std::string& v : vars) subst[v] = pool.next();
  return {apply_substitution(alpha, subst), subst};
}

// ── Fragment checks ─────────────────────────────────────────────────────────

namespace {

// C1, C2 of a lightweight concept inclusion: a concept name or exists p . Top
// / exists (inv p) . Top.
bool is_basic_inclusion_concept(const ConceptPtr& c) {
  using K = ConceptExpr::Kind;
  if (c->kind == K::Name) return true;
  if (c->kind == K::Exists && c->lhs->kind == K::Top) {
    const RoleExpr& r = *c->role;
    return r.kind == RoleExpr::Kind::Name || r.kind == RoleExpr::Kind::Inverse;
  }
  return false;
}

bool is_basic_role(const RolePtr& r) {
  return r->kind == RoleExpr::Kind::Name || r->kind == RoleExpr::Kind::Inverse;
}

bool role_filters_bplus(const RolePtr& r) {
  using K = RoleExpr::Kind;
  switch (r->kind) {
    case K::Name:
    case K::Inverse:
    case K::Singleton: return true;
    case K::Union:
    case K::Difference: return role_filters_bplus(r->sub) && role_filters_bplus(r->rhs);
    case K::RangeRestrict:
    case K::DomainRestrict: return role_filters_bplus(r->sub) && is_bplus_concept(r->filter);
  }
  return false;
}

struct FragmentCollector {
  std::vector<std::string> violations;

  void violation(const std::string& what, const std::string& term) {
    violations.push_back(what + ": " + term);
  }

  void check_inclusion(const AxiomPtr& a) {
    if (a->kind == Axiom::Kind::ConceptInclusion) {
      ConceptPtr rhs = a->c2;
      if (rhs->kind == ConceptExpr::Kind::Not) rhs = rhs->lhs;
      if (!is_basic_inclusion_concept(a->c1))
        violation("concept inclusion left side not basic", to_string(a->c1));
      if (!is_basic_inclusion_concept(rhs))
        violation("concept inclusion right side not basic", to_string(a->c2));
    } else {
      // Negative role inclusions (r1 disjoint from r2) have no surface
      // complement syntax; they are written r1 <= r1 - r2, which is
      // equivalent.  Accept exactly that shape besides plain r1 <= r2.
      if (!is_basic_role(a->r1))
        violation("role inclusion left side not basic", to_string(a->r1));
      const RolePtr& rhs = a->r2;
      if (is_basic_role(rhs)) {
        // positive inclusion
      } else if (rhs->kind == RoleExpr::Kind::Difference && equal(rhs->sub, a->r1) &&
                 is_basic_role(rhs->rhs)) {
        // disjointness form
      } else {
        violation("role inclusion right side not basic", to_string(a->r2));
      }
    }
  }

  void check_assertion(const AxiomPtr& a) {
    if (a->kind == Axiom::Kind::ConceptAssertion) {
      if (!is_bplus_concept(a->c1))
        violation("concept assertion outside B+", to_string(a->c1));
    } else {
      if (!role_filters_bplus(a->r1))
        violation("role assertion filter outside B+", to_string(a->r1));
    }
  }

  void formula(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind) {
      case K::Atom:
        if (f->atom->kind == Axiom::Kind::ConceptInclusion || f->atom->kind == Axiom::Kind::RoleInclusion)
          check_inclusion(f->atom);
        else
          check_assertion(f->atom);
        break;
      case K::And:
      case K::Or:
        formula(f->lhs);
        formula(f->rhs);
        break;
      case K::Neg:
        if (f->lhs->kind != K::Atom ||
            (f->lhs->atom->kind != Axiom::Kind::ConceptAssertion &&
             f->lhs->atom->kind != Axiom::Kind::RoleAssertion)) {
          violation("negation not in front of an assertion", to_string(f->lhs));
          formula(f->lhs);
        } else {
          check_assertion(f->lhs->atom);
        }
        break;
    }
  }
};

}  // namespace

bool is_bplus_concept(const ConceptPtr& c) {
  using K = ConceptExpr::Kind;
  switch (c->kind) {
    case K::Name:
    case K::Nominal:
    case K::Top:
    case K::Bottom: return true;
    case K::And:
    case K::Or: return is_bplus_concept(c->lhs) && is_bplus_concept(c->rhs);
    case K::Not: return is_bplus_concept(c->lhs);
    case K::Exists: return c->lhs->kind == K::Top && role_filters_bplus(c->role);
    case K::Forall:
    case K::AtLeast:
    case K::AtMost: return false;
  }
  return false;
}

FragmentCheck is_dllite_formula(const FormulaPtr& f) {
  FragmentCollector fc;
  fc.formula(f);
  FragmentCheck out;
  out.ok = fc.violations.empty();
  out.violations = std::move(fc.violations);
  return out;
}

namespace {

struct SimpleActionCollector {
  std::vector<std::string> violations;

  void guard_formula(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Atom:
        if (f->atom->kind == Axiom::Kind::ConceptInclusion || f->atom->kind == Axiom::Kind::RoleInclusion)
          violations.push_back("inclusion occurs in guard: " + to_string(f->atom));
        else
          check_assertion_concepts(f->atom);
        break;
      case Formula::Kind::And:
      case Formula::Kind::Or:
        guard_formula(f->lhs);
        guard_formula(f->rhs);
        break;
      case Formula::Kind::Neg:
        guard_formula(f->lhs);
        break;
    }
  }

  void check_assertion_concepts(const AxiomPtr& a) {
    if (a->kind == Axiom::Kind::ConceptAssertion) {
      if (!is_bplus_concept(a->c1))
        violations.push_back("concept outside B+: " + to_string(a->c1));
    } else if (a->kind == Axiom::Kind::RoleAssertion) {
      if (!role_filters_bplus(a->r1))
        violations.push_back("role filter outside B+: " + to_string(a->r1));
    }
  }

  void action(const Action& a) {
    for (const Step& s : a.steps) {
      switch (s.kind) {
        case Step::Kind::AddConcept:
        case Step::Kind::RemoveConcept:
          if (!is_bplus_concept(s.concept_payload))
            violations.push_back("concept outside B+: " + to_string(s.concept_payload));
          break;
        case Step::Kind::AddRole:
        case Step::Kind::RemoveRole:
          if (!role_filters_bplus(s.role_payload))
            violations.push_back("role filter outside B+: " + to_string(s.role_payload));
          break;
        case Step::Kind::Conditional:
          guard_formula(s.guard);
          action(*s.then_branch);
          action(*s.else_branch);
          break;
      }
    }
  }
};

}  // namespace

FragmentCheck is_simple_action(const Action& a) {
  SimpleActionCollector sc;
  sc.action(a);
  FragmentCheck out;
  out.ok = sc.violations.empty();
  out.violations = std::move(sc.violations);
  return out;
}

// ── Node counting ───────────────────────────────────────────────────────────

namespace {

struct NodeCounter {
  std::unordered_set<const void*> seen;
  std::size_t count = 0;

  bool visit(const void* p) {
    if (!seen.insert(p).second) return false;
    ++count;
    return true;
  }

  void role(const RolePtr& r) {
    if (!visit(r.get())) return;
    using K = RoleExpr::Kind;
    switch (r->kind) {
      case K::Name:
      case K::Singleton: break;
      case K::Inverse: role(r->sub); break;
      case K::Union:
      case K::Difference: role(r->sub); role(r->rhs); break;
      case K::RangeRestrict:
      case K::DomainRestrict: role(r->sub); concept_expr(r->filter); break;
    }
  }

  void concept_expr(const ConceptPtr& c) {
    if (!visit(c.get())) return;
    using K = ConceptExpr::Kind;
    switch (c->kind) {
      case K::Name:
      case K::Nominal:
      case K::Top:
      case K::Bottom: break;
      case K::And:
      case K::Or: concept_expr(c->lhs); concept_expr(c->rhs); break;
      case K::Not: concept_expr(c->lhs); break;
      default: role(c->role); concept_expr(c->lhs); break;
    }
  }

  void axiom(const AxiomPtr& a) {
    if (!visit(a.get())) return;
    using K = Axiom::Kind;
    switch (a->kind) {
      case K::ConceptInclusion: concept_expr(a->c1); concept_expr(a->c2); break;
      case K::RoleInclusion: role(a->r1); role(a->r2); break;
      case K::ConceptAssertion: concept_expr(a->c1); break;
      case K::RoleAssertion: role(a->r1); break;
    }
  }

  void formula(const FormulaPtr& f) {
    if (!visit(f.get())) return;
    switch (f->kind) {
      case Formula::Kind::Atom: axiom(f->atom); break;
      case Formula::Kind::And:
      case Formula::Kind::Or: formula(f->lhs); formula(f->rhs); break;
      case Formula::Kind::Neg: formula(f->lhs); break;
    }
  }
};

}  // namespace

std::size_t formula_node_count(const FormulaPtr& f) {
  NodeCounter nc;
  nc.formula(f);
  return nc.count;
}

}  // namespace gsd
