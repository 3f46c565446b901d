#ifndef GSD_SYNTAX_HPP
#define GSD_SYNTAX_HPP

// Abstract syntax for concepts, roles, formulae and actions.
//
// All nodes are immutable and shared via shared_ptr<const T>; structurally
// equal subterms may or may not share storage.  Rewrites (substitution,
// regression) share unchanged subtrees, so formulas produced by long action
// sequences stay small as DAGs even when their tree unfolding would not.
//
// Surface syntax admits `inv` only on role names and range restriction only.
// The inverse of a complex role and the first-component (domain) restriction
// exist as internal constructors because rewriting a formula through role
// updates needs them: the inverse of r|C is a domain-restricted inverse.
// `inverse()` normalizes eagerly, so Inverse nodes only ever wrap role names.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gsd/common.hpp"

namespace gsd {

// ── Terms ───────────────────────────────────────────────────────────────────
// Either an individual name or a variable.  The two name spaces are disjoint
// lexically: variables carry a '?' sigil in the concrete syntax, which is not
// part of the stored name.

struct Term {
  enum class Kind { Individual, Variable };
  Kind kind = Kind::Individual;
  std::string name;

  static Term individual(std::string n) { return {Kind::Individual, std::move(n)}; }
  static Term variable(std::string n) { return {Kind::Variable, std::move(n)}; }

  bool is_variable() const { return kind == Kind::Variable; }
  friend bool operator==(const Term& a, const Term& b) {
    return a.kind == b.kind && a.name == b.name;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.name < b.name;
  }
};

class ConceptExpr;
class RoleExpr;
using ConceptPtr = std::shared_ptr<const ConceptExpr>;
using RolePtr = std::shared_ptr<const RoleExpr>;

// ── Roles ───────────────────────────────────────────────────────────────────

class RoleExpr {
 public:
  enum class Kind {
    Name,            // p
    Inverse,         // inv p            (sub is always a Name after normalization)
    Singleton,       // {(t1,t2)}
    Union,           // r + s
    Difference,      // r - s
    RangeRestrict,   // r | C            (second component in C)
    DomainRestrict,  // internal: first component in C
  };

  Kind kind;
  std::string name;     // Name
  RolePtr sub, rhs;     // Inverse/RangeRestrict/DomainRestrict use sub; Union/Difference use sub,rhs
  ConceptPtr filter;    // RangeRestrict / DomainRestrict
  Term t1, t2;          // Singleton

  explicit RoleExpr(Kind k) : kind(k) {}
};

RolePtr role_name(std::string name);
RolePtr inverse(const RolePtr& r);  // normalizing: pushes inversion to the leaves
RolePtr singleton_role(Term t1, Term t2);
RolePtr role_union(RolePtr a, RolePtr b);
RolePtr role_difference(RolePtr a, RolePtr b);
RolePtr range_restrict(RolePtr r, ConceptPtr c);
RolePtr domain_restrict(ConceptPtr c, RolePtr r);

// ── Concepts ────────────────────────────────────────────────────────────────

class ConceptExpr {
 public:
  enum class Kind {
    Name,     // A
    Nominal,  // {t}
    Top,
    Bottom,
    And,      // C and D
    Or,       // C or D
    Not,      // not C
    Exists,   // exists R . C
    Forall,   // forall R . C
    AtLeast,  // atleast n R . C
    AtMost,   // atmost n R . C
  };

  Kind kind;
  std::string name;      // Name
  Term term;             // Nominal
  ConceptPtr lhs, rhs;   // And/Or use lhs,rhs; Not and the restrictions use lhs as child/filler
  RolePtr role;          // restrictions
  std::uint32_t n = 0;   // AtLeast/AtMost

  explicit ConceptExpr(Kind k) : kind(k) {}
};

ConceptPtr concept_name(std::string name);
ConceptPtr nominal(Term t);
ConceptPtr top();
ConceptPtr bottom();
ConceptPtr c_and(ConceptPtr a, ConceptPtr b);
ConceptPtr c_or(ConceptPtr a, ConceptPtr b);
ConceptPtr c_not(ConceptPtr c);
ConceptPtr exists(RolePtr r, ConceptPtr c);
ConceptPtr forall(RolePtr r, ConceptPtr c);
ConceptPtr at_least(std::uint32_t n, RolePtr r, ConceptPtr c);
ConceptPtr at_most(std::uint32_t n, RolePtr r, ConceptPtr c);

// ── Axioms and formulae ─────────────────────────────────────────────────────

class Axiom;
using AxiomPtr = std::shared_ptr<const Axiom>;

class Axiom {
 public:
  enum class Kind { ConceptInclusion, RoleInclusion, ConceptAssertion, RoleAssertion };

  Kind kind;
  ConceptPtr c1, c2;  // ConceptInclusion; ConceptAssertion uses c1
  RolePtr r1, r2;     // RoleInclusion; RoleAssertion uses r1
  Term t1, t2;        // assertions

  explicit Axiom(Kind k) : kind(k) {}
};

AxiomPtr concept_inclusion(ConceptPtr lhs, ConceptPtr rhs);
AxiomPtr role_inclusion(RolePtr lhs, RolePtr rhs);
AxiomPtr concept_assertion(Term t, ConceptPtr c);
AxiomPtr role_assertion(Term t1, Term t2, RolePtr r);

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Boolean combination of axioms.  A variable-free formula is a knowledge base.
class Formula {
 public:
  enum class Kind { Atom, And, Or, Neg };

  Kind kind;
  AxiomPtr atom;
  FormulaPtr lhs, rhs;  // Neg uses lhs

  explicit Formula(Kind k) : kind(k) {}
};

FormulaPtr f_atom(AxiomPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_neg(FormulaPtr f);

// ── Actions ─────────────────────────────────────────────────────────────────

struct Step;
struct Action {
  std::vector<Step> steps;  // empty = the empty action

  bool empty() const { return steps.empty(); }
};
using ActionPtr = std::shared_ptr<const Action>;

struct Step {
  enum class Kind { AddConcept, RemoveConcept, AddRole, RemoveRole, Conditional };

  Kind kind = Kind::AddConcept;
  std::string target;           // concept or role name for the basic steps
  ConceptPtr concept_payload;   // AddConcept/RemoveConcept
  RolePtr role_payload;         // AddRole/RemoveRole
  FormulaPtr guard;             // Conditional
  ActionPtr then_branch, else_branch;
};

Step add_concept(std::string target, ConceptPtr payload);
Step remove_concept(std::string target, ConceptPtr payload);
Step add_role(std::string target, RolePtr payload);
Step remove_role(std::string target, RolePtr payload);
Step conditional(FormulaPtr guard, Action then_branch, Action else_branch);

// ── Structural equality ─────────────────────────────────────────────────────

bool equal(const ConceptPtr& a, const ConceptPtr& b);
bool equal(const RolePtr& a, const RolePtr& b);
bool equal(const AxiomPtr& a, const AxiomPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);
bool equal(const Action& a, const Action& b);

// ── Printing ────────────────────────────────────────────────────────────────
// Produces the normalized concrete syntax; parse(print(x)) == x structurally
// for every surface-expressible x.  Internal-only constructors print with
// bracket markers the parser rejects: `[C] R` for a domain restriction.

std::string to_string(const Term& t);
std::string to_string(const ConceptPtr& c);
std::string to_string(const RolePtr& r);
std::string to_string(const AxiomPtr& a);
std::string to_string(const FormulaPtr& f);
std::string to_string(const Action& a);

// ── Signature and variable collection ───────────────────────────────────────

struct Signature {
  std::set<std::string> concept_names;
  std::set<std::string> role_names;
  std::set<std::string> individuals;
  std::uint32_t max_counting_rank = 0;

  void merge(const Signature& other);
};

Signature signature_of(const FormulaPtr& f);
Signature signature_of(const Action& a);
Signature signature_of(const ConceptPtr& c);
Signature signature_of(const RolePtr& r);

// Free variables, in order of first occurrence (printing order).
std::vector<std::string> free_variables(const FormulaPtr& f);
std::vector<std::string> free_variables(const Action& a);

bool is_ground(const FormulaPtr& f);
bool is_ground(const Action& a);

// ── Substitutions ───────────────────────────────────────────────────────────
// Finite map variable name -> individual name.  Application replaces every
// occurrence of a mapped variable; unmapped variables stay.

using Substitution = std::map<std::string, std::string>;

FormulaPtr apply_substitution(const FormulaPtr& f, const Substitution& s);
Action apply_substitution(const Action& a, const Substitution& s);
ConceptPtr apply_substitution(const ConceptPtr& c, const Substitution& s);
RolePtr apply_substitution(const RolePtr& r, const Substitution& s);

// Grounds every variable of `alpha` with a distinct fresh individual name,
// avoiding all names occurring in `alpha` and in `avoid`.  Returns the ground
// action and the substitution used (empty when `alpha` is already ground).
std::pair<Action, Substitution> canonical_grounding(const Action& alpha,
                                                    const std::set<std::string>& avoid = {});

// ── Fragment checks ─────────────────────────────────────────────────────────

struct FragmentCheck {
  bool ok = true;
  std::vector<std::string> violations;  // printed subterms with the violated clause

  explicit operator bool() const { return ok; }
};

// B+ concepts: concept names, nominals, exists R . Top, and boolean
// combinations thereof.  Top/Bot are admitted (definable as A or not A /
// A and not A); role fillers inside `exists R . Top` must themselves carry
// only B+ filters.
bool is_bplus_concept(const ConceptPtr& c);

// The lightweight fragment: restricted inclusion shapes, B+ concept
// assertions, formula-level negation only in front of assertions.
FragmentCheck is_dllite_formula(const FormulaPtr& f);

// Simple actions: no inclusions occur in guards, and every concept occurring
// anywhere in the action is a B+ concept.
FragmentCheck is_simple_action(const Action& a);

// ── Misc helpers ────────────────────────────────────────────────────────────

// Number of distinct nodes in the shared-structure graph of a formula.
std::size_t formula_node_count(const FormulaPtr& f);

// Concatenation of two step sequences.
Action concat(const Action& a, const Action& b);

}  // namespace gsd

#endif  // GSD_SYNTAX_HPP
