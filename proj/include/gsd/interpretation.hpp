#ifndef GSD_INTERPRETATION_HPP
#define GSD_INTERPRETATION_HPP

// Finite interpretations: a non-empty domain of at most 64 elements plus
// extensions of concept and role names and a map from individual names to
// elements.  Element sets are bitmasks over element indices; role extensions
// are per-source successor masks.
//
// Interpretations are immutable values by convention: every operation returns
// a new interpretation.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gsd/syntax.hpp"

namespace gsd {

inline constexpr std::size_t kMaxDomain = 64;

struct Interpretation {
  std::vector<std::string> elements;                           // ids; the index is the element
  std::map<std::string, std::uint64_t> concept_ext;            // concept name -> element mask
  std::map<std::string, std::vector<std::uint64_t>> role_ext;  // role name -> successor mask per source
  std::map<std::string, int> individuals;                      // individual name -> element index
  bool una = false;

  std::size_t size() const { return elements.size(); }
  std::uint64_t domain_mask() const {
    return elements.size() == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << elements.size()) - 1);
  }
  int element_index(const std::string& id) const;  // -1 when absent

  // Structural identity (same element order, same maps).  Not isomorphism.
  friend bool operator==(const Interpretation& a, const Interpretation& b) {
    return a.elements == b.elements && a.concept_ext == b.concept_ext &&
           a.role_ext == b.role_ext && a.individuals == b.individuals && a.una == b.una;
  }
};

// Validates the construction invariants: non-empty domain of <= 64 elements,
// distinct element ids, extensions within the domain, individual map into the
// domain (injective when una).  Throws Error on violation.
Interpretation make_interpretation(std::vector<std::string> elements,
                                   std::map<std::string, std::uint64_t> concept_ext,
                                   std::map<std::string, std::vector<std::uint64_t>> role_ext,
                                   std::map<std::string, int> individuals, bool una);

// ── Evaluation ──────────────────────────────────────────────────────────────
// Standard set semantics.  Concept and role names absent from the maps have
// empty extensions; an individual name without an entry is an error.
// Inputs must be ordinary (variable-free).

std::uint64_t eval_concept(const Interpretation& interp, const ConceptPtr& c);
std::vector<std::uint64_t> eval_role(const Interpretation& interp, const RolePtr& r);

// Recursive satisfaction; `kb` must be ground.
bool models(const Interpretation& interp, const FormulaPtr& kb);

// ── Search support ──────────────────────────────────────────────────────────

// Deterministic fingerprint, invariant under renaming/permutation of
// anonymous (un-named) elements.  Named elements are anchored by their
// individual names.
std::string canonical_fingerprint(const Interpretation& interp);

// Adds k fresh elements with empty memberships.  Each new element receives a
// fresh reserved individual name so ground actions and goals can refer to it.
Interpretation expand_domain(const Interpretation& interp, int k);

// ── Text format ─────────────────────────────────────────────────────────────
// domain e1 e2 ...
// una on            (omitted when off)
// name o = e
// concept A = {e, ...}
// role p = {(e,e), ...}
std::string to_string(const Interpretation& interp);

// Convenience: decode a mask into element ids, in element order.
std::vector<std::string> mask_to_ids(const Interpretation& interp, std::uint64_t mask);

}  // namespace gsd

#endif  // GSD_INTERPRETATION_HPP
