#ifndef GSD_ACTION_ENGINE_HPP
#define GSD_ACTION_ENGINE_HPP

// Interpretation update and the action semantics: basic steps evaluate their
// payload on the current interpretation and add/remove it from the named
// symbol's extension; conditionals test their guard with models() and run the
// chosen branch.  Steps apply strictly left to right, so a payload mentioning
// the symbol it updates sees the pre-step extension.

#include <string>
#include <vector>

#include "gsd/interpretation.hpp"
#include "gsd/syntax.hpp"

namespace gsd {

struct UpdateOp {
  std::string target;
  bool is_role = false;
  bool add = true;
  std::uint64_t concept_payload = 0;             // element mask (concept targets)
  std::vector<std::uint64_t> role_payload;       // successor masks (role targets)
};

// Changes exactly the named symbol's extension; domain, individual map and
// all other symbols stay.  Payloads outside the domain are rejected.
Interpretation update(const Interpretation& interp, const UpdateOp& op);

// Executes a ground action.  Total: no step can fail at runtime.
Interpretation execute(const Interpretation& interp, const Action& action);

// Same, appending one human-readable line per applied basic step / decided
// guard to `trace`.
Interpretation execute_traced(const Interpretation& interp, const Action& action,
                              std::vector<std::string>* trace);

}  // namespace gsd

#endif  // GSD_ACTION_ENGINE_HPP
