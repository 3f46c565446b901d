#ifndef GSD_COMMON_HPP
#define GSD_COMMON_HPP

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsd {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a configurable resource budget (nodes, expansions, sizes) is
// exhausted.  Distinct from a negative answer: callers must not report a
// budget abort as "no model" / "no plan".
struct BudgetError : Error {
  explicit BudgetError(const std::string& what) : Error(what) {}
};

// Raised when an operation restricted to the lightweight fragment is invoked
// on out-of-fragment input.  Carries the offending subterms.
struct FragmentError : Error {
  std::vector<std::string> violations;
  explicit FragmentError(const std::string& what, std::vector<std::string> v = {})
      : Error(what), violations(std::move(v)) {}
};

// Names starting with this prefix are reserved for machine-generated
// individuals and domain elements.  The parser rejects them in user files, so
// generated names can never collide with user-written ones.
inline constexpr char kReservedPrefix = '_';

inline bool is_reserved_name(const std::string& s) {
  return !s.empty() && s[0] == kReservedPrefix;
}

// Hands out reserved names ("_f0", "_f1", ...) that avoid a caller-supplied
// set of already-used names.
class FreshNamePool {
 public:
  explicit FreshNamePool(std::string prefix, std::set<std::string> avoid = {})
      : prefix_(std::move(prefix)), avoid_(std::move(avoid)) {}

  void avoid(const std::string& name) { avoid_.insert(name); }
  void avoid_all(const std::set<std::string>& names) { avoid_.insert(names.begin(), names.end()); }

  std::string next() {
    for (;;) {
      std::string candidate = prefix_ + std::to_string(counter_++);
      if (avoid_.insert(candidate).second) return candidate;
    }
  }

 private:
  std::string prefix_;
  std::set<std::string> avoid_;
  std::uint64_t counter_ = 0;
};

}  // namespace gsd

#endif  // GSD_COMMON_HPP
