#ifndef GSD_PARSER_HPP
#define GSD_PARSER_HPP

// Concrete text syntax (case-sensitive, whitespace-insignificant, `#` line
// comments):
//
//   concepts   A  {o}  Top  Bot  not C  C and D  C or D
//              exists R . C  forall R . C  atleast n R . C  atmost n R . C
//   roles      p  inv p  {(t,t)}  R + R  R - R  R | C
//   axioms     C <= D   R <= S   t : C   (t,t) : R
//   formulae   F & F   F v F   ! F   ( F )
//   actions    A += C   A -= C   p += R   p -= R   skip   a ; a
//              if F then { a } else { a }      (else optional)
//   terms      individuals are lower-case identifiers, variables carry a
//              leading `?`
//
// Concept names start with an upper-case letter, role and individual names
// with a lower-case letter.  Identifiers starting with `_` are reserved for
// generated names and rejected unless ParseOptions.allow_reserved_names is
// set (needed when re-reading tool-emitted files).

#include <string>
#include <string_view>

#include "gsd/interpretation.hpp"
#include "gsd/syntax.hpp"

namespace gsd {

struct ParseError : Error {
  int line = 0, column = 0;
  std::string expected;
  ParseError(const std::string& msg, int line_, int col_, std::string expected_)
      : Error(msg), line(line_), column(col_), expected(std::move(expected_)) {}
};

struct ParseOptions {
  bool allow_reserved_names = false;
};

FormulaPtr parse_formula(std::string_view text, const ParseOptions& opts = {});
Action parse_action(std::string_view text, const ParseOptions& opts = {});
Interpretation parse_interpretation(std::string_view text, const ParseOptions& opts = {});

// Sub-grammar entry points (whole input must be consumed).
ConceptPtr parse_concept(std::string_view text, const ParseOptions& opts = {});
RolePtr parse_role(std::string_view text, const ParseOptions& opts = {});

// "?x=o" -> binding for a substitution.
std::pair<std::string, std::string> parse_binding(std::string_view text);

}  // namespace gsd

#endif  // GSD_PARSER_HPP
