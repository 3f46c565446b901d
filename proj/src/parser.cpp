#include "gsd/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <unordered_set>

namespace gsd {

namespace {

enum class Tok {
  UIdent,    // concept names
  LIdent,    // role / individual / element names
  Reserved,  // _name
  Var,       // ?name
  Number,
  Keyword,   // not and or exists forall atleast atmost inv Top Bot skip if then else v
             // domain name concept role una on off
  LParen, RParen, LBrace, RBrace,
  Comma, Dot, Colon, Semi,
  Plus, Minus, Pipe, Amp, Bang, Eq,
  SubsetEq,   // <=
  PlusEq,     // +=
  MinusEq,    // -=
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

const std::unordered_set<std::string> kKeywords = {
    "not", "and", "or", "exists", "forall", "atleast", "atmost", "inv",
    "Top", "Bot", "skip", "if", "then", "else", "v",
    "domain", "name", "concept", "role", "una", "on", "off"};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int tl = line, tc = col;
    auto push = [&](Tok k, std::string t) { out.push_back({k, std::move(t), tl, tc}); };
    if (i + 1 < text.size()) {
      std::string two = std::string(text.substr(i, 2));
      if (two == "<=") { push(Tok::SubsetEq, two); advance(2); continue; }
      if (two == "+=") { push(Tok::PlusEq, two); advance(2); continue; }
      if (two == "-=") { push(Tok::MinusEq, two); advance(2); continue; }
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(Tok::Number, std::string(text.substr(i, j - i)));
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '?') {
      bool var = c == '?';
      std::size_t j = i + (var ? 1 : 0);
      std::size_t start = j;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      std::string word(text.substr(start, j - start));
      if (var) {
        if (word.empty()) throw ParseError("empty variable name", tl, tc, "identifier after '?'");
        push(Tok::Var, word);
      } else if (kKeywords.count(word)) {
        push(Tok::Keyword, word);
      } else if (word[0] == kReservedPrefix) {
        push(Tok::Reserved, word);
      } else if (std::isupper(static_cast<unsigned char>(word[0]))) {
        push(Tok::UIdent, word);
      } else {
        push(Tok::LIdent, word);
      }
      advance(j - i);
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, "("); break;
      case ')': push(Tok::RParen, ")"); break;
      case '{': push(Tok::LBrace, "{"); break;
      case '}': push(Tok::RBrace, "}"); break;
      case ',': push(Tok::Comma, ","); break;
      case '.': push(Tok::Dot, "."); break;
      case ':': push(Tok::Colon, ":"); break;
      case ';': push(Tok::Semi, ";"); break;
      case '+': push(Tok::Plus, "+"); break;
      case '-': push(Tok::Minus, "-"); break;
      case '|': push(Tok::Pipe, "|"); break;
      case '&': push(Tok::Amp, "&"); break;
      case '!': push(Tok::Bang, "!"); break;
      case '=': push(Tok::Eq, "="); break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", tl, tc, "token");
    }
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

// Recursive-descent parser with backtracking.  Failed alternatives record the
// farthest position reached so the final error points at the real problem.
class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& opts) : opts_(opts), toks_(lex(text)) {}

  FormulaPtr formula_file() {
    if (at_end()) fail("formula");
    FormulaPtr f = formula();
    expect_end();
    return f;
  }

  Action action_file() {
    if (at_end()) fail("action");
    Action a = action();
    expect_end();
    return a;
  }

  ConceptPtr concept_file() {
    ConceptPtr c = concept_expr();
    expect_end();
    return c;
  }

  RolePtr role_file() {
    RolePtr r = role();
    expect_end();
    return r;
  }

  Interpretation interpretation_file() { return interpretation(); }

  [[noreturn]] void raise_best() const {
    const Token& t = toks_[std::min(best_pos_, toks_.size() - 1)];
    std::string expected;
    for (const auto& e : best_expected_) {
      if (!expected.empty()) expected += " or ";
      expected += e;
    }
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError("syntax error at line " + std::to_string(t.line) + ", column " +
                         std::to_string(t.col) + ": expected " + expected + ", found " + got,
                     t.line, t.col, expected);
  }

 private:
  const ParseOptions& opts_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t best_pos_ = 0;
  mutable std::set<std::string> best_expected_;

  struct Backtrack {};  // internal control flow; converted to ParseError at the top

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t n = 1) const { return toks_[std::min(pos_ + n, toks_.size() - 1)]; }
  bool at_end() const { return cur().kind == Tok::End; }

  [[noreturn]] void fail(const std::string& expected) {
    if (pos_ > best_pos_) {
      best_pos_ = pos_;
      best_expected_.clear();
    }
    if (pos_ == best_pos_) best_expected_.insert(expected);
    throw Backtrack{};
  }

  bool is_kw(const Token& t, const char* kw) const {
    return t.kind == Tok::Keyword && t.text == kw;
  }

  void expect(Tok k, const char* what) {
    if (cur().kind != k) fail(what);
    ++pos_;
  }

  void expect_kw(const char* kw) {
    if (!is_kw(cur(), kw)) fail(std::string("'") + kw + "'");
    ++pos_;
  }

  void expect_end() {
    if (!at_end()) fail("end of input");
  }

  std::string ident(Tok kind, const char* what) {
    if (cur().kind == Tok::Reserved) {
      if (!opts_.allow_reserved_names)
        throw ParseError("reserved name '" + cur().text + "' at line " + std::to_string(cur().line) +
                             ", column " + std::to_string(cur().col) +
                             " (names starting with '_' are machine-generated)",
                         cur().line, cur().col, what);
      if (kind != Tok::UIdent) return toks_[pos_++].text;
      fail(what);
    }
    if (cur().kind != kind) fail(what);
    return toks_[pos_++].text;
  }

  Term term() {
    if (cur().kind == Tok::Var) return Term::variable(toks_[pos_++].text);
    return Term::individual(ident(Tok::LIdent, "individual or variable"));
  }

  bool term_ahead(std::size_t n = 0) const {
    Tok k = peek(n).kind;
    return k == Tok::LIdent || k == Tok::Var || k == Tok::Reserved;
  }

  // ── Roles ─────────────────────────────────────────────────────────────────

  RolePtr role() {  // R (+|-) R with left associativity
    RolePtr r = role_postfix();
    for (;;) {
      if (cur().kind == Tok::Plus) {
        ++pos_;
        r = role_union(r, role_postfix());
      } else if (cur().kind == Tok::Minus) {
        ++pos_;
        r = role_difference(r, role_postfix());
      } else {
        return r;
      }
    }
  }

  RolePtr role_postfix() {  // R | C (range restriction, filter is a primary concept)
    RolePtr r = role_prim();
    while (cur().kind == Tok::Pipe) {
      ++pos_;
      r = range_restrict(r, concept_prim());
    }
    return r;
  }

  RolePtr role_prim() {
    if (is_kw(cur(), "inv")) {
      ++pos_;
      return inverse(role_name(ident(Tok::LIdent, "role name")));
    }
    if (cur().kind == Tok::LBrace) {
      ++pos_;
      expect(Tok::LParen, "'('");
      Term a = term();
      expect(Tok::Comma, "','");
      Term b = term();
      expect(Tok::RParen, "')'");
      expect(Tok::RBrace, "'}'");
      return singleton_role(a, b);
    }
    if (cur().kind == Tok::LParen) {
      ++pos_;
      RolePtr r = role();
      expect(Tok::RParen, "')'");
      return r;
    }
    return role_name(ident(Tok::LIdent, "role"));
  }

  // ── Concepts ──────────────────────────────────────────────────────────────

  ConceptPtr concept_expr() {  // or-level
    ConceptPtr c = concept_and();
    while (is_kw(cur(), "or")) {
      ++pos_;
      c = c_or(c, concept_and());
    }
    return c;
  }

  ConceptPtr concept_and() {
    ConceptPtr c = concept_unary();
    while (is_kw(cur(), "and")) {
      ++pos_;
      c = c_and(c, concept_unary());
    }
    return c;
  }

  ConceptPtr concept_unary() {
    if (is_kw(cur(), "not")) {
      ++pos_;
      return c_not(concept_unary());
    }
    if (is_kw(cur(), "exists") || is_kw(cur(), "forall")) {
      bool ex = cur().text == "exists";
      ++pos_;
      RolePtr r = role();
      expect(Tok::Dot, "'.'");
      ConceptPtr filler = concept_unary();
      return ex ? exists(r, filler) : forall(r, filler);
    }
    if (is_kw(cur(), "atleast") || is_kw(cur(), "atmost")) {
      bool least = cur().text == "atleast";
      ++pos_;
      if (cur().kind != Tok::Number) fail("number");
      unsigned long long n = 0;
      try {
        n = std::stoull(toks_[pos_++].text);
      } catch (const std::out_of_range&) {
        n = 0xffffffffULL + 1;
      }
      if (n > 0xffffffffULL) fail("number within machine width");
      RolePtr r = role();
      expect(Tok::Dot, "'.'");
      ConceptPtr filler = concept_unary();
      return least ? at_least(static_cast<std::uint32_t>(n), r, filler)
                   : at_most(static_cast<std::uint32_t>(n), r, filler);
    }
    return concept_prim();
  }

  ConceptPtr concept_prim() {
    if (is_kw(cur(), "Top")) { ++pos_; return top(); }
    if (is_kw(cur(), "Bot")) { ++pos_; return bottom(); }
    if (cur().kind == Tok::UIdent) return concept_name(toks_[pos_++].text);
    if (cur().kind == Tok::LBrace) {
      // {t} nominal -- but not {(t,t)} which is a singleton role
      if (peek().kind == Tok::LParen) fail("concept");
      ++pos_;
      Term t = term();
      expect(Tok::RBrace, "'}'");
      return nominal(t);
    }
    if (cur().kind == Tok::LParen) {
      ++pos_;
      ConceptPtr c = concept_expr();
      expect(Tok::RParen, "')'");
      return c;
    }
    fail("concept");
  }

  // ── Formulae ──────────────────────────────────────────────────────────────

  FormulaPtr formula() {  // v-level
    FormulaPtr f = formula_and();
    while (is_kw(cur(), "v")) {
      ++pos_;
      f = f_or(f, formula_and());
    }
    return f;
  }

  FormulaPtr formula_and() {
    FormulaPtr f = formula_neg();
    while (cur().kind == Tok::Amp) {
      ++pos_;
      f = f_and(f, formula_neg());
    }
    return f;
  }

  FormulaPtr formula_neg() {
    if (cur().kind == Tok::Bang) {
      ++pos_;
      return f_neg(formula_neg());
    }
    return formula_atom();
  }

  template <typename F>
  auto attempt(F&& f) -> std::optional<decltype(f())> {
    std::size_t saved = pos_;
    try {
      return f();
    } catch (Backtrack&) {
      pos_ = saved;
      return std::nullopt;
    }
  }

  FormulaPtr formula_atom() {
    // (t,t) : R is decided by lookahead; everything else by backtracking.
    if (cur().kind == Tok::LParen && term_ahead(1) && peek(2).kind == Tok::Comma)
      return f_atom(role_assertion_axiom());
    if (cur().kind == Tok::LParen) {
      if (auto f = attempt([&] {
            ++pos_;
            FormulaPtr inner = formula();
            expect(Tok::RParen, "')'");
            return inner;
          }))
        return *f;
    }
    if (auto f = attempt([&] { return f_atom(concept_inclusion_axiom()); })) return *f;
    if (auto f = attempt([&] { return f_atom(role_inclusion_axiom()); })) return *f;
    if (auto f = attempt([&] { return f_atom(concept_assertion_axiom()); })) return *f;
    return f_atom(role_assertion_axiom());
  }

  AxiomPtr concept_inclusion_axiom() {
    ConceptPtr lhs = concept_expr();
    expect(Tok::SubsetEq, "'<='");
    return concept_inclusion(lhs, concept_expr());
  }

  AxiomPtr role_inclusion_axiom() {
    RolePtr lhs = role();
    expect(Tok::SubsetEq, "'<='");
    return role_inclusion(lhs, role());
  }

  AxiomPtr concept_assertion_axiom() {
    Term t = term();
    expect(Tok::Colon, "':'");
    return concept_assertion(t, concept_expr());
  }

  AxiomPtr role_assertion_axiom() {
    expect(Tok::LParen, "'('");
    Term a = term();
    expect(Tok::Comma, "','");
    Term b = term();
    expect(Tok::RParen, "')'");
    expect(Tok::Colon, "':'");
    return role_assertion(a, b, role());
  }

  // ── Actions ───────────────────────────────────────────────────────────────

  Action action() {
    Action out;
    for (;;) {
      statement(out);
      if (cur().kind == Tok::Semi) {
        ++pos_;
        continue;
      }
      return out;
    }
  }

  void statement(Action& out) {
    if (is_kw(cur(), "skip")) {
      ++pos_;
      return;  // contributes no steps
    }
    if (is_kw(cur(), "if")) {
      ++pos_;
      FormulaPtr guard = formula();
      expect_kw("then");
      expect(Tok::LBrace, "'{'");
      Action then_branch = action();
      expect(Tok::RBrace, "'}'");
      Action else_branch;
      if (is_kw(cur(), "else")) {
        ++pos_;
        expect(Tok::LBrace, "'{'");
        else_branch = action();
        expect(Tok::RBrace, "'}'");
      }
      out.steps.push_back(conditional(guard, std::move(then_branch), std::move(else_branch)));
      return;
    }
    if (cur().kind == Tok::UIdent) {
      std::string target = toks_[pos_++].text;
      bool add;
      if (cur().kind == Tok::PlusEq) add = true;
      else if (cur().kind == Tok::MinusEq) add = false;
      else fail("'+=' or '-='");
      ++pos_;
      ConceptPtr payload = concept_expr();
      out.steps.push_back(add ? add_concept(target, payload) : remove_concept(target, payload));
      return;
    }
    if (cur().kind == Tok::LIdent) {
      std::string target = toks_[pos_++].text;
      bool add;
      if (cur().kind == Tok::PlusEq) add = true;
      else if (cur().kind == Tok::MinusEq) add = false;
      else fail("'+=' or '-='");
      ++pos_;
      RolePtr payload = role();
      out.steps.push_back(add ? add_role(target, payload) : remove_role(target, payload));
      return;
    }
    fail("action statement");
  }

  // ── Interpretation files ──────────────────────────────────────────────────

  std::string element_id() {
    Tok k = cur().kind;
    if (k == Tok::Reserved && !opts_.allow_reserved_names)
      throw ParseError("reserved element id '" + cur().text + "' at line " +
                           std::to_string(cur().line),
                       cur().line, cur().col, "element id");
    if (k == Tok::UIdent || k == Tok::LIdent || k == Tok::Reserved) return toks_[pos_++].text;
    fail("element id");
  }

  Interpretation interpretation() {
    std::vector<std::string> elements;
    std::map<std::string, std::uint64_t> concepts;
    std::map<std::string, std::vector<std::uint64_t>> roles;
    std::map<std::string, int> individuals;
    bool una = false;
    bool saw_domain = false;

    auto index_of = [&](const std::string& id) {
      auto it = std::find(elements.begin(), elements.end(), id);
      if (it == elements.end())
        throw ParseError("unknown domain element '" + id + "'", cur().line, cur().col, "element");
      return static_cast<int>(it - elements.begin());
    };

    while (!at_end()) {
      if (is_kw(cur(), "domain")) {
        if (saw_domain) fail("single domain clause");
        ++pos_;
        saw_domain = true;
        while (cur().kind == Tok::UIdent || cur().kind == Tok::LIdent || cur().kind == Tok::Reserved)
          elements.push_back(element_id());
        if (elements.empty()) fail("at least one domain element");
        continue;
      }
      if (!saw_domain) fail("'domain' clause first");
      if (is_kw(cur(), "una")) {
        ++pos_;
        if (is_kw(cur(), "on")) una = true;
        else if (is_kw(cur(), "off")) una = false;
        else fail("'on' or 'off'");
        ++pos_;
        continue;
      }
      if (is_kw(cur(), "name")) {
        ++pos_;
        std::string n = ident(Tok::LIdent, "individual name");
        if (individuals.count(n)) fail("distinct individual names");
        expect(Tok::Eq, "'='");
        individuals[n] = index_of(element_id());
        continue;
      }
      if (is_kw(cur(), "concept")) {
        ++pos_;
        std::string n = ident(Tok::UIdent, "concept name");
        if (concepts.count(n)) fail("distinct concept names");
        expect(Tok::Eq, "'='");
        expect(Tok::LBrace, "'{'");
        std::uint64_t mask = 0;
        bool first = true;
        while (cur().kind != Tok::RBrace) {
          if (!first) expect(Tok::Comma, "','");
          first = false;
          mask |= std::uint64_t{1} << index_of(element_id());
        }
        ++pos_;
        concepts[n] = mask;
        continue;
      }
      if (is_kw(cur(), "role")) {
        ++pos_;
        std::string n = ident(Tok::LIdent, "role name");
        if (roles.count(n)) fail("distinct role names");
        expect(Tok::Eq, "'='");
        expect(Tok::LBrace, "'{'");
        std::vector<std::uint64_t> rows(elements.size(), 0);
        bool first = true;
        while (cur().kind != Tok::RBrace) {
          if (!first) expect(Tok::Comma, "','");
          first = false;
          expect(Tok::LParen, "'('");
          int a = index_of(element_id());
          expect(Tok::Comma, "','");
          int b = index_of(element_id());
          expect(Tok::RParen, "')'");
          rows[a] |= std::uint64_t{1} << b;
        }
        ++pos_;
        roles[n] = std::move(rows);
        continue;
      }
      fail("interpretation clause (domain/una/name/concept/role)");
    }
    if (!saw_domain) fail("'domain' clause");
    return make_interpretation(std::move(elements), std::move(concepts), std::move(roles),
                               std::move(individuals), una);
  }

  friend FormulaPtr gsd::parse_formula(std::string_view, const ParseOptions&);
  friend Action gsd::parse_action(std::string_view, const ParseOptions&);
  friend Interpretation gsd::parse_interpretation(std::string_view, const ParseOptions&);
  friend ConceptPtr gsd::parse_concept(std::string_view, const ParseOptions&);
  friend RolePtr gsd::parse_role(std::string_view, const ParseOptions&);
};

template <typename F>
auto run_parser(Parser& p, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (ParseError&) {
    throw;
  } catch (...) {
    p.raise_best();
  }
}

}  // namespace

FormulaPtr parse_formula(std::string_view text, const ParseOptions& opts) {
  Parser p(text, opts);
  return run_parser(p, [&] { return p.formula_file(); });
}

Action parse_action(std::string_view text, const ParseOptions& opts) {
  Parser p(text, opts);
  return run_parser(p, [&] { return p.action_file(); });
}

Interpretation parse_interpretation(std::string_view text, const ParseOptions& opts) {
  Parser p(text, opts);
  return run_parser(p, [&] { return p.interpretation_file(); });
}

ConceptPtr parse_concept(std::string_view text, const ParseOptions& opts) {
  Parser p(text, opts);
  return run_parser(p, [&] { return p.concept_file(); });
}

RolePtr parse_role(std::string_view text, const ParseOptions& opts) {
  Parser p(text, opts);
  return run_parser(p, [&] { return p.role_file(); });
}

std::pair<std::string, std::string> parse_binding(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos || text.empty() || text[0] != '?')
    throw Error("binding must have the form ?var=individual: " + std::string(text));
  std::string var(text.substr(1, eq - 1));
  std::string ind(text.substr(eq + 1));
  if (var.empty() || ind.empty())
    throw Error("binding must have the form ?var=individual: " + std::string(text));
  return {var, ind};
}

}  // namespace gsd
