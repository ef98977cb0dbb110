#pragma once

// The .sqc proof-script format.
//
//   p -> p          goal; may span lines up to the first blank line
//
//   AlphaImp        rule name, unindented, exact spelling
//     ~p            claimed result: one formula per line, indented >= 2
//     p
//   BetaCon
//     p
//   +               separates the two results of a Beta rule
//     q
//   Basic           no result lines
//
// "#" starts a comment. The printer emits ASCII connectives; the parser also
// accepts the Unicode spellings.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sqc/calculus.hpp"
#include "sqc/diagnostic.hpp"
#include "sqc/syntax.hpp"

namespace sqc {

struct ProofScript {
  Formula goal;
  SourceSpan goal_location;
  std::vector<RuleApplication> steps;
  // Number of leading steps parsed before the first recovery gap.
  std::size_t clean_prefix = 0;
  // Unparsed text when recovery ran into the end of input.
  std::optional<std::string> trailing;
};

struct ParseOutcome {
  std::optional<ProofScript> script;
  std::vector<Diagnostic> diagnostics;
  bool recovered = false;

  bool ok() const { return script.has_value() && !recovered; }
};

using FormulaResult = std::variant<Formula, std::vector<Diagnostic>>;

// `line` and `col` give the position of text[0] for located diagnostics.
FormulaResult parse_formula(std::string_view text, std::size_t line = 1,
                            std::size_t col = 1);

ParseOutcome parse_script(std::string_view text);

std::string print_term(const Term& t, const std::vector<std::string>& binders = {});
std::string print_formula(const Formula& f);
std::string print_sequent(const Sequent& s);  // "a, b, c"
std::string print_script(const ProofScript& script);
std::string print_step(const RuleApplication& step);

// Closest rule spelling by edit distance (case-insensitive ties preferred).
std::string_view nearest_rule_name(std::string_view word);

// Strips a UTF-8 byte-order mark; returns false if text is not valid UTF-8.
bool valid_utf8(std::string_view text);
std::string_view strip_bom(std::string_view text);

}  // namespace sqc
