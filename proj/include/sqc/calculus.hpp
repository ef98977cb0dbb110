#pragma once

// One-sided sequent calculus with thirteen rules. Every rule acts on the
// first formula of the first open goal; Ext is the only structural rule and
// covers reordering, contraction and weakening.

#include <array>
#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sqc/diagnostic.hpp"
#include "sqc/syntax.hpp"

namespace sqc {

using Sequent = std::vector<Formula>;

enum class Rule {
  Basic,
  AlphaDis,
  AlphaImp,
  AlphaCon,
  BetaCon,
  BetaImp,
  BetaDis,
  GammaExi,
  GammaUni,
  DeltaUni,
  DeltaExi,
  NegNeg,
  Ext,
};

inline constexpr std::array<Rule, 13> kAllRules = {
    Rule::Basic,    Rule::AlphaDis, Rule::AlphaImp, Rule::AlphaCon, Rule::BetaCon,
    Rule::BetaImp,  Rule::BetaDis,  Rule::GammaExi, Rule::GammaUni, Rule::DeltaUni,
    Rule::DeltaExi, Rule::NegNeg,   Rule::Ext,
};

std::string_view rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view name);

// Number of result sequents a rule produces: 0, 1 or 2.
std::size_t result_count(Rule r);

struct RuleApplication {
  Rule rule = Rule::Ext;
  std::vector<Sequent> claimed;
  SourceSpan location;
};

struct Goal {
  std::size_t branch = 0;
  Sequent sequent;
};

struct ProofState {
  std::deque<Goal> open_goals;
  std::size_t next_branch_id = 0;
  std::size_t steps_consumed = 0;
  std::size_t closed = 0;  // branches closed by Basic so far

  static ProofState initial(const Formula& goal);
};

using RuleSet = std::vector<Rule>;  // kept in enumeration order

// Rules whose head pattern matches the first formula. Ext is always present;
// Basic only when the negation of the first formula is in the tail.
RuleSet applicable_rules(const Sequent& s);

class EmptySequent : public std::invalid_argument {
 public:
  EmptySequent() : std::invalid_argument("applicable_rules: empty sequent") {}
};

using StepResult = std::variant<ProofState, std::vector<Diagnostic>>;

StepResult validate_step(const ProofState& state, const RuleApplication& app);

struct Verdict {
  enum class Status { Complete, Incomplete, Invalid };

  Status status = Status::Incomplete;
  std::vector<Sequent> open_goals;       // Incomplete
  std::size_t step_index = 0;            // Invalid: 0-based failing step
  std::vector<Diagnostic> diagnostics;   // Invalid

  bool complete() const { return status == Status::Complete; }
};

const char* to_string(Verdict::Status s);

// Result of folding steps until the first failure: the last good state is
// always available, which is what partial credit and prefix checking need.
struct Trace {
  ProofState state;
  std::size_t steps_validated = 0;
  std::optional<std::size_t> failed_step;
  std::vector<Diagnostic> diagnostics;

  Verdict verdict() const;
};

Trace check_trace(const Formula& goal, std::span<const RuleApplication> steps);
Trace check_trace_from(ProofState state, std::span<const RuleApplication> steps,
                       Signature symbols = {});

Verdict check_script(const Formula& goal, std::span<const RuleApplication> steps);

}  // namespace sqc
