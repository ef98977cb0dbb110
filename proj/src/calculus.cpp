#include "sqc/calculus.hpp"

#include <algorithm>

#include "sqc/script.hpp"

namespace sqc {

namespace {

constexpr std::array<std::string_view, 13> kRuleNames = {
    "Basic",    "AlphaDis", "AlphaImp", "AlphaCon", "BetaCon",
    "BetaImp",  "BetaDis",  "GammaExi", "GammaUni", "DeltaUni",
    "DeltaExi", "NegNeg",   "Ext",
};

using K = Formula::Kind;

bool is_neg_of(const Formula& f, K inner) {
  return f.is(K::Neg) && f.body().is(inner);
}

// Head pattern of every rule except Basic and Ext.
bool head_matches(Rule r, const Formula& head) {
  switch (r) {
    case Rule::AlphaDis: return head.is(K::Dis);
    case Rule::AlphaImp: return head.is(K::Imp);
    case Rule::AlphaCon: return is_neg_of(head, K::Con);
    case Rule::BetaCon: return head.is(K::Con);
    case Rule::BetaImp: return is_neg_of(head, K::Imp);
    case Rule::BetaDis: return is_neg_of(head, K::Dis);
    case Rule::GammaExi: return head.is(K::Exi);
    case Rule::GammaUni: return is_neg_of(head, K::Uni);
    case Rule::DeltaUni: return head.is(K::Uni);
    case Rule::DeltaExi: return is_neg_of(head, K::Exi);
    case Rule::NegNeg: return is_neg_of(head, K::Neg);
    case Rule::Basic:
    case Rule::Ext: return true;
  }
  return false;
}

const char* expected_shape(Rule r) {
  switch (r) {
    case Rule::AlphaDis: return "a disjunction";
    case Rule::AlphaImp: return "an implication";
    case Rule::AlphaCon: return "a negated conjunction";
    case Rule::BetaCon: return "a conjunction";
    case Rule::BetaImp: return "a negated implication";
    case Rule::BetaDis: return "a negated disjunction";
    case Rule::GammaExi: return "an existential";
    case Rule::GammaUni: return "a negated universal";
    case Rule::DeltaUni: return "a universal";
    case Rule::DeltaExi: return "a negated existential";
    case Rule::NegNeg: return "a double negation";
    default: return "any formula";
  }
}

bool contains(std::span<const Formula> haystack, const Formula& f) {
  return std::find(haystack.begin(), haystack.end(), f) != haystack.end();
}

std::string lines_of(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += '\n';
    out += print_formula(s[i]);
  }
  return out;
}

Diagnostic error(std::string_view code, std::string message, const RuleApplication& app) {
  Diagnostic d;
  d.code = std::string(code);
  d.message = std::move(message);
  d.location = app.location;
  return d;
}

Diagnostic mismatch(const RuleApplication& app, const Sequent& expected,
                    const Sequent& got, std::string what) {
  auto d = error(codes::kResultMismatch,
                 std::string(rule_name(app.rule)) + ": " + std::move(what) +
                     " does not match the rule's result",
                 app);
  d.expected = lines_of(expected);
  d.got = lines_of(got);
  return d;
}

Sequent with_head(Formula head, std::span<const Formula> tail) {
  Sequent s;
  s.reserve(tail.size() + 1);
  s.push_back(std::move(head));
  s.insert(s.end(), tail.begin(), tail.end());
  return s;
}

// Recovers the instantiation term of a quantifier rule by walking the body
// and the claimed formula in parallel.
struct TermMatcher {
  enum class Failure { None, Structure, Inconsistent, Captured };

  std::optional<Term> term;
  Failure failure = Failure::None;
  Term first, second;  // the disagreeing candidates
  Term captured;

  bool terms(const Term& pattern, const Term& got, std::size_t depth) {
    if (pattern.is_var()) {
      if (pattern.index == depth) return bind(got, depth);
      Term want = pattern.index < depth ? pattern : Term::var(pattern.index - 1);
      if (got == want) return true;
      failure = Failure::Structure;
      return false;
    }
    if (!got.is_app() || got.symbol != pattern.symbol ||
        got.args.size() != pattern.args.size()) {
      failure = Failure::Structure;
      return false;
    }
    for (std::size_t i = 0; i < got.args.size(); ++i)
      if (!terms(pattern.args[i], got.args[i], depth)) return false;
    return true;
  }

  bool bind(const Term& got, std::size_t depth) {
    Term candidate;
    try {
      candidate = shift(got, -static_cast<long>(depth), 0);
    } catch (const NegativeShiftCapture&) {
      failure = Failure::Captured;
      captured = got;
      return false;
    }
    if (!term) {
      term = std::move(candidate);
      return true;
    }
    if (*term == candidate) return true;
    failure = Failure::Inconsistent;
    first = *term;
    second = std::move(candidate);
    return false;
  }

  bool formulas(const Formula& pattern, const Formula& got, std::size_t depth) {
    if (pattern.kind() != got.kind()) {
      failure = Failure::Structure;
      return false;
    }
    switch (pattern.kind()) {
      case K::Pred:
        if (pattern.symbol() != got.symbol() ||
            pattern.args().size() != got.args().size()) {
          failure = Failure::Structure;
          return false;
        }
        for (std::size_t i = 0; i < got.args().size(); ++i)
          if (!terms(pattern.args()[i], got.args()[i], depth)) return false;
        return true;
      case K::Neg:
        return formulas(pattern.body(), got.body(), depth);
      case K::Uni:
      case K::Exi:
        return formulas(pattern.body(), got.body(), depth + 1);
      default:
        return formulas(pattern.lhs(), got.lhs(), depth) &&
               formulas(pattern.rhs(), got.rhs(), depth);
    }
  }
};

std::string var_name(const Formula& quantifier) {
  return quantifier.binder_name().empty() ? "x" : quantifier.binder_name();
}

// Shared checking for the four quantifier rules. `negated` selects the
// GammaUni/DeltaExi forms, `delta` the fresh-constant side condition.
std::optional<Diagnostic> check_quantifier(const RuleApplication& app, const Sequent& goal,
                                           bool negated, bool delta) {
  const Formula& head = goal.front();
  const Formula& quantifier = negated ? head.body() : head;
  const Formula& body = quantifier.body();
  std::span<const Formula> tail(goal.begin() + 1, goal.end());
  const Sequent& claimed = app.claimed.front();

  // The placeholder only shows up in messages.
  const Term placeholder = Term::app("?" + var_name(quantifier));
  auto shape = [&](const Term& t) {
    Formula inst = instantiate(body, t);
    return negated ? Formula::neg(std::move(inst)) : inst;
  };

  if (claimed.empty())
    return mismatch(app, with_head(shape(placeholder), tail), claimed, "the result");

  const Formula& got_head = claimed.front();
  const Formula* got_body = &got_head;
  if (negated) {
    if (!got_head.is(K::Neg))
      return mismatch(app, with_head(shape(placeholder), tail), claimed, "the result");
    got_body = &got_head.body();
  }

  TermMatcher m;
  if (!m.formulas(body, *got_body, 0)) {
    switch (m.failure) {
      case TermMatcher::Failure::Inconsistent: {
        auto d = error(codes::kMatchInconsistent,
                       std::string(rule_name(app.rule)) + ": " + var_name(quantifier) +
                           " is replaced by " + print_term(m.first) + " in one place and by " +
                           print_term(m.second) + " in another",
                       app);
        d.expected = lines_of(with_head(shape(m.first), tail));
        d.got = lines_of(claimed);
        return d;
      }
      case TermMatcher::Failure::Captured: {
        auto d = error(codes::kCapturedTerm,
                       std::string(rule_name(app.rule)) + ": the term replacing " +
                           var_name(quantifier) +
                           " mentions a variable bound inside the formula",
                       app);
        d.expected = lines_of(with_head(shape(placeholder), tail));
        d.got = lines_of(claimed);
        return d;
      }
      default:
        return mismatch(app, with_head(shape(placeholder), tail), claimed, "the result");
    }
  }

  // Without an occurrence any witness gives the same instance.
  const Term witness = m.term.value_or(placeholder);
  Sequent expected = with_head(shape(witness), tail);

  if (delta && m.term) {
    if (!m.term->is_constant()) {
      auto d = error(codes::kResultMismatch,
                     std::string(rule_name(app.rule)) + ": " + var_name(quantifier) +
                         " must be replaced by a new constant, not " + print_term(*m.term),
                     app);
      d.expected = lines_of(with_head(shape(placeholder), tail));
      d.got = lines_of(claimed);
      return d;
    }
    const auto used = constants_of(std::span<const Formula>(goal));
    if (used.has_function_named(m.term->symbol)) {
      auto d = error(codes::kFreshnessViolation,
                     std::string(rule_name(app.rule)) + ": " + m.term->symbol +
                         " already occurs in the goal; pick a new constant",
                     app);
      d.expected = lines_of(with_head(shape(placeholder), tail));
      d.got = lines_of(claimed);
      return d;
    }
  }

  if (claimed != expected) return mismatch(app, expected, claimed, "the result");
  return std::nullopt;
}

// Returns the expected results of the deterministic propositional rules.
std::vector<Sequent> propositional_results(Rule r, const Sequent& goal) {
  const Formula& h = goal.front();
  std::span<const Formula> tail(goal.begin() + 1, goal.end());
  switch (r) {
    case Rule::AlphaDis: {
      Sequent s{h.lhs(), h.rhs()};
      s.insert(s.end(), tail.begin(), tail.end());
      return {s};
    }
    case Rule::AlphaImp: {
      Sequent s{Formula::neg(h.lhs()), h.rhs()};
      s.insert(s.end(), tail.begin(), tail.end());
      return {s};
    }
    case Rule::AlphaCon: {
      Sequent s{Formula::neg(h.body().lhs()), Formula::neg(h.body().rhs())};
      s.insert(s.end(), tail.begin(), tail.end());
      return {s};
    }
    case Rule::BetaCon:
      return {with_head(h.lhs(), tail), with_head(h.rhs(), tail)};
    case Rule::BetaImp:
      return {with_head(h.body().lhs(), tail), with_head(Formula::neg(h.body().rhs()), tail)};
    case Rule::BetaDis:
      return {with_head(Formula::neg(h.body().lhs()), tail),
              with_head(Formula::neg(h.body().rhs()), tail)};
    case Rule::NegNeg:
      return {with_head(h.body().body(), tail)};
    default:
      return {};
  }
}

}  // namespace

std::string_view rule_name(Rule r) { return kRuleNames[static_cast<std::size_t>(r)]; }

std::optional<Rule> rule_from_name(std::string_view name) {
  for (Rule r : kAllRules)
    if (rule_name(r) == name) return r;
  return std::nullopt;
}

std::size_t result_count(Rule r) {
  switch (r) {
    case Rule::Basic: return 0;
    case Rule::BetaCon:
    case Rule::BetaImp:
    case Rule::BetaDis: return 2;
    default: return 1;
  }
}

ProofState ProofState::initial(const Formula& goal) {
  ProofState st;
  st.open_goals.push_back({0, Sequent{goal}});
  st.next_branch_id = 1;
  return st;
}

RuleSet applicable_rules(const Sequent& s) {
  if (s.empty()) throw EmptySequent();
  const Formula& head = s.front();
  std::span<const Formula> tail(s.begin() + 1, s.end());
  RuleSet out;
  for (Rule r : kAllRules) {
    if (r == Rule::Basic) {
      if (contains(tail, Formula::neg(head))) out.push_back(r);
    } else if (head_matches(r, head)) {
      out.push_back(r);
    }
  }
  return out;
}

StepResult validate_step(const ProofState& state, const RuleApplication& app) {
  const std::string name(rule_name(app.rule));
  if (state.open_goals.empty())
    return std::vector{error(codes::kNoOpenGoal, name + ": there are no open goals left", app)};

  const Goal& current = state.open_goals.front();
  const Sequent& goal = current.sequent;

  if (app.claimed.size() != result_count(app.rule)) {
    auto d = error(codes::kWrongBranchCount,
                   name + " produces " + std::to_string(result_count(app.rule)) +
                       " result sequent(s) but " + std::to_string(app.claimed.size()) +
                       " were given",
                   app);
    return std::vector{d};
  }

  for (const auto& seq : app.claimed)
    for (const auto& f : seq)
      if (!is_closed(f))
        return std::vector{error(codes::kOpenFormula,
                                 name + ": result contains a formula with a dangling variable",
                                 app)};

  if (goal.empty() && app.rule != Rule::Ext)
    return std::vector{error(codes::kNotApplicable, name + ": the goal is empty", app)};

  if (!goal.empty() && !head_matches(app.rule, goal.front())) {
    auto d = error(codes::kNotApplicable,
                   name + " needs " + expected_shape(app.rule) +
                       " as the first formula, found " + print_formula(goal.front()),
                   app);
    return std::vector{d};
  }

  std::span<const Formula> tail;
  if (!goal.empty()) tail = std::span<const Formula>(goal.begin() + 1, goal.end());

  switch (app.rule) {
    case Rule::Basic:
      if (!contains(tail, Formula::neg(goal.front()))) {
        auto d = error(codes::kBasicNoMatch,
                       "Basic: " + print_formula(Formula::neg(goal.front())) +
                           " does not occur after the first formula",
                       app);
        return std::vector{d};
      }
      break;
    case Rule::Ext: {
      std::vector<std::string> offending;
      for (const auto& f : app.claimed.front())
        if (!contains(goal, f)) offending.push_back(print_formula(f));
      if (!offending.empty()) {
        std::string list;
        for (const auto& o : offending) list += (list.empty() ? "" : ", ") + o;
        auto d = error(codes::kExtNotSubset,
                       "Ext: not in the current goal: " + list, app);
        d.expected = lines_of(goal);
        d.got = lines_of(app.claimed.front());
        return std::vector{d};
      }
      break;
    }
    case Rule::GammaExi:
    case Rule::GammaUni:
    case Rule::DeltaUni:
    case Rule::DeltaExi: {
      bool negated = app.rule == Rule::GammaUni || app.rule == Rule::DeltaExi;
      bool delta = app.rule == Rule::DeltaUni || app.rule == Rule::DeltaExi;
      if (auto d = check_quantifier(app, goal, negated, delta)) return std::vector{*d};
      break;
    }
    default: {
      auto expected = propositional_results(app.rule, goal);
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (expected[i] != app.claimed[i]) {
          std::string what = expected.size() == 1 ? "the result"
                             : i == 0             ? "the left result"
                                                  : "the right result";
          return std::vector{mismatch(app, expected[i], app.claimed[i], what)};
        }
      }
    }
  }

  ProofState next = state;
  next.open_goals.pop_front();
  ++next.steps_consumed;
  if (app.claimed.empty()) {
    ++next.closed;
  } else if (app.claimed.size() == 1) {
    next.open_goals.push_front({current.branch, app.claimed.front()});
  } else {
    std::size_t left = next.next_branch_id++;
    std::size_t right = next.next_branch_id++;
    next.open_goals.push_front({right, app.claimed[1]});
    next.open_goals.push_front({left, app.claimed[0]});
  }
  return next;
}

const char* to_string(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::Complete: return "complete";
    case Verdict::Status::Incomplete: return "incomplete";
    case Verdict::Status::Invalid: return "invalid";
  }
  return "?";
}

Verdict Trace::verdict() const {
  Verdict v;
  if (failed_step) {
    v.status = Verdict::Status::Invalid;
    v.step_index = *failed_step;
    v.diagnostics = diagnostics;
  } else if (state.open_goals.empty()) {
    v.status = Verdict::Status::Complete;
  } else {
    v.status = Verdict::Status::Incomplete;
    for (const auto& g : state.open_goals) v.open_goals.push_back(g.sequent);
  }
  return v;
}

namespace {

std::vector<Diagnostic> arity_errors(const std::vector<ArityConflict>& conflicts,
                                     const SourceSpan& where) {
  std::vector<Diagnostic> out;
  for (const auto& c : conflicts) {
    Diagnostic d;
    d.code = std::string(codes::kArityMismatch);
    d.message = std::string(c.predicate ? "predicate " : "function ") + c.first.name +
                " was first used with " + std::to_string(c.first.arity) +
                " argument(s), here with " + std::to_string(c.second.arity);
    d.location = where;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

Trace check_trace_from(ProofState state, std::span<const RuleApplication> steps,
                       Signature symbols) {
  Trace trace;
  trace.state = std::move(state);
  for (const auto& g : trace.state.open_goals)
    for (const auto& f : g.sequent) check_arities(f, symbols);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& app = steps[i];
    std::vector<ArityConflict> conflicts;
    for (const auto& seq : app.claimed)
      for (const auto& f : seq) {
        auto more = check_arities(f, symbols);
        conflicts.insert(conflicts.end(), more.begin(), more.end());
      }
    if (!conflicts.empty()) {
      trace.failed_step = i;
      trace.diagnostics = arity_errors(conflicts, app.location);
      return trace;
    }

    auto result = validate_step(trace.state, app);
    if (auto* diags = std::get_if<std::vector<Diagnostic>>(&result)) {
      trace.failed_step = i;
      trace.diagnostics = std::move(*diags);
      return trace;
    }
    trace.state = std::move(std::get<ProofState>(result));
    ++trace.steps_validated;
  }
  return trace;
}

Trace check_trace(const Formula& goal, std::span<const RuleApplication> steps) {
  Signature symbols;
  auto conflicts = check_arities(goal, symbols);
  if (!conflicts.empty() || !is_closed(goal)) {
    Trace trace;
    trace.state = ProofState::initial(goal);
    trace.failed_step = 0;
    trace.diagnostics = arity_errors(conflicts, {});
    if (!is_closed(goal)) {
      Diagnostic d;
      d.code = std::string(codes::kOpenFormula);
      d.message = "the goal formula has a dangling bound variable";
      trace.diagnostics.push_back(std::move(d));
    }
    return trace;
  }
  return check_trace_from(ProofState::initial(goal), steps, std::move(symbols));
}

Verdict check_script(const Formula& goal, std::span<const RuleApplication> steps) {
  return check_trace(goal, steps).verdict();
}

}  // namespace sqc
