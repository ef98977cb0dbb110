#include "sqc/prover.hpp"

#include <algorithm>
#include <set>

namespace sqc {

namespace {

using K = Formula::Kind;

enum class Kind { Alpha, Beta, Gamma, Delta, Literal };

struct Classified {
  Kind kind = Kind::Literal;
  Rule rule = Rule::Ext;
};

Classified classify(const Formula& f) {
  switch (f.kind()) {
    case K::Dis: return {Kind::Alpha, Rule::AlphaDis};
    case K::Imp: return {Kind::Alpha, Rule::AlphaImp};
    case K::Con: return {Kind::Beta, Rule::BetaCon};
    case K::Exi: return {Kind::Gamma, Rule::GammaExi};
    case K::Uni: return {Kind::Delta, Rule::DeltaUni};
    case K::Pred: return {};
    case K::Neg: break;
  }
  switch (f.body().kind()) {
    case K::Con: return {Kind::Alpha, Rule::AlphaCon};
    case K::Neg: return {Kind::Alpha, Rule::NegNeg};
    case K::Imp: return {Kind::Beta, Rule::BetaImp};
    case K::Dis: return {Kind::Beta, Rule::BetaDis};
    case K::Uni: return {Kind::Gamma, Rule::GammaUni};
    case K::Exi: return {Kind::Delta, Rule::DeltaExi};
    case K::Pred: return {};
  }
  return {};
}

struct GammaEntry {
  Formula formula;
  std::size_t next_term = 0;  // index into Branch::universe
};

struct Branch {
  Sequent seq;
  std::vector<Term> constants;  // in order of appearance
  std::vector<Term> universe;   // Herbrand terms up to the depth bound
  std::vector<GammaEntry> gammas;
  std::size_t rotation = 0;
  std::size_t instances = 0;
};

enum class Outcome { Closed, LimitHit, Saturated, StepsExceeded };

class Search {
 public:
  Search(const Formula& goal, const Limits& limits, std::size_t instance_limit)
      : limits_(limits), instance_limit_(instance_limit) {
    Signature sig = constants_of(goal);
    for (const auto& s : sig.functions) {
      taken_.insert(s.name);
      if (s.arity > 0) functions_.push_back(s);
    }
    for (const auto& s : sig.predicates) taken_.insert(s.name);

    root_.seq = {goal};
    for (const auto& s : sig.functions)
      if (s.arity == 0) root_.constants.push_back(Term::app(s.name));
    extend_universe(root_);
    register_gamma(root_, goal);
  }

  Outcome run() { return prove(root_); }

  std::vector<RuleApplication> steps;
  bool saw_gamma = false;

 private:
  std::string fresh_constant() {
    for (;;) {
      std::string name = "c" + std::to_string(++counter_);
      if (taken_.insert(name).second) return name;
    }
  }

  void emit(Rule rule, std::vector<Sequent> claimed) {
    RuleApplication app;
    app.rule = rule;
    app.claimed = std::move(claimed);
    steps.push_back(std::move(app));
  }

  // Brings seq[i] to the front with an Ext step.
  void surface(Branch& b, std::size_t i) {
    if (i == 0) return;
    Sequent next;
    next.reserve(b.seq.size());
    next.push_back(b.seq[i]);
    for (std::size_t k = 0; k < b.seq.size(); ++k)
      if (k != i) next.push_back(b.seq[k]);
    b.seq = next;
    emit(Rule::Ext, {next});
  }

  void extend_universe(Branch& b) {
    std::vector<Term> layer;
    std::vector<Term> all;
    for (const auto& c : b.constants) all.push_back(c);
    layer = all;
    for (std::size_t depth = 2; depth <= limits_.gamma_depth && !functions_.empty(); ++depth) {
      std::vector<Term> next;
      for (const auto& f : functions_) {
        // Argument tuples over `all` that use at least one term of `layer`.
        std::vector<std::size_t> idx(f.arity, 0);
        if (all.empty()) break;
        for (;;) {
          std::vector<Term> args;
          bool fresh = false;
          for (std::size_t a : idx) {
            args.push_back(all[a]);
            fresh = fresh || std::find(layer.begin(), layer.end(), all[a]) != layer.end();
          }
          if (fresh) next.push_back(Term::app(f.name, std::move(args)));
          std::size_t pos = f.arity;
          while (pos > 0 && ++idx[pos - 1] == all.size()) idx[--pos] = 0;
          if (pos == 0) break;
        }
      }
      all.insert(all.end(), next.begin(), next.end());
      layer = std::move(next);
    }
    for (auto& t : all)
      if (std::find(b.universe.begin(), b.universe.end(), t) == b.universe.end())
        b.universe.push_back(std::move(t));
  }

  void register_gamma(Branch& b, const Formula& f) {
    if (classify(f).kind != Kind::Gamma) return;
    saw_gamma = true;
    for (const auto& g : b.gammas)
      if (g.formula == f) return;
    b.gammas.push_back({f, 0});
  }

  std::optional<std::pair<std::size_t, std::size_t>> complementary(const Branch& b) {
    for (std::size_t j = 0; j < b.seq.size(); ++j) {
      if (!b.seq[j].is(K::Neg)) continue;
      for (std::size_t i = 0; i < b.seq.size(); ++i)
        if (i != j && b.seq[i] == b.seq[j].body()) return std::pair{i, j};
    }
    return std::nullopt;
  }

  std::vector<Sequent> results(Rule rule, const Sequent& seq, const Term* witness) {
    const Formula& h = seq.front();
    Sequent tail(seq.begin() + 1, seq.end());
    auto prefixed = [&](std::initializer_list<Formula> head) {
      Sequent s(head);
      s.insert(s.end(), tail.begin(), tail.end());
      return s;
    };
    switch (rule) {
      case Rule::AlphaDis: return {prefixed({h.lhs(), h.rhs()})};
      case Rule::AlphaImp: return {prefixed({Formula::neg(h.lhs()), h.rhs()})};
      case Rule::AlphaCon:
        return {prefixed({Formula::neg(h.body().lhs()), Formula::neg(h.body().rhs())})};
      case Rule::NegNeg: return {prefixed({h.body().body()})};
      case Rule::BetaCon: return {prefixed({h.lhs()}), prefixed({h.rhs()})};
      case Rule::BetaImp:
        return {prefixed({h.body().lhs()}), prefixed({Formula::neg(h.body().rhs())})};
      case Rule::BetaDis:
        return {prefixed({Formula::neg(h.body().lhs())}),
                prefixed({Formula::neg(h.body().rhs())})};
      case Rule::GammaExi:
      case Rule::DeltaUni: return {prefixed({instantiate(h.body(), *witness)})};
      case Rule::GammaUni:
      case Rule::DeltaExi:
        return {prefixed({Formula::neg(instantiate(h.body().body(), *witness))})};
      default: return {};
    }
  }

  Outcome prove(Branch& b) {
    for (;;) {
      if (limits_.cancelled()) throw Cancelled();
      if (steps.size() > limits_.max_steps) return Outcome::StepsExceeded;

      if (auto pair = complementary(b)) {
        auto [i, j] = *pair;
        if (i != 0) {
          Sequent closing{b.seq[i], b.seq[j]};
          emit(Rule::Ext, {closing});
        }
        emit(Rule::Basic, {});
        return Outcome::Closed;
      }

      // Alpha, NegNeg and Delta.
      auto simple = std::find_if(b.seq.begin(), b.seq.end(), [](const Formula& f) {
        auto k = classify(f).kind;
        return k == Kind::Alpha || k == Kind::Delta;
      });
      if (simple != b.seq.end()) {
        surface(b, static_cast<std::size_t>(simple - b.seq.begin()));
        Classified c = classify(b.seq.front());
        std::optional<Term> witness;
        if (c.kind == Kind::Delta) {
          witness = Term::app(fresh_constant());
          b.constants.push_back(*witness);
          extend_universe(b);
        }
        auto res = results(c.rule, b.seq, witness ? &*witness : nullptr);
        b.seq = res.front();
        emit(c.rule, std::move(res));
        std::size_t added = c.kind == Kind::Alpha && c.rule != Rule::NegNeg ? 2 : 1;
        for (std::size_t k = 0; k < added; ++k) register_gamma(b, b.seq[k]);
        continue;
      }

      auto beta = std::find_if(b.seq.begin(), b.seq.end(),
                               [](const Formula& f) { return classify(f).kind == Kind::Beta; });
      if (beta != b.seq.end()) {
        surface(b, static_cast<std::size_t>(beta - b.seq.begin()));
        Classified c = classify(b.seq.front());
        auto res = results(c.rule, b.seq, nullptr);
        emit(c.rule, res);
        Branch left = b;
        left.seq = res[0];
        register_gamma(left, left.seq.front());
        Outcome o = prove(left);
        if (o != Outcome::Closed) return o;
        Branch right = std::move(b);
        right.seq = res[1];
        register_gamma(right, right.seq.front());
        return prove(right);
      }

      if (!b.gammas.empty() && b.universe.empty()) {
        b.constants.push_back(Term::app(fresh_constant()));
        extend_universe(b);
      }

      std::optional<std::size_t> pick;
      for (std::size_t k = 0; k < b.gammas.size(); ++k) {
        std::size_t g = (b.rotation + k) % b.gammas.size();
        if (b.gammas[g].next_term < b.universe.size()) {
          pick = g;
          break;
        }
      }
      if (!pick) return Outcome::Saturated;
      if (b.instances >= instance_limit_) return Outcome::LimitHit;

      GammaEntry& entry = b.gammas[*pick];
      const Term term = b.universe[entry.next_term++];
      b.rotation = *pick + 1;
      ++b.instances;

      const Formula target = entry.formula;
      auto at = std::find(b.seq.begin(), b.seq.end(), target);
      Sequent dup;
      dup.push_back(target);
      for (auto it = b.seq.begin(); it != b.seq.end(); ++it)
        if (it != at) dup.push_back(*it);
      dup.push_back(target);
      b.seq = dup;
      emit(Rule::Ext, {dup});

      Rule rule = classify(target).rule;
      auto res = results(rule, b.seq, &term);
      b.seq = res.front();
      emit(rule, std::move(res));
      register_gamma(b, b.seq.front());
    }
  }

  const Limits& limits_;
  std::size_t instance_limit_;
  std::set<std::string> taken_;
  std::vector<Symbol> functions_;
  std::size_t counter_ = 0;
  Branch root_;
};

}  // namespace

const char* to_string(GaveUp::Bound b) {
  switch (b) {
    case GaveUp::Bound::SearchSpace: return "search-space";
    case GaveUp::Bound::GammaDepth: return "gamma-depth";
    case GaveUp::Bound::MaxSteps: return "max-steps";
  }
  return "?";
}

ProofSearchResult prove_bounded(const Formula& goal, const Limits& limits) {
  if (!is_closed(goal)) throw std::invalid_argument("prove_bounded: goal is not closed");
  for (std::size_t instance_limit = 0;; ++instance_limit) {
    Search search(goal, limits, instance_limit);
    switch (search.run()) {
      case Outcome::Closed: {
        if (search.steps.size() > limits.max_steps)
          return GaveUp{GaveUp::Bound::MaxSteps,
                        "no-proof-within-bounds: more than " + std::to_string(limits.max_steps) +
                            " steps needed"};
        ProofScript script;
        script.goal = goal;
        script.steps = std::move(search.steps);
        script.clean_prefix = script.steps.size();
        return script;
      }
      case Outcome::LimitHit:
        continue;
      case Outcome::Saturated:
        if (search.saw_gamma)
          return GaveUp{GaveUp::Bound::GammaDepth,
                        "no-proof-within-bounds: Herbrand terms up to gamma depth " +
                            std::to_string(limits.gamma_depth) + " exhausted"};
        return GaveUp{GaveUp::Bound::SearchSpace,
                      "no-proof-within-bounds: an open branch cannot be expanded further"};
      case Outcome::StepsExceeded:
        return GaveUp{GaveUp::Bound::MaxSteps,
                      "no-proof-within-bounds: more than " + std::to_string(limits.max_steps) +
                          " steps needed"};
    }
  }
}

}  // namespace sqc
