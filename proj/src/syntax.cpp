#include "sqc/syntax.hpp"

#include <algorithm>
#include <map>

namespace sqc {

Term Term::var(std::size_t index) {
  Term t;
  t.kind = Kind::Var;
  t.index = index;
  return t;
}

Term Term::app(std::string symbol, std::vector<Term> args) {
  Term t;
  t.kind = Kind::App;
  t.symbol = std::move(symbol);
  t.args = std::move(args);
  return t;
}

Formula Formula::pred(std::string symbol, std::vector<Term> args) {
  Formula f;
  f.kind_ = Kind::Pred;
  f.symbol_ = std::move(symbol);
  f.args_ = std::move(args);
  return f;
}

Formula Formula::imp(Formula lhs, Formula rhs) {
  Formula f;
  f.kind_ = Kind::Imp;
  f.children_ = {std::move(lhs), std::move(rhs)};
  return f;
}

Formula Formula::dis(Formula lhs, Formula rhs) {
  Formula f;
  f.kind_ = Kind::Dis;
  f.children_ = {std::move(lhs), std::move(rhs)};
  return f;
}

Formula Formula::con(Formula lhs, Formula rhs) {
  Formula f;
  f.kind_ = Kind::Con;
  f.children_ = {std::move(lhs), std::move(rhs)};
  return f;
}

Formula Formula::neg(Formula body) {
  Formula f;
  f.kind_ = Kind::Neg;
  f.children_.push_back(std::move(body));
  return f;
}

Formula Formula::uni(Formula body, std::string binder_name) {
  Formula f;
  f.kind_ = Kind::Uni;
  f.children_.push_back(std::move(body));
  f.binder_name_ = std::move(binder_name);
  return f;
}

Formula Formula::exi(Formula body, std::string binder_name) {
  Formula f;
  f.kind_ = Kind::Exi;
  f.children_.push_back(std::move(body));
  f.binder_name_ = std::move(binder_name);
  return f;
}

bool operator==(const Formula& a, const Formula& b) {
  return a.kind_ == b.kind_ && a.symbol_ == b.symbol_ && a.args_ == b.args_ &&
         a.children_ == b.children_;
}

const char* to_string(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::Pred: return "Pred";
    case Formula::Kind::Imp: return "Imp";
    case Formula::Kind::Dis: return "Dis";
    case Formula::Kind::Con: return "Con";
    case Formula::Kind::Neg: return "Neg";
    case Formula::Kind::Uni: return "Uni";
    case Formula::Kind::Exi: return "Exi";
  }
  return "?";
}

bool Signature::has_function_named(const std::string& name) const {
  return std::any_of(functions.begin(), functions.end(),
                     [&](const Symbol& s) { return s.name == name; });
}

std::set<std::string> Signature::constants() const {
  std::set<std::string> out;
  for (const auto& s : functions)
    if (s.arity == 0) out.insert(s.name);
  return out;
}

NegativeShiftCapture::NegativeShiftCapture(std::size_t index, std::size_t cutoff)
    : std::runtime_error("bound variable #" + std::to_string(index) +
                         " would escape its binder (cutoff " +
                         std::to_string(cutoff) + ")"),
      index_(index) {}

Term shift(const Term& t, long amount, std::size_t cutoff) {
  if (t.is_var()) {
    if (t.index < cutoff) return t;
    if (amount < 0 && t.index < cutoff + static_cast<std::size_t>(-amount))
      throw NegativeShiftCapture(t.index, cutoff);
    return Term::var(static_cast<std::size_t>(static_cast<long>(t.index) + amount));
  }
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(shift(a, amount, cutoff));
  return Term::app(t.symbol, std::move(args));
}

namespace {

Term subst_term(const Term& t, const Term& replacement, std::size_t depth) {
  if (t.is_var()) {
    if (t.index == depth) return shift(replacement, static_cast<long>(depth), 0);
    if (t.index > depth) return Term::var(t.index - 1);
    return t;
  }
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(subst_term(a, replacement, depth));
  return Term::app(t.symbol, std::move(args));
}

Formula subst(const Formula& f, const Term& replacement, std::size_t depth) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Pred: {
      std::vector<Term> args;
      args.reserve(f.args().size());
      for (const auto& a : f.args()) args.push_back(subst_term(a, replacement, depth));
      return Formula::pred(f.symbol(), std::move(args));
    }
    case K::Imp:
      return Formula::imp(subst(f.lhs(), replacement, depth),
                          subst(f.rhs(), replacement, depth));
    case K::Dis:
      return Formula::dis(subst(f.lhs(), replacement, depth),
                          subst(f.rhs(), replacement, depth));
    case K::Con:
      return Formula::con(subst(f.lhs(), replacement, depth),
                          subst(f.rhs(), replacement, depth));
    case K::Neg:
      return Formula::neg(subst(f.body(), replacement, depth));
    case K::Uni:
      return Formula::uni(subst(f.body(), replacement, depth + 1), f.binder_name());
    case K::Exi:
      return Formula::exi(subst(f.body(), replacement, depth + 1), f.binder_name());
  }
  return f;
}

}  // namespace

Formula instantiate(const Formula& body, const Term& t) { return subst(body, t, 0); }

void collect_symbols(const Term& t, Signature& into) {
  if (t.is_var()) return;
  into.functions.insert({t.symbol, t.args.size()});
  for (const auto& a : t.args) collect_symbols(a, into);
}

void collect_symbols(const Formula& f, Signature& into) {
  if (f.is(Formula::Kind::Pred)) {
    into.predicates.insert({f.symbol(), f.args().size()});
    for (const auto& a : f.args()) collect_symbols(a, into);
  } else if (f.is_binary()) {
    collect_symbols(f.lhs(), into);
    collect_symbols(f.rhs(), into);
  } else {
    collect_symbols(f.body(), into);
  }
}

Signature constants_of(std::span<const Formula> formulas) {
  Signature sig;
  for (const auto& f : formulas) collect_symbols(f, sig);
  return sig;
}

Signature constants_of(const Formula& f) {
  Signature sig;
  collect_symbols(f, sig);
  return sig;
}

bool is_closed(const Term& t, std::size_t depth) {
  if (t.is_var()) return t.index < depth;
  return std::all_of(t.args.begin(), t.args.end(),
                     [&](const Term& a) { return is_closed(a, depth); });
}

bool is_closed(const Formula& f, std::size_t depth) {
  switch (f.kind()) {
    case Formula::Kind::Pred:
      return std::all_of(f.args().begin(), f.args().end(),
                         [&](const Term& a) { return is_closed(a, depth); });
    case Formula::Kind::Neg:
      return is_closed(f.body(), depth);
    case Formula::Kind::Uni:
    case Formula::Kind::Exi:
      return is_closed(f.body(), depth + 1);
    default:
      return is_closed(f.lhs(), depth) && is_closed(f.rhs(), depth);
  }
}

std::size_t term_depth(const Term& t) {
  std::size_t inner = 0;
  for (const auto& a : t.args) inner = std::max(inner, term_depth(a));
  return inner + 1;
}

namespace {

bool term_mentions(const Term& t, std::size_t index) {
  if (t.is_var()) return t.index == index;
  return std::any_of(t.args.begin(), t.args.end(),
                     [&](const Term& a) { return term_mentions(a, index); });
}

}  // namespace

bool occurs(const Formula& body, std::size_t index) {
  switch (body.kind()) {
    case Formula::Kind::Pred:
      return std::any_of(body.args().begin(), body.args().end(),
                         [&](const Term& a) { return term_mentions(a, index); });
    case Formula::Kind::Neg:
      return occurs(body.body(), index);
    case Formula::Kind::Uni:
    case Formula::Kind::Exi:
      return occurs(body.body(), index + 1);
    default:
      return occurs(body.lhs(), index) || occurs(body.rhs(), index);
  }
}

namespace {

struct ArityTable {
  std::map<std::string, std::size_t> functions;
  std::map<std::string, std::size_t> predicates;
};

ArityTable table_of(const Signature& sig) {
  ArityTable table;
  for (const auto& s : sig.functions) table.functions.emplace(s.name, s.arity);
  for (const auto& s : sig.predicates) table.predicates.emplace(s.name, s.arity);
  return table;
}

void walk_term(const Term& t, ArityTable& table, Signature& known,
               std::vector<ArityConflict>& out) {
  if (t.is_var()) return;
  auto [it, fresh] = table.functions.emplace(t.symbol, t.args.size());
  if (fresh) {
    known.functions.insert({t.symbol, t.args.size()});
  } else if (it->second != t.args.size()) {
    out.push_back({{t.symbol, it->second}, {t.symbol, t.args.size()}, false});
  }
  for (const auto& a : t.args) walk_term(a, table, known, out);
}

void walk(const Formula& f, ArityTable& table, Signature& known,
          std::vector<ArityConflict>& out) {
  if (f.is(Formula::Kind::Pred)) {
    auto [it, fresh] = table.predicates.emplace(f.symbol(), f.args().size());
    if (fresh) {
      known.predicates.insert({f.symbol(), f.args().size()});
    } else if (it->second != f.args().size()) {
      out.push_back({{f.symbol(), it->second}, {f.symbol(), f.args().size()}, true});
    }
    for (const auto& a : f.args()) walk_term(a, table, known, out);
  } else if (f.is_binary()) {
    walk(f.lhs(), table, known, out);
    walk(f.rhs(), table, known, out);
  } else {
    walk(f.body(), table, known, out);
  }
}

}  // namespace

std::vector<ArityConflict> check_arities(const Formula& f, Signature& known) {
  auto table = table_of(known);
  std::vector<ArityConflict> out;
  walk(f, table, known, out);
  return out;
}

}  // namespace sqc
