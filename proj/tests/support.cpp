#include "support.hpp"

#include <algorithm>
#include <stdexcept>

#include "sqc/script.hpp"

namespace sqc::testing {

Formula parse(const std::string& text) {
  auto r = parse_formula(text);
  if (auto* f = std::get_if<Formula>(&r)) return *f;
  throw std::runtime_error("does not parse: " + text + ": " +
                           std::get<std::vector<Diagnostic>>(r).front().message);
}

Sequent sequent(std::initializer_list<const char*> texts) {
  Sequent s;
  for (const char* t : texts) s.push_back(parse(t));
  return s;
}

const std::vector<ValidEntry>& valid_corpus() {
  static const std::vector<ValidEntry> corpus = {
      {"p <-> ~~p"},
      {"(exists x. forall y. r(x, y)) -> (forall y. exists x. r(x, y))"},
      {"p -> p"},
      {"p | ~p"},
      {"~(p & ~p)"},
      {"p -> q -> p"},
      {"(p -> q -> r) -> (p -> q) -> p -> r"},
      {"(p -> q) -> ~q -> ~p"},
      {"~~p -> p"},
      {"p -> ~~p"},
      {"p & q -> q & p"},
      {"p | q -> q | p"},
      {"p & q -> p"},
      {"p -> p | q"},
      {"((p -> q) -> p) -> p"},
      {"(p -> q) | (q -> p)"},
      {"~(p | q) -> ~p & ~q"},
      {"~p & ~q -> ~(p | q)"},
      {"~(p & q) -> ~p | ~q"},
      {"~p | ~q -> ~(p & q)"},
      {"p & (q | r) -> p & q | p & r"},
      {"p & q | p & r -> p & (q | r)"},
      {"p | q & r -> (p | q) & (p | r)"},
      {"(p -> q) & (q -> r) -> p -> r"},
      {"(p -> r) -> (q -> r) -> p | q -> r"},
      {"(p <-> q) -> (q <-> p)"},
      {"(~p -> p) -> p"},
      {"(p -> ~p) -> ~p"},
      {"p & (p -> q) -> q"},
      {"~q & (p -> q) -> ~p"},
      {"(p | q) & ~p -> q"},
      {"p -> q -> p & q"},
      {"(p -> q & r) -> (p -> q) & (p -> r)"},
      {"p | (p -> q)"},
      {"(forall x. p(x)) -> p(a)"},
      {"p(a) -> (exists x. p(x))"},
      {"(forall x. p(x)) -> (exists x. p(x))"},
      {"(forall x. p(x) & q(x)) -> forall x. p(x)"},
      {"(exists x. p(x)) -> ~forall x. ~p(x)"},
      {"(forall x. ~p(x)) -> ~exists x. p(x)"},
      {"~(exists x. p(x)) -> forall x. ~p(x)"},
      {"(forall x. p(x)) & (forall x. q(x)) -> forall x. p(x) & q(x)"},
      {"(forall x. p(x) & q(x)) -> (forall x. p(x)) & (forall x. q(x))"},
      {"(exists x. p(x) | q(x)) -> (exists x. p(x)) | (exists x. q(x))"},
      {"(exists x. p(x)) | (exists x. q(x)) -> exists x. p(x) | q(x)"},
      {"(exists x. p(x) & q(x)) -> exists x. p(x)"},
      {"(forall x. p(x) -> q(x)) -> (forall x. p(x)) -> forall x. q(x)"},
      {"(forall x. p(x) -> q(x)) -> (exists x. p(x)) -> exists x. q(x)"},
      {"exists x. p(x) -> (forall y. p(y))"},
      {"exists x. (exists y. p(y)) -> p(x)"},
      {"forall x. p(x) -> p(x)"},
      {"exists x. p(x) | ~p(x)"},
      {"(forall x. forall y. r(x, y)) -> forall y. forall x. r(x, y)"},
      {"(exists x. exists y. r(x, y)) -> exists y. exists x. r(x, y)"},
      {"(forall x. r(x, x)) -> r(a, a)"},
      {"(forall x. p(x)) -> p(f(a))", 2},
      {"(forall x. p(x)) -> forall x. p(f(x))", 2},
      {"(forall x. p(x) -> p(f(x))) -> p(a) -> p(f(f(a)))", 2},
      {"(exists x. forall y. r(x, y)) -> exists x. r(x, x)"},
      {"(forall x. exists y. r(x, y)) -> exists x. exists y. r(x, y)"},
      {"(forall x. p(x) | q) -> (forall x. p(x)) | q"},
      {"(forall x. p(x)) | q -> forall x. p(x) | q"},
      {"(exists x. p(x) & q) -> (exists x. p(x)) & q"},
      {"(q -> forall x. p(x)) -> forall x. q -> p(x)"},
      {"(exists x. p(x) -> q) -> (forall x. p(x)) -> q"},
      {"~(forall x. p(x)) -> exists x. ~p(x)"},
      {"(forall x. p(x)) -> ~exists x. ~p(x)"},
      {"(forall x. forall y. r(x, y) -> r(y, x)) -> r(a, b) -> r(b, a)"},
      {"(forall x. p(x) -> q(x)) & p(a) -> q(a)"},
  };
  return corpus;
}

const std::vector<const char*>& invalid_corpus() {
  static const std::vector<const char*> corpus = {
      "(forall y. exists x. r(x, y)) -> (exists x. forall y. r(x, y))",
      "p",
      "p -> q",
      "(p -> q) -> (q -> p)",
      "p | q -> p & q",
      "~(p & q) -> ~p & ~q",
      "(forall x. p(x) | q(x)) -> (forall x. p(x)) | (forall x. q(x))",
      "(exists x. p(x)) & (exists x. q(x)) -> exists x. p(x) & q(x)",
      "(exists x. p(x)) -> forall x. p(x)",
      "p(a) -> p(b)",
      "r(a, f(a)) -> r(f(a), a)",
      "(forall x. exists y. r(x, y)) -> exists y. r(y, y)",
      "(forall x. r(x, x)) -> forall x. forall y. r(x, y)",
  };
  return corpus;
}

const std::vector<const char*>& canonical_formulas() {
  static const std::vector<const char*> corpus = {
      "p",
      "~p",
      "~~p",
      "p -> q -> p",
      "(p -> q) -> p",
      "p & q | r",
      "p & (q | r)",
      "~(p & q)",
      "(p -> p) & (p -> p)",
      "(p -> ~~p) & (~~p -> p)",
      "r(a, f(a), g(b, c))",
      "forall x. p(x)",
      "~forall x. p(x) & q(x)",
      "(forall x. p(x)) & q(a)",
      "(exists x. forall y. r(x, y)) -> forall y. exists x. r(x, y)",
      "forall x. exists y. r(x, y) -> r(y, x)",
      "forall x. forall x1. r(x, x1)",
      "(forall x. p(x)) -> exists y. p(y) | q",
      "~(exists x. p(x)) -> ~q",
      "p(f(f(a)))",
  };
  return corpus;
}

const std::vector<const char*>& canonical_scripts() {
  static const std::vector<const char*> corpus = {
      "p -> p\n"
      "\n"
      "AlphaImp\n"
      "  ~p\n"
      "  p\n"
      "Ext\n"
      "  p\n"
      "  ~p\n"
      "Basic\n",

      "p & q -> q & p\n"
      "\n"
      "AlphaImp\n"
      "  ~(p & q)\n"
      "  q & p\n"
      "AlphaCon\n"
      "  ~p\n"
      "  ~q\n"
      "  q & p\n"
      "Ext\n"
      "  q & p\n"
      "  ~p\n"
      "  ~q\n"
      "BetaCon\n"
      "  q\n"
      "  ~p\n"
      "  ~q\n"
      "+\n"
      "  p\n"
      "  ~p\n"
      "  ~q\n"
      "Ext\n"
      "  q\n"
      "  ~q\n"
      "Basic\n"
      "Basic\n",

      "(forall x. p(x)) -> p(a)\n"
      "\n"
      "AlphaImp\n"
      "  ~forall x. p(x)\n"
      "  p(a)\n"
      "GammaUni\n"
      "  ~p(a)\n"
      "  p(a)\n"
      "Ext\n"
      "  p(a)\n"
      "  ~p(a)\n"
      "Basic\n",

      "p | ~p\n"
      "\n"
      "AlphaDis\n"
      "  p\n"
      "  ~p\n",
  };
  return corpus;
}

bool unary_only(const Formula& f) {
  for (const auto& p : constants_of(f).predicates)
    if (p.arity > 1) return false;
  return true;
}

Term Gen::term(std::size_t depth, std::size_t bound) {
  if (bound > 0 && coin(0.5)) return Term::var(below(bound));
  if (depth == 0 || coin(0.4)) {
    static const char* constants[] = {"a", "b", "c"};
    return Term::app(constants[below(3)]);
  }
  if (coin()) return Term::app("f", {term(depth - 1, bound)});
  return Term::app("g", {term(depth - 1, bound), term(depth - 1, bound)});
}

Formula Gen::formula(std::size_t depth, std::size_t bound) {
  const std::size_t pick = depth == 0 ? below(3) : below(10);
  switch (pick) {
    case 0: return Formula::pred("p");
    case 1: return Formula::pred("q", {term(2, bound)});
    case 2: return Formula::pred("r", {term(2, bound), term(2, bound)});
    case 3: return Formula::imp(formula(depth - 1, bound), formula(depth - 1, bound));
    case 4: return Formula::dis(formula(depth - 1, bound), formula(depth - 1, bound));
    case 5: return Formula::con(formula(depth - 1, bound), formula(depth - 1, bound));
    case 6: return Formula::neg(formula(depth - 1, bound));
    case 7:
    case 8: return Formula::uni(formula(depth - 1, bound + 1));
    default: return Formula::exi(formula(depth - 1, bound + 1));
  }
}

Interpretation Gen::interpretation(std::size_t n) {
  Interpretation i;
  i.domain_size = n;
  auto table = [&](std::size_t arity) {
    std::size_t size = 1;
    for (std::size_t k = 0; k < arity; ++k) size *= n;
    return size;
  };
  for (const char* c : {"a", "b", "c"}) i.functions[{c, 0}] = {static_cast<Element>(below(n))};
  for (auto [name, arity] : {std::pair{"f", 1}, std::pair{"g", 2}}) {
    std::vector<Element> t(table(arity));
    for (auto& e : t) e = static_cast<Element>(below(n));
    i.functions[{name, static_cast<std::size_t>(arity)}] = t;
  }
  for (auto [name, arity] : {std::pair{"p", 0}, std::pair{"q", 1}, std::pair{"r", 2}}) {
    std::vector<bool> t(table(arity));
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = coin();
    i.predicates[{name, static_cast<std::size_t>(arity)}] = t;
  }
  return i;
}

std::string Gen::space() {
  static const char* spaces[] = {"", " ", "  ", "\t"};
  return spaces[below(4)];
}

std::string Gen::surface(const Term& t, const std::vector<std::string>& binders) {
  if (t.is_var()) return binders[binders.size() - 1 - t.index];
  std::string s = t.symbol;
  if (t.args.empty()) return s;
  s += "(" + space();
  for (std::size_t k = 0; k < t.args.size(); ++k) {
    if (k) s += space() + "," + space();
    s += surface(t.args[k], binders);
  }
  return s + space() + ")";
}

std::string Gen::surface(const Formula& f) {
  std::vector<std::string> binders;
  return space() + surface(f, binders, false) + space();
}

// Every compound subformula is parenthesized unless it is a negation or an
// atom, so the text parses back to `f` regardless of precedence; `wrap` adds
// an optional extra layer.
std::string Gen::surface(const Formula& f, std::vector<std::string>& binders, bool wrap) {
  auto sym = [&](const char* ascii, const char* unicode) {
    return space() + (coin() ? ascii : unicode) + space();
  };
  std::string s;
  switch (f.kind()) {
    case Formula::Kind::Pred: {
      s = f.symbol();
      if (!f.args().empty()) {
        s += "(";
        for (std::size_t k = 0; k < f.args().size(); ++k) {
          if (k) s += ", ";
          s += surface(f.args()[k], binders);
        }
        s += ")";
      }
      break;
    }
    case Formula::Kind::Neg:
      s = sym("~", "¬") + surface(f.body(), binders, true);
      break;
    case Formula::Kind::Imp:
    case Formula::Kind::Dis:
    case Formula::Kind::Con: {
      const char* ascii = f.is(Formula::Kind::Imp) ? "->" : f.is(Formula::Kind::Dis) ? "|" : "&";
      const char* unicode = f.is(Formula::Kind::Imp) ? "→" : f.is(Formula::Kind::Dis) ? "∨" : "∧";
      s = "(" + surface(f.lhs(), binders, true) + sym(ascii, unicode) +
          surface(f.rhs(), binders, true) + ")";
      break;
    }
    case Formula::Kind::Uni:
    case Formula::Kind::Exi: {
      static const char* names[] = {"x", "y", "z", "u", "v", "w", "x1", "y_2"};
      std::string name;
      // Never reuse a name that is in scope: the text must mean exactly `f`.
      do {
        name = names[below(8)];
      } while (std::find(binders.begin(), binders.end(), name) != binders.end() &&
               binders.size() < 8);
      const bool uni = f.is(Formula::Kind::Uni);
      s = "(" + (uni ? std::string(coin() ? "forall " : "∀") : std::string(coin() ? "exists " : "∃")) +
          name + space() + "." + space();
      binders.push_back(name);
      s += surface(f.body(), binders, false) + ")";
      binders.pop_back();
      break;
    }
  }
  if (wrap && coin(0.2)) s = "(" + space() + s + space() + ")";
  return s;
}

}  // namespace sqc::testing
