#include "sqc/semantics.hpp"

#include <cmath>
#include <sstream>

namespace sqc {

namespace {

std::size_t power(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

std::string symbol_text(const Symbol& s) { return s.name + "/" + std::to_string(s.arity); }

}  // namespace

std::size_t Interpretation::tuple_index(std::span<const Element> args) const {
  std::size_t idx = 0;
  for (Element a : args) idx = idx * domain_size + a;
  return idx;
}

std::vector<Element> Interpretation::tuple_at(std::size_t index, std::size_t arity) const {
  std::vector<Element> out(arity);
  for (std::size_t k = arity; k-- > 0;) {
    out[k] = static_cast<Element>(index % domain_size);
    index /= domain_size;
  }
  return out;
}

Element Interpretation::apply(const Symbol& f, std::span<const Element> args) const {
  auto it = functions.find(f);
  if (it == functions.end()) throw UncoveredSymbol(f);
  return it->second.at(tuple_index(args));
}

bool Interpretation::holds(const Symbol& p, std::span<const Element> args) const {
  auto it = predicates.find(p);
  if (it == predicates.end()) throw UncoveredSymbol(p);
  return it->second.at(tuple_index(args));
}

std::vector<std::vector<Element>> Interpretation::extension(const Symbol& p) const {
  std::vector<std::vector<Element>> out;
  auto it = predicates.find(p);
  if (it == predicates.end()) return out;
  for (std::size_t k = 0; k < it->second.size(); ++k)
    if (it->second[k]) out.push_back(tuple_at(k, p.arity));
  return out;
}

void Interpretation::set_function(const Symbol& f, std::span<const Element> args, Element value) {
  auto& table = functions[f];
  table.resize(power(domain_size, f.arity), 0);
  table.at(tuple_index(args)) = value;
}

void Interpretation::set_predicate(const Symbol& p, std::span<const Element> args, bool value) {
  auto& table = predicates[p];
  table.resize(power(domain_size, p.arity), false);
  table.at(tuple_index(args)) = value;
}

void Interpretation::cover(const Signature& sig) {
  for (const auto& f : sig.functions)
    functions.try_emplace(f, power(domain_size, f.arity), Element{0});
  for (const auto& p : sig.predicates)
    predicates.try_emplace(p, power(domain_size, p.arity), false);
}

std::string describe(const Interpretation& i) {
  std::ostringstream os;
  os << "domain {";
  for (std::size_t e = 0; e < i.domain_size; ++e) os << (e ? ", " : "") << e;
  os << "}\n";
  for (const auto& [sym, table] : i.functions) {
    if (sym.arity == 0) {
      os << sym.name << " = " << table.at(0) << "\n";
      continue;
    }
    os << sym.name << ":";
    for (std::size_t k = 0; k < table.size(); ++k) {
      auto args = i.tuple_at(k, sym.arity);
      os << (k ? ", " : " ") << "(";
      for (std::size_t a = 0; a < args.size(); ++a) os << (a ? "," : "") << args[a];
      os << ")->" << table[k];
    }
    os << "\n";
  }
  for (const auto& [sym, table] : i.predicates) {
    if (sym.arity == 0) {
      os << sym.name << " = " << (table.at(0) ? "true" : "false") << "\n";
      continue;
    }
    os << sym.name << " = {";
    bool first = true;
    for (const auto& tuple : i.extension(sym)) {
      os << (first ? "" : ", ") << "(";
      for (std::size_t a = 0; a < tuple.size(); ++a) os << (a ? "," : "") << tuple[a];
      os << ")";
      first = false;
    }
    os << "}\n";
  }
  return os.str();
}

UncoveredSymbol::UncoveredSymbol(const Symbol& s)
    : std::runtime_error("no interpretation for symbol " + symbol_text(s)) {}

EnumerationTooLarge::EnumerationTooLarge(double count)
    : std::runtime_error("countermodel search would enumerate " +
                         std::to_string(static_cast<long double>(count)) +
                         " interpretations"),
      count_(count) {}

Element eval(const Term& t, const Interpretation& i, const std::vector<Element>& env) {
  if (t.is_var()) {
    if (t.index >= env.size())
      throw std::out_of_range("bound variable #" + std::to_string(t.index) + " is dangling");
    return env[env.size() - 1 - t.index];
  }
  std::vector<Element> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(eval(a, i, env));
  return i.apply({t.symbol, t.args.size()}, args);
}

namespace {

bool eval_in(const Formula& f, const Interpretation& i, std::vector<Element>& env) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Pred: {
      std::vector<Element> args;
      args.reserve(f.args().size());
      for (const auto& a : f.args()) args.push_back(eval(a, i, env));
      return i.holds({f.symbol(), f.args().size()}, args);
    }
    case K::Imp: return !eval_in(f.lhs(), i, env) || eval_in(f.rhs(), i, env);
    case K::Dis: return eval_in(f.lhs(), i, env) || eval_in(f.rhs(), i, env);
    case K::Con: return eval_in(f.lhs(), i, env) && eval_in(f.rhs(), i, env);
    case K::Neg: return !eval_in(f.body(), i, env);
    case K::Uni:
    case K::Exi: {
      const bool universal = f.is(K::Uni);
      for (std::size_t e = 0; e < i.domain_size; ++e) {
        env.push_back(static_cast<Element>(e));
        bool v = eval_in(f.body(), i, env);
        env.pop_back();
        if (universal && !v) return false;
        if (!universal && v) return true;
      }
      return universal;
    }
  }
  return false;
}

// Odometer over all interpretations of a signature at one domain size.
class Enumerator {
 public:
  Enumerator(const Signature& sig, std::size_t n) : n_(n) {
    model_.domain_size = n;
    for (const auto& f : sig.functions) {
      functions_.push_back(f);
      model_.functions[f].assign(power(n, f.arity), 0);
    }
    for (const auto& p : sig.predicates) {
      predicates_.push_back({p, power(n, p.arity), {}});
      model_.predicates[p].assign(power(n, p.arity), false);
    }
  }

  const Interpretation& current() const { return model_; }

  // Advances to the next interpretation; false after the last one.
  bool advance() {
    for (std::size_t k = predicates_.size(); k-- > 0;)
      if (advance(predicates_[k])) return true;
    for (std::size_t k = functions_.size(); k-- > 0;) {
      auto& table = model_.functions[functions_[k]];
      for (std::size_t e = table.size(); e-- > 0;) {
        if (++table[e] < n_) return true;
        table[e] = 0;
      }
    }
    return false;
  }

 private:
  struct PredicateTable {
    Symbol symbol;
    std::size_t entries;
    std::vector<std::size_t> chosen;  // ascending indices of true tuples
  };

  // Next subset by (size, lexicographic); wraps to the empty set.
  bool advance(PredicateTable& t) {
    auto& table = model_.predicates[t.symbol];
    auto& c = t.chosen;
    const std::size_t k = c.size();
    std::size_t pos = k;
    while (pos > 0 && c[pos - 1] == t.entries - k + pos - 1) --pos;
    if (pos > 0) {
      ++c[pos - 1];
      for (std::size_t j = pos; j < k; ++j) c[j] = c[j - 1] + 1;
    } else if (k < t.entries) {
      c.resize(k + 1);
      for (std::size_t j = 0; j <= k; ++j) c[j] = j;
    } else {
      c.clear();
      std::fill(table.begin(), table.end(), false);
      return false;
    }
    std::fill(table.begin(), table.end(), false);
    for (std::size_t idx : c) table[idx] = true;
    return true;
  }

  std::size_t n_;
  Interpretation model_;
  std::vector<Symbol> functions_;
  std::vector<PredicateTable> predicates_;
};

}  // namespace

bool eval(const Formula& f, const Interpretation& i, std::vector<Element> env) {
  return eval_in(f, i, env);
}

double enumeration_count(const Signature& sig, std::size_t max_domain) {
  double total = 0;
  for (std::size_t n = 1; n <= max_domain; ++n) {
    double here = 1;
    for (const auto& f : sig.functions)
      here *= std::pow(static_cast<double>(n), std::pow(static_cast<double>(n), f.arity));
    for (const auto& p : sig.predicates)
      here *= std::pow(2.0, std::pow(static_cast<double>(n), p.arity));
    total += here;
  }
  return total;
}

ValidityResult check_validity(const Formula& f, const Limits& limits) {
  const Signature sig = constants_of(f);
  const double count = enumeration_count(sig, limits.max_domain);
  if (count > static_cast<double>(limits.enumeration_ceiling)) throw EnumerationTooLarge(count);

  for (std::size_t n = 1; n <= limits.max_domain; ++n) {
    Enumerator e(sig, n);
    do {
      if (limits.cancelled()) throw Cancelled();
      if (!eval(f, e.current())) {
        Countermodel cm{e.current()};
        if (eval(f, cm.model)) throw std::logic_error("countermodel does not falsify the formula");
        return cm;
      }
    } while (e.advance());
  }
  return ValidUpTo{limits.max_domain};
}

}  // namespace sqc
