#pragma once

// First-order terms and formulas in de Bruijn form.
//
// Bound variables are numbered by their distance to the binding quantifier:
// in `forall x. exists y. r(x, y)` the body is r(#1, #0). Free names in the
// surface syntax are constants (0-ary function symbols), so every formula
// that reaches the calculus is closed.

#include <cstddef>
#include <initializer_list>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqc {

struct Term {
  enum class Kind { Var, App };

  Kind kind = Kind::App;
  std::size_t index = 0;   // Var only
  std::string symbol;      // App only
  std::vector<Term> args;  // App only

  static Term var(std::size_t index);
  static Term app(std::string symbol, std::vector<Term> args = {});

  bool is_var() const { return kind == Kind::Var; }
  bool is_app() const { return kind == Kind::App; }
  bool is_constant() const { return kind == Kind::App && args.empty(); }

  friend bool operator==(const Term&, const Term&) = default;
};

class Formula {
 public:
  enum class Kind { Pred, Imp, Dis, Con, Neg, Uni, Exi };

  static Formula pred(std::string symbol, std::vector<Term> args = {});
  static Formula imp(Formula lhs, Formula rhs);
  static Formula dis(Formula lhs, Formula rhs);
  static Formula con(Formula lhs, Formula rhs);
  static Formula neg(Formula body);
  static Formula uni(Formula body, std::string binder_name = {});
  static Formula exi(Formula body, std::string binder_name = {});

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }
  bool is_quantifier() const { return kind_ == Kind::Uni || kind_ == Kind::Exi; }
  bool is_binary() const {
    return kind_ == Kind::Imp || kind_ == Kind::Dis || kind_ == Kind::Con;
  }

  const std::string& symbol() const { return symbol_; }
  const std::vector<Term>& args() const { return args_; }

  // Imp/Dis/Con: both operands. Neg/Uni/Exi: body().
  const Formula& lhs() const { return children_.at(0); }
  const Formula& rhs() const { return children_.at(1); }
  const Formula& body() const { return children_.at(0); }

  // Surface name of a Uni/Exi binder. Never part of equality.
  const std::string& binder_name() const { return binder_name_; }
  void set_binder_name(std::string name) { binder_name_ = std::move(name); }

  // Alpha-equivalence: structural on the de Bruijn form.
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  Kind kind_ = Kind::Pred;
  std::string symbol_;
  std::vector<Term> args_;
  std::vector<Formula> children_;
  std::string binder_name_;
};

const char* to_string(Formula::Kind kind);

struct Symbol {
  std::string name;
  std::size_t arity = 0;

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

struct Signature {
  std::set<Symbol> functions;
  std::set<Symbol> predicates;

  bool empty() const { return functions.empty() && predicates.empty(); }
  bool has_function_named(const std::string& name) const;
  std::set<std::string> constants() const;

  friend bool operator==(const Signature&, const Signature&) = default;
};

// Thrown when an unshift would move a bound variable below zero, i.e. the
// term mentions a binder that the shift is trying to remove.
class NegativeShiftCapture : public std::runtime_error {
 public:
  NegativeShiftCapture(std::size_t index, std::size_t cutoff);

  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Adds `amount` to every bound index >= cutoff.
Term shift(const Term& t, long amount, std::size_t cutoff = 0);

// Replaces the variable bound by the quantifier whose body is `body` with
// the closed term `t`.
Formula instantiate(const Formula& body, const Term& t);

Signature constants_of(std::span<const Formula> formulas);
Signature constants_of(const Formula& f);
void collect_symbols(const Term& t, Signature& into);
void collect_symbols(const Formula& f, Signature& into);

// True iff every bound index is below the number of enclosing binders
// (plus `depth` binders assumed outside).
bool is_closed(const Term& t, std::size_t depth = 0);
bool is_closed(const Formula& f, std::size_t depth = 0);

std::size_t term_depth(const Term& t);
bool occurs(const Formula& body, std::size_t index);

// A symbol used with two different arities.
struct ArityConflict {
  Symbol first;
  Symbol second;
  bool predicate = false;
};

// Records the arity of every symbol on first use and reports later uses that
// disagree. `known` is updated with the symbols of `f`.
std::vector<ArityConflict> check_arities(const Formula& f, Signature& known);

}  // namespace sqc
