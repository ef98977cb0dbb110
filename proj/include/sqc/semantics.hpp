#pragma once

// Finite-model semantics: evaluation and exhaustive countermodel search.

#include <atomic>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sqc/syntax.hpp"

namespace sqc {

using Element = std::uint32_t;

// Tables are indexed by the argument tuple read as a base-n number with the
// first argument most significant.
struct Interpretation {
  std::size_t domain_size = 1;
  std::map<Symbol, std::vector<Element>> functions;
  std::map<Symbol, std::vector<bool>> predicates;

  std::size_t tuple_index(std::span<const Element> args) const;
  std::vector<Element> tuple_at(std::size_t index, std::size_t arity) const;

  Element apply(const Symbol& f, std::span<const Element> args) const;
  bool holds(const Symbol& p, std::span<const Element> args) const;

  // Tuples in the extension of p, ascending.
  std::vector<std::vector<Element>> extension(const Symbol& p) const;

  void set_function(const Symbol& f, std::span<const Element> args, Element value);
  void set_predicate(const Symbol& p, std::span<const Element> args, bool value);

  // Adds all-zero / all-false tables for every symbol not yet present.
  void cover(const Signature& sig);
};

std::string describe(const Interpretation& i);

struct Limits {
  std::size_t max_domain = 2;
  std::size_t gamma_depth = 1;
  std::size_t max_steps = 200;
  std::uint64_t enumeration_ceiling = 10'000'000;
  const std::atomic<bool>* cancel = nullptr;

  bool cancelled() const { return cancel && cancel->load(std::memory_order_relaxed); }
};

class UncoveredSymbol : public std::runtime_error {
 public:
  explicit UncoveredSymbol(const Symbol& s);
};

class EnumerationTooLarge : public std::runtime_error {
 public:
  explicit EnumerationTooLarge(double count);
  double count() const { return count_; }

 private:
  double count_;
};

class Cancelled : public std::runtime_error {
 public:
  Cancelled() : std::runtime_error("cancelled") {}
};

// `env` is the binder stack; BoundVar(k) reads env[env.size() - 1 - k].
bool eval(const Formula& f, const Interpretation& i, std::vector<Element> env = {});
Element eval(const Term& t, const Interpretation& i, const std::vector<Element>& env);

struct ValidUpTo {
  std::size_t domain_size = 0;
};

struct Countermodel {
  Interpretation model;
};

using ValidityResult = std::variant<ValidUpTo, Countermodel>;

// Number of interpretations of `sig` over domain sizes 1..max_domain.
double enumeration_count(const Signature& sig, std::size_t max_domain);

// Domain sizes ascending; within a size, function tables lexicographically
// (first entry most significant), then predicate tables by number of true
// tuples and lexicographically among equal counts.
ValidityResult check_validity(const Formula& f, const Limits& limits);

}  // namespace sqc
