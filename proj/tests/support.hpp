#pragma once

// Shared fixtures for the unit tests and the acceptance run: formula corpora,
// seeded random generators and a deliberately sloppy surface printer used to
// fuzz the parser.

#include <random>
#include <string>
#include <vector>

#include "sqc/calculus.hpp"
#include "sqc/semantics.hpp"
#include "sqc/syntax.hpp"

namespace sqc::testing {

// Throws std::runtime_error with the first diagnostic if `text` does not parse.
Formula parse(const std::string& text);
Sequent sequent(std::initializer_list<const char*> texts);

struct ValidEntry {
  const char* text;
  std::size_t gamma_depth = 1;
};

const std::vector<ValidEntry>& valid_corpus();
const std::vector<const char*>& invalid_corpus();
// Texts that are already in printer-canonical form.
const std::vector<const char*>& canonical_formulas();
const std::vector<const char*>& canonical_scripts();

bool unary_only(const Formula& f);

// Fixed small signature: constants a b c, functions f/1 g/2, predicates
// p/0 q/1 r/2.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  // Terms and formulas may use bound indices < `bound`.
  Term term(std::size_t depth, std::size_t bound);
  Formula formula(std::size_t depth, std::size_t bound);
  Interpretation interpretation(std::size_t domain_size);

  // Random surface rendering of a closed formula: mixed ASCII/Unicode
  // spellings, extra parentheses and whitespace, fresh binder names.
  std::string surface(const Formula& f);

 private:
  std::string surface(const Formula& f, std::vector<std::string>& binders, bool wrap);
  std::string surface(const Term& t, const std::vector<std::string>& binders);
  std::string space();

  std::mt19937_64 rng_;
};

}  // namespace sqc::testing
