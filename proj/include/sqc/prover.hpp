#pragma once

// Bounded proof search that emits ordinary .sqc scripts.
//
// The search is a ground tableau over the checker's own rules: non-branching
// rules first, then Beta, then Gamma instances drawn round-robin from the
// Herbrand universe of the branch. It deepens the number of Gamma instances
// allowed per branch until a proof is found or a bound is exhausted. A
// GaveUp result is not a disproof; use check_validity for that.

#include <string>
#include <variant>

#include "sqc/script.hpp"
#include "sqc/semantics.hpp"

namespace sqc {

struct GaveUp {
  enum class Bound { SearchSpace, GammaDepth, MaxSteps };

  Bound bound = Bound::SearchSpace;
  std::string reason;
};

const char* to_string(GaveUp::Bound b);

using ProofSearchResult = std::variant<ProofScript, GaveUp>;

ProofSearchResult prove_bounded(const Formula& goal, const Limits& limits);

}  // namespace sqc
