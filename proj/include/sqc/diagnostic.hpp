#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace sqc {

// 1-based; an all-zero span means "no source location" (e.g. generated steps).
struct SourceSpan {
  std::size_t line = 0;
  std::size_t col = 0;
  std::size_t end_line = 0;
  std::size_t end_col = 0;

  bool known() const { return line != 0; }

  static SourceSpan at(std::size_t line, std::size_t col) {
    return {line, col, line, col};
  }

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { Error, Warning };

inline const char* to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

struct Diagnostic {
  std::string code;
  Severity severity = Severity::Error;
  std::string message;
  SourceSpan location;
  std::optional<std::string> expected;
  std::optional<std::string> got;
};

namespace codes {

// Checker.
inline constexpr std::string_view kNotApplicable = "NOT_APPLICABLE";
inline constexpr std::string_view kResultMismatch = "RESULT_MISMATCH";
inline constexpr std::string_view kMatchInconsistent = "MATCH_INCONSISTENT";
inline constexpr std::string_view kCapturedTerm = "CAPTURED_TERM";
inline constexpr std::string_view kFreshnessViolation = "FRESHNESS_VIOLATION";
inline constexpr std::string_view kExtNotSubset = "EXT_NOT_SUBSET";
inline constexpr std::string_view kBasicNoMatch = "BASIC_NO_MATCH";
inline constexpr std::string_view kArityMismatch = "ARITY_MISMATCH";
inline constexpr std::string_view kWrongBranchCount = "WRONG_BRANCH_COUNT";
inline constexpr std::string_view kNoOpenGoal = "NO_OPEN_GOAL";
inline constexpr std::string_view kOpenFormula = "OPEN_FORMULA";

// Parser.
inline constexpr std::string_view kSyntaxError = "SYNTAX_ERROR";
inline constexpr std::string_view kUnknownRule = "UNKNOWN_RULE";
inline constexpr std::string_view kMissingGoal = "MISSING_GOAL";
inline constexpr std::string_view kUnexpectedLine = "UNEXPECTED_LINE";
inline constexpr std::string_view kEmptyBranch = "EMPTY_BRANCH";
inline constexpr std::string_view kInvalidEncoding = "INVALID_ENCODING";

// Service.
inline constexpr std::string_view kBodyTooLarge = "BODY_TOO_LARGE";
inline constexpr std::string_view kBadRequest = "BAD_REQUEST";

}  // namespace codes

}  // namespace sqc
