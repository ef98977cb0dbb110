#pragma once

// Batch grading of .sqc exam submissions against a JSON manifest.
//
// Each question is scored by milestones on a 100-point scale and then
// rescaled to the question's max_points: a clean parse, the fraction of
// branches closed, and completion, minus a deduction for proofs far longer
// than the reference. Anything that needs a human look gets a flag.

#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sqc/diagnostic.hpp"
#include "sqc/syntax.hpp"

namespace sqc {

struct ScoringPolicy {
  double parse = 10;
  double branches = 60;
  double complete = 30;
  double style_deduction = 10;
  double style_ratio = 3;
};

struct QuestionSpec {
  std::string id;
  double weight = 1;
  std::string formula_text;
  Formula formula;
  std::size_t reference_steps = 1;
  std::size_t max_points = 100;
};

struct ProblemSpec {
  std::string id;
  double weight = 1;
  std::vector<QuestionSpec> questions;
};

struct ProblemManifest {
  std::string exam_id;
  std::vector<ProblemSpec> problems;
  ScoringPolicy scoring;
};

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ProblemManifest load_manifest(const nlohmann::json& j);
ProblemManifest load_manifest_file(const std::filesystem::path& path);

namespace flags {
inline constexpr std::string_view kReview = "REVIEW";
inline constexpr std::string_view kManifestMismatch = "MANIFEST_MISMATCH";
inline constexpr std::string_view kMissing = "MISSING";
inline constexpr std::string_view kDuplicateSection = "DUPLICATE_SECTION";
inline constexpr std::string_view kUnreadable = "UNREADABLE";
inline constexpr std::string_view kUnknownSection = "UNKNOWN_SECTION";
}  // namespace flags

struct Breakdown {
  double parse = 0;
  double branches = 0;
  double complete = 0;
  double style_deduction = 0;
};

struct QuestionReport {
  std::string key;  // "<problem>.<question>"
  double points = 0;
  std::size_t max_points = 0;
  Breakdown breakdown;
  std::set<std::string> flags;
  std::vector<Diagnostic> diagnostics;
};

struct GradeReport {
  std::string student_id;
  std::vector<QuestionReport> questions;  // manifest order
  std::set<std::string> flags;            // submission-level
  std::vector<Diagnostic> diagnostics;    // submission-level
  double total = 0;                       // 0..100
  bool review_required = false;
};

// `line_offset` is added to every diagnostic line so locations refer to the
// whole submission file.
QuestionReport grade_question(const QuestionSpec& spec, std::string_view text,
                              const ScoringPolicy& scoring = {}, std::size_t line_offset = 0);

GradeReport grade_submission(const ProblemManifest& manifest, std::string_view file,
                             std::string student_id);

// Weighted recombination of per-question points into a 0..100 total.
double weighted_total(const ProblemManifest& manifest,
                      const std::vector<QuestionReport>& questions);

nlohmann::ordered_json to_json(const GradeReport& report);
std::string summary_csv(const ProblemManifest& manifest, const std::vector<GradeReport>& reports);
std::string format_points(double value);

struct BatchResult {
  std::vector<GradeReport> reports;  // sorted by student_id
  std::string csv;
};

// Grades every .sqc file in `submissions`, writing summary.csv and
// reports/<student_id>.json under `out`. Throws std::filesystem::filesystem_error
// when the submissions directory cannot be read.
BatchResult grade_batch(const ProblemManifest& manifest,
                        const std::filesystem::path& submissions,
                        const std::filesystem::path& out, std::size_t jobs = 1);

}  // namespace sqc
