#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "exam_fixture.hpp"
#include "sqc/grader.hpp"
#include "sqc/prover.hpp"
#include "sqc/script.hpp"
#include "support.hpp"

using namespace sqc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

QuestionSpec question(const char* formula, std::size_t reference, std::size_t max_points = 100) {
  QuestionSpec q;
  q.id = "a";
  q.formula_text = formula;
  q.formula = sqc::testing::parse(formula);
  q.reference_steps = reference;
  q.max_points = max_points;
  return q;
}

fs::path scratch(const char* name) {
  fs::path p = fs::temp_directory_path() / ("sqc-grader-" + std::to_string(::getpid()) + "-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const char* kImp = "p -> p\n\nAlphaImp\n  ~p\n  p\nExt\n  p\n  ~p\nBasic\n";

}  // namespace

TEST_CASE("question milestones") {
  auto perfect = grade_question(question("p -> p", 3), kImp);
  CHECK(perfect.points == 100);
  CHECK(perfect.flags.empty());

  auto prefix = grade_question(question("p -> p", 3), "p -> p\n\nAlphaImp\n  ~p\n  p\n");
  CHECK(prefix.points == 10);
  CHECK(prefix.breakdown.parse == 10);
  CHECK(prefix.breakdown.branches == 0);

  auto mismatch = grade_question(question("p -> p", 3), "q -> q\n");
  CHECK(mismatch.points == 0);
  CHECK(mismatch.flags.count("MANIFEST_MISMATCH"));
  REQUIRE_FALSE(mismatch.diagnostics.empty());
  CHECK(*mismatch.diagnostics.back().expected == "p -> p");

  auto scaled = grade_question(question("p -> p", 3, 12), "p -> p\n\nAlphaImp\n  ~p\n  p\n");
  CHECK(scaled.points == doctest::Approx(1.2));

  // 3 steps is not more than 3 x 1.
  CHECK(grade_question(question("p -> p", 1), kImp).points == 100);
  auto style = grade_question(question("p | ~p", 1), "p | ~p\n\nAlphaDis\n  p\n  ~p\nExt\n  p\n  ~p\nExt\n  p\n  ~p\nBasic\n");
  CHECK(style.points == 90);
  CHECK(style.breakdown.style_deduction == 10);
  CHECK(style.flags.count("REVIEW"));
}

TEST_CASE("manifest validation") {
  auto j = nlohmann::json::parse(slurp(sqc::testing::exam_dir() + "/manifest.json"));
  ProblemManifest m = load_manifest(j);
  CHECK(m.problems.size() == 5);
  CHECK(m.problems[2].questions[1].formula ==
        sqc::testing::parse("(exists x. forall y. r(x, y)) -> forall y. exists x. r(x, y)"));

  auto broken = j;
  broken["problems"][0]["weight"] = 0.3;
  CHECK_THROWS_AS(load_manifest(broken), ManifestError);
  broken = j;
  broken["problems"][1]["questions"][0]["formula"] = "p ->";
  CHECK_THROWS_AS(load_manifest(broken), ManifestError);
  broken = j;
  broken["problems"][1]["questions"][0]["reference_steps"] = 0;
  CHECK_THROWS_AS(load_manifest(broken), ManifestError);
  broken = j;
  broken["problems"][1]["questions"][1]["id"] = "a";
  CHECK_THROWS_AS(load_manifest(broken), ManifestError);
  broken = j;
  broken["scoring"] = {{"parse", 20}, {"branches", 50}};
  CHECK(load_manifest(broken).scoring.parse == 20);
}

TEST_CASE("exam fixture matches the hand-computed table") {
  ProblemManifest m = load_manifest_file(sqc::testing::exam_dir() + "/manifest.json");
  for (const auto& row : sqc::testing::expected_exam()) {
    CAPTURE(row.student);
    std::string text = slurp(sqc::testing::exam_dir() + "/submissions/" + row.student + ".sqc");
    GradeReport r = grade_submission(m, text, row.student);
    REQUIRE(r.questions.size() == 10);
    for (std::size_t k = 0; k < 10; ++k) {
      CAPTURE(r.questions[k].key);
      CHECK(r.questions[k].points == doctest::Approx(row.points[k]).epsilon(1e-12));
    }
    CHECK(r.total == doctest::Approx(row.total).epsilon(1e-12));
    CHECK(r.review_required == row.review);

    // Weight algebra: the total is the recombination of the rows.
    double manual = 0;
    for (std::size_t k = 0; k < 10; ++k)
      manual += 0.2 * (k % 2 ? 0.6 : 0.4) * row.points[k] * 100 / (k % 2 ? 20 : 10);
    CHECK(std::abs(manual - r.total) < 1e-6);

    // Every flag is explained.
    for (const auto& q : r.questions)
      for (const auto& f : q.flags) {
        bool explained = false;
        for (const auto& d : q.diagnostics) explained = explained || d.code == f;
        CHECK_MESSAGE(explained, q.key << " " << f);
      }
  }
}

TEST_CASE("submission-level flags") {
  ProblemManifest m = load_manifest_file(sqc::testing::exam_dir() + "/manifest.json");
  std::string text = std::string("-- problem 1.a\nq\n-- problem 1.a\n") + kImp + "-- problem 9.z\np\n";
  GradeReport r = grade_submission(m, text, "dup");
  CHECK(r.questions[0].points == 10);
  CHECK(r.questions[0].flags.count("DUPLICATE_SECTION"));
  CHECK(r.flags.count("UNKNOWN_SECTION"));
  CHECK(r.questions[1].flags.count("MISSING"));

  GradeReport bad = grade_submission(m, "-- problem 1.a\np \xFE\n", "bin");
  CHECK(bad.flags.count("UNREADABLE"));
  CHECK(bad.total == 0);
  CHECK(bad.review_required);
}

TEST_CASE("diagnostic lines refer to the whole file") {
  ProblemManifest m = load_manifest_file(sqc::testing::exam_dir() + "/manifest.json");
  GradeReport r = grade_submission(m, "\n\n-- problem 1.a\np -> p\n\nAlphaImp\n  p\n  p\n", "x");
  REQUIRE_FALSE(r.questions[0].diagnostics.empty());
  CHECK(r.questions[0].diagnostics.front().code == "RESULT_MISMATCH");
  CHECK(r.questions[0].diagnostics.front().location.line == 6);
}

TEST_CASE("scoring is monotone in the valid prefix") {
  for (const char* text : {"p & q -> q & p", "p <-> ~~p",
                           "(exists x. forall y. r(x, y)) -> (forall y. exists x. r(x, y))"}) {
    auto proof = prove_bounded(sqc::testing::parse(text), Limits{});
    REQUIRE(std::holds_alternative<ProofScript>(proof));
    ProofScript s = std::get<ProofScript>(proof);
    QuestionSpec q = question(text, s.steps.size());
    double last = -1;
    for (std::size_t n = 0; n <= s.steps.size(); ++n) {
      ProofScript cut = s;
      cut.steps.resize(n);
      cut.clean_prefix = n;
      double points = grade_question(q, print_script(cut)).points;
      CHECK(points >= last);
      last = points;
    }
    CHECK(last == 100);
  }
}

TEST_CASE("batch output is deterministic") {
  ProblemManifest m = load_manifest_file(sqc::testing::exam_dir() + "/manifest.json");
  fs::path a = scratch("a"), b = scratch("b");
  auto first = grade_batch(m, sqc::testing::exam_dir() + "/submissions", a, 3);
  grade_batch(m, sqc::testing::exam_dir() + "/submissions", b, 1);
  CHECK(first.reports.size() == 6);
  CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
  for (const auto& row : sqc::testing::expected_exam()) {
    fs::path name = fs::path("reports") / (std::string(row.student) + ".json");
    CHECK(slurp(a / name) == slurp(b / name));
  }
  std::string csv = slurp(a / "summary.csv");
  CHECK(csv.rfind("student_id,1.a,1.b,2.a,2.b,3.a,3.b,4.a,4.b,5.a,5.b,total,review_required\n", 0) == 0);
  CHECK(csv.find("\ns2_prefix,1,8,1,8,4,2,1,2,10,2,26.8,false\n") != std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);

  fs::path empty = scratch("empty-in"), out = scratch("empty-out");
  grade_batch(m, empty, out);
  CHECK(slurp(out / "summary.csv") ==
        "student_id,1.a,1.b,2.a,2.b,3.a,3.b,4.a,4.b,5.a,5.b,total,review_required\n");

  CHECK_THROWS_AS(grade_batch(m, empty / "nope", out), fs::filesystem_error);
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(empty);
  fs::remove_all(out);
}

TEST_CASE("points formatting") {
  CHECK(format_points(26.8) == "26.8");
  CHECK(format_points(100) == "100");
  CHECK(format_points(1.0 / 3) == "0.3333");
  CHECK(format_points(-0.0) == "0");
}
