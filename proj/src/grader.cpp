#include "sqc/grader.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <thread>

#include "sqc/calculus.hpp"
#include "sqc/script.hpp"

namespace sqc {

namespace fs = std::filesystem;

namespace {

constexpr double kWeightTolerance = 1e-9;

std::string key_of(const ProblemSpec& p, const QuestionSpec& q) { return p.id + "." + q.id; }

double number(const nlohmann::json& j, const char* field, const std::string& where) {
  if (!j.contains(field) || !j.at(field).is_number())
    throw ManifestError(where + ": '" + field + "' must be a number");
  return j.at(field).get<double>();
}

std::string text(const nlohmann::json& j, const char* field, const std::string& where) {
  if (!j.contains(field) || !j.at(field).is_string())
    throw ManifestError(where + ": '" + field + "' must be a string");
  return j.at(field).get<std::string>();
}

std::size_t natural(const nlohmann::json& j, const char* field, const std::string& where) {
  if (!j.contains(field) || !j.at(field).is_number_integer() || j.at(field).get<long>() < 0)
    throw ManifestError(where + ": '" + field + "' must be a non-negative integer");
  return j.at(field).get<std::size_t>();
}

Diagnostic flag_note(std::string_view flag, std::string message) {
  Diagnostic d;
  d.code = std::string(flag);
  d.severity = Severity::Warning;
  d.message = std::move(message);
  return d;
}

void offset_lines(std::vector<Diagnostic>& diags, std::size_t offset) {
  for (auto& d : diags) {
    if (!d.location.known()) continue;
    d.location.line += offset;
    d.location.end_line += offset;
  }
}

nlohmann::ordered_json diagnostic_json(const Diagnostic& d) {
  nlohmann::ordered_json j;
  j["code"] = d.code;
  j["severity"] = to_string(d.severity);
  j["message"] = d.message;
  j["line"] = d.location.line;
  j["col"] = d.location.col;
  if (d.expected) j["expected"] = *d.expected;
  if (d.got) j["got"] = *d.got;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ProblemManifest load_manifest(const nlohmann::json& j) {
  ProblemManifest m;
  if (!j.is_object()) throw ManifestError("manifest must be a JSON object");
  m.exam_id = text(j, "exam_id", "manifest");
  if (!j.contains("problems") || !j.at("problems").is_array() || j.at("problems").empty())
    throw ManifestError("manifest: 'problems' must be a non-empty array");

  if (j.contains("scoring")) {
    const auto& s = j.at("scoring");
    if (!s.is_object()) throw ManifestError("manifest: 'scoring' must be an object");
    auto opt = [&](const char* field, double& into) {
      if (s.contains(field)) into = number(s, field, "scoring");
    };
    opt("parse", m.scoring.parse);
    opt("branches", m.scoring.branches);
    opt("complete", m.scoring.complete);
    opt("style_deduction", m.scoring.style_deduction);
    opt("style_ratio", m.scoring.style_ratio);
  }

  std::set<std::string> keys;
  double problem_sum = 0;
  for (const auto& pj : j.at("problems")) {
    ProblemSpec p;
    p.id = text(pj, "id", "problem");
    const std::string where = "problem " + p.id;
    p.weight = number(pj, "weight", where);
    if (p.weight < 0) throw ManifestError(where + ": negative weight");
    problem_sum += p.weight;
    if (!pj.contains("questions") || !pj.at("questions").is_array() || pj.at("questions").empty())
      throw ManifestError(where + ": 'questions' must be a non-empty array");

    double question_sum = 0;
    for (const auto& qj : pj.at("questions")) {
      QuestionSpec q;
      q.id = text(qj, "id", where + " question");
      const std::string qwhere = "question " + p.id + "." + q.id;
      q.weight = number(qj, "weight", qwhere);
      if (q.weight < 0) throw ManifestError(qwhere + ": negative weight");
      question_sum += q.weight;
      q.formula_text = text(qj, "formula", qwhere);
      q.reference_steps = natural(qj, "reference_steps", qwhere);
      if (q.reference_steps < 1) throw ManifestError(qwhere + ": reference_steps must be >= 1");
      q.max_points = natural(qj, "max_points", qwhere);
      if (q.max_points < 1) throw ManifestError(qwhere + ": max_points must be >= 1");

      auto parsed = parse_formula(q.formula_text);
      if (auto* diags = std::get_if<std::vector<Diagnostic>>(&parsed))
        throw ManifestError(qwhere + ": formula does not parse: " + diags->front().message);
      q.formula = std::get<Formula>(std::move(parsed));
      if (!is_closed(q.formula)) throw ManifestError(qwhere + ": formula is not closed");

      if (!keys.insert(key_of(p, q)).second)
        throw ManifestError(qwhere + ": duplicate question key");
      p.questions.push_back(std::move(q));
    }
    if (std::abs(question_sum - 1.0) > kWeightTolerance)
      throw ManifestError(where + ": question weights sum to " + std::to_string(question_sum));
    m.problems.push_back(std::move(p));
  }
  if (std::abs(problem_sum - 1.0) > kWeightTolerance)
    throw ManifestError("manifest: problem weights sum to " + std::to_string(problem_sum));
  return m;
}

ProblemManifest load_manifest_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot read manifest " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ManifestError("manifest " + path.string() + ": " + e.what());
  }
  return load_manifest(j);
}

QuestionReport grade_question(const QuestionSpec& spec, std::string_view text,
                              const ScoringPolicy& scoring, std::size_t line_offset) {
  QuestionReport row;
  row.max_points = spec.max_points;
  const double scale = static_cast<double>(spec.max_points) / 100.0;

  ParseOutcome parsed = parse_script(text);
  row.diagnostics = parsed.diagnostics;
  if (parsed.recovered) {
    row.flags.insert(std::string(flags::kReview));
    row.diagnostics.push_back(
        flag_note(flags::kReview, "the script has syntax errors; graded from the part that parsed"));
  }
  if (!parsed.script) {
    offset_lines(row.diagnostics, line_offset);
    return row;
  }
  const ProofScript& script = *parsed.script;

  if (!(script.goal == spec.formula)) {
    row.flags.insert(std::string(flags::kManifestMismatch));
    auto d = flag_note(flags::kManifestMismatch,
                       "the goal formula differs from the one given in the exam");
    d.location = script.goal_location;
    d.expected = print_formula(spec.formula);
    d.got = print_formula(script.goal);
    row.diagnostics.push_back(std::move(d));
    offset_lines(row.diagnostics, line_offset);
    return row;
  }

  std::span<const RuleApplication> steps(script.steps.data(), script.clean_prefix);
  Trace trace = check_trace(script.goal, steps);
  row.diagnostics.insert(row.diagnostics.end(), trace.diagnostics.begin(),
                         trace.diagnostics.end());

  const double closed = static_cast<double>(trace.state.closed);
  const double open = static_cast<double>(trace.state.open_goals.size());
  const double fraction = closed / (closed + open);
  const bool complete = !trace.failed_step && trace.state.open_goals.empty();

  row.breakdown.parse = parsed.recovered ? 0 : scoring.parse * scale;
  row.breakdown.branches = scoring.branches * fraction * scale;
  row.breakdown.complete = complete ? scoring.complete * scale : 0;
  const double length = static_cast<double>(trace.steps_validated);
  if (complete && length > scoring.style_ratio * static_cast<double>(spec.reference_steps)) {
    row.breakdown.style_deduction = scoring.style_deduction * scale;
    row.flags.insert(std::string(flags::kReview));
    row.diagnostics.push_back(flag_note(
        flags::kReview, "the proof has " + std::to_string(trace.steps_validated) +
                            " steps, more than " + format_points(scoring.style_ratio) +
                            " times the reference length " +
                            std::to_string(spec.reference_steps)));
  }
  if (trace.failed_step && fraction >= 0.5) {
    row.flags.insert(std::string(flags::kReview));
    row.diagnostics.push_back(flag_note(
        flags::kReview, "an invalid step follows a proof that had closed at least half of its "
                        "branches"));
  }

  const double sum = row.breakdown.parse + row.breakdown.branches + row.breakdown.complete -
                     row.breakdown.style_deduction;
  row.points = std::clamp(sum, 0.0, static_cast<double>(spec.max_points));
  offset_lines(row.diagnostics, line_offset);
  return row;
}

double weighted_total(const ProblemManifest& manifest,
                      const std::vector<QuestionReport>& questions) {
  std::map<std::string, const QuestionReport*> by_key;
  for (const auto& q : questions) by_key[q.key] = &q;
  double total = 0;
  for (const auto& p : manifest.problems) {
    double inner = 0;
    for (const auto& q : p.questions) {
      auto it = by_key.find(key_of(p, q));
      if (it == by_key.end()) continue;
      inner += q.weight * it->second->points * 100.0 / static_cast<double>(q.max_points);
    }
    total += p.weight * inner;
  }
  return total;
}

namespace {

struct Section {
  std::string text;
  std::size_t line_offset = 0;  // file line of the delimiter
  std::size_t occurrences = 0;
};

}  // namespace

GradeReport grade_submission(const ProblemManifest& manifest, std::string_view file,
                             std::string student_id) {
  GradeReport report;
  report.student_id = std::move(student_id);

  std::map<std::string, const QuestionSpec*> declared;
  for (const auto& p : manifest.problems)
    for (const auto& q : p.questions) declared[key_of(p, q)] = &q;

  auto zero_rows = [&] {
    for (const auto& p : manifest.problems)
      for (const auto& q : p.questions) {
        QuestionReport row;
        row.key = key_of(p, q);
        row.max_points = q.max_points;
        report.questions.push_back(std::move(row));
      }
  };

  if (!valid_utf8(file)) {
    report.flags.insert(std::string(flags::kUnreadable));
    report.diagnostics.push_back(flag_note(flags::kUnreadable, "the file is not valid UTF-8"));
    zero_rows();
    report.review_required = true;
    return report;
  }
  file = strip_bom(file);

  static const std::regex delimiter(R"(^--\s*problem\s+([^\s.]+)\.(\S+)\s*$)");
  std::map<std::string, Section> sections;
  std::vector<std::string> unknown;
  Section* current = nullptr;
  Section discard;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < file.size()) {
    std::size_t end = file.find('\n', start);
    if (end == std::string_view::npos) end = file.size();
    std::string line(file.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::smatch m;
    if (std::regex_match(line, m, delimiter)) {
      std::string key = m[1].str() + "." + m[2].str();
      if (!declared.count(key)) {
        unknown.push_back(key);
        current = &discard;
        continue;
      }
      Section& s = sections[key];
      ++s.occurrences;
      s.text.clear();
      s.line_offset = line_no;
      current = &s;
      continue;
    }
    if (current) current->text += line + "\n";
  }

  for (const auto& key : unknown) {
    report.flags.insert(std::string(flags::kUnknownSection));
    report.diagnostics.push_back(
        flag_note(flags::kUnknownSection, "section '" + key + "' is not a question of this exam"));
  }

  for (const auto& p : manifest.problems) {
    for (const auto& q : p.questions) {
      const std::string key = key_of(p, q);
      auto it = sections.find(key);
      QuestionReport row;
      if (it == sections.end()) {
        row.max_points = q.max_points;
        row.flags.insert(std::string(flags::kMissing));
        row.diagnostics.push_back(
            flag_note(flags::kMissing, "no section '-- problem " + key + "' in the submission"));
      } else {
        row = grade_question(q, it->second.text, manifest.scoring, it->second.line_offset);
        if (it->second.occurrences > 1) {
          row.flags.insert(std::string(flags::kDuplicateSection));
          row.diagnostics.push_back(flag_note(
              flags::kDuplicateSection,
              "section '" + key + "' appears " + std::to_string(it->second.occurrences) +
                  " times; the last one was graded"));
        }
      }
      row.key = key;
      report.questions.push_back(std::move(row));
    }
  }

  report.total = weighted_total(manifest, report.questions);
  report.review_required = !report.flags.empty();
  for (const auto& row : report.questions)
    if (!row.flags.empty()) report.review_required = true;
  return report;
}

std::string format_points(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

nlohmann::ordered_json to_json(const GradeReport& report) {
  nlohmann::ordered_json j;
  j["student_id"] = report.student_id;
  j["total"] = report.total;
  j["review_required"] = report.review_required;
  j["flags"] = std::vector<std::string>(report.flags.begin(), report.flags.end());
  j["diagnostics"] = nlohmann::ordered_json::array();
  for (const auto& d : report.diagnostics) j["diagnostics"].push_back(diagnostic_json(d));
  j["questions"] = nlohmann::ordered_json::array();
  for (const auto& q : report.questions) {
    nlohmann::ordered_json row;
    row["key"] = q.key;
    row["points"] = q.points;
    row["max_points"] = q.max_points;
    row["breakdown"] = {{"parse", q.breakdown.parse},
                        {"branches", q.breakdown.branches},
                        {"complete", q.breakdown.complete},
                        {"style_deduction", q.breakdown.style_deduction}};
    row["flags"] = std::vector<std::string>(q.flags.begin(), q.flags.end());
    row["diagnostics"] = nlohmann::ordered_json::array();
    for (const auto& d : q.diagnostics) row["diagnostics"].push_back(diagnostic_json(d));
    j["questions"].push_back(std::move(row));
  }
  return j;
}

std::string summary_csv(const ProblemManifest& manifest, const std::vector<GradeReport>& reports) {
  std::ostringstream os;
  os << "student_id";
  for (const auto& p : manifest.problems)
    for (const auto& q : p.questions) os << ',' << csv_field(key_of(p, q));
  os << ",total,review_required\n";

  std::vector<const GradeReport*> sorted;
  for (const auto& r : reports) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](auto* a, auto* b) { return a->student_id < b->student_id; });
  for (const GradeReport* r : sorted) {
    os << csv_field(r->student_id);
    for (const auto& q : r->questions) os << ',' << format_points(q.points);
    os << ',' << format_points(r->total) << ',' << (r->review_required ? "true" : "false")
       << '\n';
  }
  return os.str();
}

BatchResult grade_batch(const ProblemManifest& manifest, const fs::path& submissions,
                        const fs::path& out, std::size_t jobs) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(submissions))
    if (entry.is_regular_file() && entry.path().extension() == ".sqc")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.stem() < b.stem(); });

  BatchResult result;
  result.reports.resize(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < files.size(); k = next++) {
      std::ifstream in(files[k], std::ios::binary);
      std::string id = files[k].stem().string();
      if (!in) {
        GradeReport r = grade_submission(manifest, "\xFF", id);  // forces UNREADABLE
        r.diagnostics.back().message = "the file could not be read";
        result.reports[k] = std::move(r);
        continue;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      result.reports[k] = grade_submission(manifest, buf.str(), id);
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, std::max<std::size_t>(files.size(), 1)));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  result.csv = summary_csv(manifest, result.reports);

  fs::create_directories(out / "reports");
  for (const auto& r : result.reports) {
    std::ofstream json_out(out / "reports" / (r.student_id + ".json"), std::ios::binary);
    json_out << to_json(r).dump(2) << '\n';
  }
  std::ofstream csv_out(out / "summary.csv", std::ios::binary);
  csv_out << result.csv;
  return result;
}

}  // namespace sqc
