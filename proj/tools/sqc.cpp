// Command-line front end: check, prove, countermodel, grade, serve.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sqc/calculus.hpp"
#include "sqc/grader.hpp"
#include "sqc/prover.hpp"
#include "sqc/script.hpp"
#include "sqc/semantics.hpp"
#include "sqc/service.hpp"

namespace {

// `check` exit codes.
constexpr int kComplete = 0;
constexpr int kIncomplete = 1;
constexpr int kInvalid = 2;
constexpr int kParseError = 3;

void print_block(const char* label, const std::string& text) {
  std::cerr << "  " << label << ":\n";
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) std::cerr << "    " << line << "\n";
}

void print_diagnostics(const std::string& where, const std::vector<sqc::Diagnostic>& diags) {
  for (const auto& d : diags) {
    std::cerr << where;
    if (d.location.known()) std::cerr << ":" << d.location.line << ":" << d.location.col;
    std::cerr << ": " << sqc::to_string(d.severity) << "[" << d.code << "]: " << d.message << "\n";
    if (d.expected) print_block("expected", *d.expected);
    if (d.got) print_block("got", *d.got);
  }
}

std::optional<sqc::Formula> parse_or_report(const std::string& text) {
  auto parsed = sqc::parse_formula(text);
  if (auto* f = std::get_if<sqc::Formula>(&parsed)) return *f;
  print_diagnostics("<formula>", std::get<std::vector<sqc::Diagnostic>>(parsed));
  return std::nullopt;
}

int run_check(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << path << ": cannot read file\n";
    return kParseError;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  sqc::ParseOutcome parsed = sqc::parse_script(buf.str());
  if (!parsed.ok()) {
    print_diagnostics(path, parsed.diagnostics);
    std::cout << "parse error\n";
    return kParseError;
  }
  const auto& script = *parsed.script;
  sqc::Verdict v = sqc::check_script(script.goal, script.steps);
  switch (v.status) {
    case sqc::Verdict::Status::Complete:
      std::cout << "complete (" << script.steps.size() << " steps)\n";
      return kComplete;
    case sqc::Verdict::Status::Incomplete:
      std::cout << "incomplete: " << v.open_goals.size() << " open goal(s)\n";
      for (const auto& g : v.open_goals) std::cout << "  " << sqc::print_sequent(g) << "\n";
      return kIncomplete;
    case sqc::Verdict::Status::Invalid:
      print_diagnostics(path, v.diagnostics);
      std::cout << "invalid at step " << v.step_index + 1 << "\n";
      return kInvalid;
  }
  return kInvalid;
}

int run_prove(const std::string& text, const sqc::Limits& limits) {
  auto f = parse_or_report(text);
  if (!f) return kParseError;
  auto result = sqc::prove_bounded(*f, limits);
  if (auto* script = std::get_if<sqc::ProofScript>(&result)) {
    std::cout << sqc::print_script(*script);
    return 0;
  }
  const auto& gave_up = std::get<sqc::GaveUp>(result);
  std::cerr << "gave up (" << sqc::to_string(gave_up.bound) << "): " << gave_up.reason << "\n";
  return 1;
}

int run_countermodel(const std::string& text, const sqc::Limits& limits) {
  auto f = parse_or_report(text);
  if (!f) return kParseError;
  try {
    auto result = sqc::check_validity(*f, limits);
    if (auto* cm = std::get_if<sqc::Countermodel>(&result)) {
      std::cout << "countermodel:\n" << sqc::describe(cm->model);
      return 0;
    }
    std::cout << "no countermodel with domain size up to "
              << std::get<sqc::ValidUpTo>(result).domain_size << "\n";
    return 1;
  } catch (const sqc::EnumerationTooLarge& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}

int run_grade(const std::string& manifest_path, const std::string& submissions,
              const std::string& out, std::size_t jobs) {
  try {
    auto manifest = sqc::load_manifest_file(manifest_path);
    auto result = sqc::grade_batch(manifest, submissions, out, jobs);
    std::size_t review = 0;
    for (const auto& r : result.reports) review += r.review_required ? 1 : 0;
    std::cout << "graded " << result.reports.size() << " submission(s), " << review
              << " flagged for review\n";
    return 0;
  } catch (const sqc::ManifestError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequent-calculus proof checker, prover and exam grader"};
  app.require_subcommand(1);

  std::string check_file;
  auto* check = app.add_subcommand("check", "Check a .sqc proof script");
  check->add_option("file", check_file, "Script file")->required();

  std::string formula;
  sqc::Limits prove_limits;
  auto* prove = app.add_subcommand("prove", "Search for a proof of a formula");
  prove->add_option("formula", formula, "Formula text")->required();
  prove->add_option("--gamma-depth", prove_limits.gamma_depth, "Maximum Herbrand term depth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  prove->add_option("--max-steps", prove_limits.max_steps, "Maximum script length")
      ->capture_default_str();

  sqc::Limits model_limits;
  auto* counter = app.add_subcommand("countermodel", "Search for a finite countermodel");
  counter->add_option("formula", formula, "Formula text")->required();
  counter->add_option("--max-domain", model_limits.max_domain, "Largest domain size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  counter->add_option("--ceiling", model_limits.enumeration_ceiling,
                      "Refuse searches larger than this many interpretations")
      ->capture_default_str();

  std::string manifest, submissions, out;
  std::size_t jobs = 1;
  auto* grade = app.add_subcommand("grade", "Grade a directory of submissions");
  grade->add_option("--manifest", manifest, "Exam manifest (JSON)")->required();
  grade->add_option("--submissions", submissions, "Directory of .sqc files")->required();
  grade->add_option("--out", out, "Output directory")->required();
  grade->add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);

  std::string addr = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the JSON check endpoint");
  serve->add_option("--port", port, "Port")->capture_default_str();
  serve->add_option("--addr", addr, "Bind address")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*check) return run_check(check_file);
  if (*prove) return run_prove(formula, prove_limits);
  if (*counter) return run_countermodel(formula, model_limits);
  if (*grade) return run_grade(manifest, submissions, out, jobs);
  if (*serve) {
    sqc::CheckServer server(addr, port);
    std::cerr << "listening on " << addr << ":" << port << "\n";
    if (!server.listen()) {
      std::cerr << "cannot listen on " << addr << ":" << port << "\n";
      return 1;
    }
    return 0;
  }
  return 0;
}
