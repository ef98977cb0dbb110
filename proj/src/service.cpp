#include "sqc/service.hpp"

#include <stdexcept>
#include <thread>

#include <httplib.h>

#include "sqc/calculus.hpp"
#include "sqc/script.hpp"

namespace sqc {

namespace {

OpenGoalView view_of(const Goal& g) {
  OpenGoalView v;
  v.branch = g.branch;
  v.sequent = print_sequent(g.sequent);
  for (const auto& f : g.sequent) v.formulas.push_back(print_formula(f));
  return v;
}

void report_state(CheckResponse& resp, const ProofState& state) {
  for (const auto& g : state.open_goals) resp.open_goals.push_back(view_of(g));
  if (!state.open_goals.empty() && !state.open_goals.front().sequent.empty())
    for (Rule r : applicable_rules(state.open_goals.front().sequent))
      resp.applicable.emplace_back(rule_name(r));
  else if (!state.open_goals.empty())
    resp.applicable.emplace_back(rule_name(Rule::Ext));
}

nlohmann::json error_body(std::string_view code, const std::string& message) {
  Diagnostic d;
  d.code = std::string(code);
  d.message = message;
  return {{"diagnostics", nlohmann::json::array({to_json(d)})}};
}

}  // namespace

CheckResponse handle_check(const CheckRequest& req, std::size_t size_limit) {
  CheckResponse resp;
  if (req.script_text.size() > size_limit) {
    resp.status = "parse_error";
    Diagnostic d;
    d.code = std::string(codes::kBodyTooLarge);
    d.message = "script is " + std::to_string(req.script_text.size()) +
                " bytes; the limit is " + std::to_string(size_limit);
    resp.diagnostics.push_back(std::move(d));
    return resp;
  }

  ParseOutcome parsed = parse_script(req.script_text);
  resp.diagnostics = parsed.diagnostics;
  const bool prefix = req.mode == CheckRequest::Mode::Prefix;
  if (!parsed.script || (parsed.recovered && !prefix)) {
    resp.status = "parse_error";
    return resp;
  }

  const ProofScript& script = *parsed.script;
  std::span<const RuleApplication> steps(script.steps.data(), script.clean_prefix);
  Trace trace = check_trace(script.goal, steps);
  resp.steps_validated = trace.steps_validated;
  resp.diagnostics.insert(resp.diagnostics.end(), trace.diagnostics.begin(),
                          trace.diagnostics.end());

  if (trace.failed_step || parsed.recovered) {
    resp.status = "invalid";
    if (prefix) report_state(resp, trace.state);
    return resp;
  }
  resp.status = trace.state.open_goals.empty() ? "complete" : "incomplete";
  report_state(resp, trace.state);
  return resp;
}

nlohmann::json to_json(const Diagnostic& d) {
  nlohmann::json j = {
      {"code", d.code},
      {"severity", to_string(d.severity)},
      {"message", d.message},
      {"line", d.location.line},
      {"col", d.location.col},
  };
  if (d.expected) j["expected"] = *d.expected;
  if (d.got) j["got"] = *d.got;
  return j;
}

nlohmann::json to_json(const CheckResponse& resp) {
  nlohmann::json goals = nlohmann::json::array();
  for (const auto& g : resp.open_goals)
    goals.push_back({{"branch", g.branch}, {"sequent", g.sequent}, {"formulas", g.formulas}});
  nlohmann::json diags = nlohmann::json::array();
  for (const auto& d : resp.diagnostics) diags.push_back(to_json(d));
  return {
      {"status", resp.status},
      {"open_goals", goals},
      {"diagnostics", diags},
      {"applicable", resp.applicable},
      {"steps_validated", resp.steps_validated},
  };
}

CheckRequest check_request_from_json(const nlohmann::json& body) {
  if (!body.is_object()) throw std::invalid_argument("request body must be a JSON object");
  if (!body.contains("script_text") || !body.at("script_text").is_string())
    throw std::invalid_argument("'script_text' must be a string");
  CheckRequest req;
  req.script_text = body.at("script_text").get<std::string>();
  if (body.contains("mode")) {
    const auto& mode = body.at("mode");
    if (mode == "full")
      req.mode = CheckRequest::Mode::Full;
    else if (mode == "prefix")
      req.mode = CheckRequest::Mode::Prefix;
    else
      throw std::invalid_argument("'mode' must be \"full\" or \"prefix\"");
  }
  return req;
}

nlohmann::json handle_parse(const std::string& formula) {
  auto parsed = parse_formula(formula);
  nlohmann::json diags = nlohmann::json::array();
  if (auto* f = std::get_if<Formula>(&parsed))
    return {{"status", "ok"}, {"formula", print_formula(*f)}, {"diagnostics", diags}};
  for (const auto& d : std::get<std::vector<Diagnostic>>(parsed)) diags.push_back(to_json(d));
  return {{"status", "parse_error"}, {"formula", nullptr}, {"diagnostics", diags}};
}

HttpReply dispatch(const std::string& method, const std::string& path, const std::string& body,
                   std::size_t size_limit) {
  if (path == "/v1/health") {
    if (method != "GET") return {405, error_body(codes::kBadRequest, "use GET").dump()};
    return {200, nlohmann::json{{"status", "ok"}}.dump()};
  }
  if (path != "/v1/check" && path != "/v1/parse")
    return {404, error_body(codes::kBadRequest, "unknown endpoint " + path).dump()};
  if (method != "POST") return {405, error_body(codes::kBadRequest, "use POST").dump()};

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    return {400, error_body(codes::kBadRequest, std::string("malformed JSON: ") + e.what()).dump()};
  }

  if (path == "/v1/parse") {
    if (!j.is_object() || !j.contains("formula") || !j.at("formula").is_string())
      return {400, error_body(codes::kBadRequest, "'formula' must be a string").dump()};
    const auto& text = j.at("formula").get_ref<const std::string&>();
    if (text.size() > size_limit)
      return {400, error_body(codes::kBodyTooLarge, "formula exceeds the size limit").dump()};
    return {200, handle_parse(text).dump()};
  }

  CheckRequest req;
  try {
    req = check_request_from_json(j);
  } catch (const std::invalid_argument& e) {
    return {400, error_body(codes::kBadRequest, e.what()).dump()};
  }
  CheckResponse resp = handle_check(req, size_limit);
  const bool too_large = !resp.diagnostics.empty() &&
                         resp.diagnostics.front().code == codes::kBodyTooLarge;
  return {too_large ? 400 : 200, to_json(resp).dump()};
}

struct CheckServer::Impl {
  std::string addr;
  int port;
  std::size_t size_limit;
  httplib::Server server;
  std::thread thread;

  void routes() {
    // Room for the JSON envelope and escaping around a maximal script.
    server.set_payload_max_length(size_limit * 8 + 4096);
    auto handle = [this](const httplib::Request& req, httplib::Response& res) {
      HttpReply reply = dispatch(req.method, req.path, req.body, size_limit);
      res.status = reply.status;
      res.set_content(reply.body, "application/json");
    };
    server.Get("/v1/health", handle);
    server.Post("/v1/check", handle);
    server.Post("/v1/parse", handle);
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                    std::exception_ptr) {
      res.status = 500;
      res.set_content(error_body(codes::kBadRequest, "internal error").dump(),
                      "application/json");
    });
  }
};

CheckServer::CheckServer(std::string addr, int port, std::size_t size_limit)
    : impl_(std::make_unique<Impl>()) {
  impl_->addr = std::move(addr);
  impl_->port = port;
  impl_->size_limit = size_limit;
  impl_->routes();
}

CheckServer::~CheckServer() { stop(); }

int CheckServer::start() {
  int port = impl_->port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(impl_->addr);
  } else if (!impl_->server.bind_to_port(impl_->addr, port)) {
    return -1;
  }
  if (port < 0) return -1;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

bool CheckServer::listen() { return impl_->server.listen(impl_->addr, impl_->port); }

void CheckServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace sqc
