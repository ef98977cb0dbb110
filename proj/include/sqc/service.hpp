#pragma once

// Stateless JSON check endpoint used by the editor front-end.
//
//   POST /v1/check   {"script_text": "...", "mode": "full" | "prefix"}
//   POST /v1/parse   {"formula": "..."}
//   GET  /v1/health  -> {"status": "ok"}
//
// The handlers below are pure functions of the request so the same schema can
// be served by an embedded build of the core.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqc/diagnostic.hpp"

namespace sqc {

inline constexpr std::size_t kDefaultSizeLimit = 256 * 1024;

struct CheckRequest {
  enum class Mode { Full, Prefix };

  std::string script_text;
  Mode mode = Mode::Full;
};

struct OpenGoalView {
  std::size_t branch = 0;
  std::string sequent;                // "a, b"
  std::vector<std::string> formulas;  // one printed formula per entry
};

struct CheckResponse {
  std::string status;  // complete | incomplete | invalid | parse_error
  std::vector<OpenGoalView> open_goals;
  std::vector<Diagnostic> diagnostics;
  std::vector<std::string> applicable;
  std::size_t steps_validated = 0;
};

CheckResponse handle_check(const CheckRequest& req, std::size_t size_limit = kDefaultSizeLimit);

nlohmann::json to_json(const Diagnostic& d);
nlohmann::json to_json(const CheckResponse& resp);

// Throws std::invalid_argument on a malformed body.
CheckRequest check_request_from_json(const nlohmann::json& body);

// {"status": "ok" | "parse_error", "formula": canonical text, "diagnostics": [...]}
nlohmann::json handle_parse(const std::string& formula);

struct HttpReply {
  int status = 200;
  std::string body;
};

// Transport-independent dispatch; used by the HTTP server and by tests.
HttpReply dispatch(const std::string& method, const std::string& path, const std::string& body,
                   std::size_t size_limit = kDefaultSizeLimit);

class CheckServer {
 public:
  CheckServer(std::string addr, int port, std::size_t size_limit = kDefaultSizeLimit);
  ~CheckServer();
  CheckServer(const CheckServer&) = delete;
  CheckServer& operator=(const CheckServer&) = delete;

  // Binds and serves on a background thread; returns the bound port.
  int start();
  // Binds and serves on the calling thread until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sqc
