#pragma once

#include <memory>
#include <string>

#include "skyfleet/config.hpp"
#include "skyfleet/env.hpp"

namespace skyfleet {

/// Line-delimited JSON session over one environment. Every request line gets
/// exactly one reply line; malformed or invalid requests produce an
/// {"error": ...} object and leave the session usable.
class ServeSession {
 public:
  explicit ServeSession(ScenarioConfig config);

  std::string handle_line(const std::string& line);
  bool closed() const { return closed_; }

 private:
  ScenarioConfig config_;
  std::unique_ptr<Env> env_;
  int epoch_ = 0;
  bool epoch_done_ = false;
  bool closed_ = false;
};

/// Reads requests from stdin until "close" or EOF.
int run_serve_loop(ServeSession& session);

}  // namespace skyfleet
