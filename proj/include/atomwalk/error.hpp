#pragma once

#include <stdexcept>
#include <string>

namespace atomwalk {

/// Library error carrying a stable machine-readable code (e.g. "step-underflow")
/// alongside the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace atomwalk
