#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsclust {

enum class ErrorCode {
  FrameMismatch,
  TotalConflict,
  Domain,
  DegenerateStart,
  Parse,
  Io,
};

constexpr std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::FrameMismatch: return "frame-mismatch";
    case ErrorCode::TotalConflict: return "total-conflict";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::DegenerateStart: return "degenerate-start";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dsclust
