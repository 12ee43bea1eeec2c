#pragma once

#include <stdexcept>
#include <string>

namespace infoplan {

enum class ErrorCode {
  InvalidArgument,  // bad input values, AP mismatch, malformed config
  Parse,            // formula syntax / undeclared atom / negated non-atom
  Infeasible,       // no accepting run reachable (W(x0) is infinite)
  InconsistentReport,
  Internal,         // an invariant that should be unreachable was violated
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error(ErrorCode::Parse, "at position " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace infoplan
