#pragma once

#include <stdexcept>
#include <string>

namespace nc {

enum class ErrorCode {
  NonFinite,
  Budget,
  Stiff,
  NoBracket,
  NotNull,
  NotFuture,
  BadProfile,
  OutsideDomain,
  NotOnBoundary,
  DegenerateGradient,
  LostSurface,
  IllConditioned,
  Mismatch,
  NotTransverse,
  InconsistentHolonomy,
  NotMonotone,
  NotSupported,
  InvalidArgument,
  Parse,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure in the core library is reported through this type; the C API
// maps the code onto its status enum.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace nc
