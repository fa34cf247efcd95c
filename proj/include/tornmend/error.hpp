#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tornmend {

enum class ErrorCode {
  MalformedFile,
  UnsupportedFormat,
  InvalidArgument,
  EmptyMask,
  EmptyBoundary,
  DegenerateBoundary,
  NoText,
  InvalidThresholds,
  ZeroLengthChain,
  NoCandidate,
  PlacementOutOfRange,
  TextOverflow,
  InvalidSpec,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tornmend
