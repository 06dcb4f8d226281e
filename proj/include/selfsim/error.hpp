#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace selfsim {

enum class ErrorKind {
  Parse,
  PoleAtBeta,
  PoleHit,
  DepthTooSmall,
  MissingLabel,
  LevelTooLarge,
  NotSymmetric,
  RadiusTooSmall,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::PoleAtBeta: return "PoleAtBeta";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::DepthTooSmall: return "DepthTooSmall";
    case ErrorKind::MissingLabel: return "MissingLabel";
    case ErrorKind::LevelTooLarge: return "LevelTooLarge";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace selfsim
