#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pfw {

enum class Errc {
  NotDyadic,
  NotExpansive,
  Inconclusive,
  Overflow,
  DimensionMismatch,
  DimensionTooSmall,
  NotInAZd,
  NotSubset,
  NotOneDimensional,
  OutOfDomain,
  WindowTooLarge,
  DomainMismatch,
  LevelBudgetExceeded,
  InvalidInput,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NotDyadic: return "NotDyadic";
    case Errc::NotExpansive: return "NotExpansive";
    case Errc::Inconclusive: return "Inconclusive";
    case Errc::Overflow: return "Overflow";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DimensionTooSmall: return "DimensionTooSmall";
    case Errc::NotInAZd: return "NotInAZd";
    case Errc::NotSubset: return "NotSubset";
    case Errc::NotOneDimensional: return "NotOneDimensional";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::WindowTooLarge: return "WindowTooLarge";
    case Errc::DomainMismatch: return "DomainMismatch";
    case Errc::LevelBudgetExceeded: return "LevelBudgetExceeded";
    case Errc::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Library-wide exception. `code()` identifies the failure class so callers
/// (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pfw
