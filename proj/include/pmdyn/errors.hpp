#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pmdyn {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  Domain,
  ModeMismatch,
  BoundaryHit,
  InadmissiblePrefix,
  BudgetExceeded,
  NoCycle,
  NonConvergence,
  NotStronglyConnected,
  BrokenPath,
  NoFixedPoint,
  NoPeriodicOrbits,
  NoPath,
  InadmissibleJunction,
  SpreadZero,
  EntropyShortfall,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  /// Position payload for BoundaryHit, InadmissiblePrefix, BrokenPath and
  /// parse errors (line number).
  std::optional<std::size_t> index() const noexcept { return index_; }

private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace pmdyn
