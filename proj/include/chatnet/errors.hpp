#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chatnet {

// Comparison tolerance shared by every module unless a caller overrides it.
inline constexpr double kTolerance = 1e-9;

enum class ErrorKind {
  kRangeViolation,
  kOrderingViolation,
  kDomainError,
  kEmptySupport,
  kEmptyPeers,
  kInvalidGame,
  kIncompatibleBelief,
  kInvalidTree,
  kInvalidGraph,
  kInstanceTooLarge,
};

std::string_view to_string(ErrorKind kind);

// Raised on contract violations by the model layer. The kind mirrors the
// error names used in the scenario diagnostics.
class ModelError : public std::invalid_argument {
 public:
  ModelError(ErrorKind kind, const std::string& what)
      : std::invalid_argument(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chatnet
