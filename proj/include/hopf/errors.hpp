#pragma once

#include <stdexcept>
#include <string>

namespace hopf {

/// Machine-readable failure categories surfaced through the CLI and reports.
enum class ErrorCode {
  NOT_HAMILTONIAN,
  DEGENERATE_FORM,
  CLUSTER_AMBIGUOUS,
  NOT_RESONANT,
  H1_VIOLATION,
  H3_VIOLATION,
  H4_VIOLATION,
  BLOCK_STRUCTURE_VIOLATION,
  FIT_RESIDUAL_EXCEEDED,
  HOMOLOGICAL_RESIDUAL,
  RHO_SINGULAR,
  NEWTON_DIVERGED,
  NO_ROOT,
  DEGENERATE_COEFFICIENTS,
  CONDITION_VIOLATED,
  RANK_DEFICIENT,
  PARITY_VIOLATION,
  NOETHER_VIOLATION,
  SECTION_DEGENERATE,
  NONCONVERGENT,
  SCHEMA_ERROR,
  INVALID_ARGUMENT,
};

const char* to_string(ErrorCode code);

/// Exception carrying a typed code plus a human-readable diagnostic.
class HopfError : public std::runtime_error {
 public:
  HopfError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

  /// True for failures of the structural hypotheses the theory requires
  /// (used by the CLI to distinguish exit status 2 from internal errors).
  bool is_hypothesis_failure() const {
    switch (code_) {
      case ErrorCode::H1_VIOLATION:
      case ErrorCode::H3_VIOLATION:
      case ErrorCode::H4_VIOLATION:
      case ErrorCode::NOT_RESONANT:
      case ErrorCode::DEGENERATE_COEFFICIENTS:
      case ErrorCode::CONDITION_VIOLATED:
      case ErrorCode::RANK_DEFICIENT:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace hopf
