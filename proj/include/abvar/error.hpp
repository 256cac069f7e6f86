#pragma once

#include <stdexcept>
#include <string>

namespace abvar {

/// Failure categories surfaced by the library. The CLI maps them onto stable exit codes.
enum class ErrorKind {
  Parse,
  InvalidArgument,
  EmbeddingAmbiguous,
  NotSymmetric,
  NotPositiveDefinite,
  NoSolution,
  Inconsistent,
  RankMismatch,
  DegenerateForm,
  ZeroImage,
  NonIntegral,
  NotClosed,
  NotStable,
  NotSymplectic,
  Eq4Violated,
  NotIdempotent,
  DegenerateRank,
  RankDeficiency,
  NotInSiegel,
  FieldMismatch,
  SizeGate,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace abvar
