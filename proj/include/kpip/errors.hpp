#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kpip {

enum class ErrorCode {
  InvalidArgument,
  InvalidRotation,
  AsymmetricAdjacency,
  NotPlanarEmbedding,
  Disconnected,
  NotIncident,
  NotTriangle,
  InsufficientComplementPairs,
  SchemaError,
  FNotInComplement,
  StructureMismatch,
  CrossingCoordinates,
  MissingCoordinates,
  InvalidRoute,
  InvalidRealization,
  NotTriangulation,
  KNotOne,
  SearchSpaceTooLarge,
  InvalidFormula,
  LayoutInfeasible,
  AssignmentDoesNotSatisfy,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidRotation: return "InvalidRotation";
    case ErrorCode::AsymmetricAdjacency: return "AsymmetricAdjacency";
    case ErrorCode::NotPlanarEmbedding: return "NotPlanarEmbedding";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NotIncident: return "NotIncident";
    case ErrorCode::NotTriangle: return "NotTriangle";
    case ErrorCode::InsufficientComplementPairs: return "InsufficientComplementPairs";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::FNotInComplement: return "FNotInComplement";
    case ErrorCode::StructureMismatch: return "StructureMismatch";
    case ErrorCode::CrossingCoordinates: return "CrossingCoordinates";
    case ErrorCode::MissingCoordinates: return "MissingCoordinates";
    case ErrorCode::InvalidRoute: return "InvalidRoute";
    case ErrorCode::InvalidRealization: return "InvalidRealization";
    case ErrorCode::NotTriangulation: return "NotTriangulation";
    case ErrorCode::KNotOne: return "KNotOne";
    case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorCode::InvalidFormula: return "InvalidFormula";
    case ErrorCode::LayoutInfeasible: return "LayoutInfeasible";
    case ErrorCode::AssignmentDoesNotSatisfy: return "AssignmentDoesNotSatisfy";
  }
  return "Unknown";
}

/// All recoverable failures in the library surface as this exception; `code()`
/// tells callers (and the CLI) which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

inline void require(bool cond, ErrorCode code, const std::string& detail) {
  if (!cond) fail(code, detail);
}

}  // namespace kpip
