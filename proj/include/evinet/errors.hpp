#pragma once

#include <stdexcept>
#include <string>

namespace evinet {

// Tolerance for contract checks (mass sums, stopping comparisons, oracles).
inline constexpr double kContractTol = 1e-9;
// Tolerance for algebraic identities (commutativity, neutral elements).
inline constexpr double kAlgebraTol = 1e-12;
// Masses below this after a combination are pruned and folded into the
// full frame to keep sparse maps clean.
inline constexpr double kMassDust = 1e-12;

enum class Errc {
  EmptyFocalSet,
  FrameMismatch,
  UnknownState,
  InvalidFrame,
  InvalidMass,
  TotalConflict,
  EmptyList,
  DuplicateId,
  DuplicateHypothesis,
  CycleDetected,
  DegreeCapExceeded,
  IncompleteConditionalTable,
  TypeConstraint,
  UnalignableVariables,
  ProviderFailure,
  FixtureMiss,
  MalformedElicitation,
  OverAllocatedMass,
  UnsupportedTopology,
  UnknownVariable,
  AlreadyAsked,
  NotObservable,
  UnrecognizedAnswer,
  EmptyDataset,
  InvalidConfig,
  ParseError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::EmptyFocalSet: return "EmptyFocalSet";
    case Errc::FrameMismatch: return "FrameMismatch";
    case Errc::UnknownState: return "UnknownState";
    case Errc::InvalidFrame: return "InvalidFrame";
    case Errc::InvalidMass: return "InvalidMass";
    case Errc::TotalConflict: return "TotalConflict";
    case Errc::EmptyList: return "EmptyList";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::DuplicateHypothesis: return "DuplicateHypothesis";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::DegreeCapExceeded: return "DegreeCapExceeded";
    case Errc::IncompleteConditionalTable: return "IncompleteConditionalTable";
    case Errc::TypeConstraint: return "TypeConstraint";
    case Errc::UnalignableVariables: return "UnalignableVariables";
    case Errc::ProviderFailure: return "ProviderFailure";
    case Errc::FixtureMiss: return "FixtureMiss";
    case Errc::MalformedElicitation: return "MalformedElicitation";
    case Errc::OverAllocatedMass: return "OverAllocatedMass";
    case Errc::UnsupportedTopology: return "UnsupportedTopology";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::AlreadyAsked: return "AlreadyAsked";
    case Errc::NotObservable: return "NotObservable";
    case Errc::UnrecognizedAnswer: return "UnrecognizedAnswer";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ParseError: return "ParseError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace evinet
