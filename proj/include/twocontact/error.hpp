#pragma once

#include <stdexcept>
#include <string>

namespace twocontact {

enum class ErrorKind {
  InvalidConfiguration,
  DegenerateGeometry,
  SingularMode,
  NoConsistentImpact,
  PainleveEncountered,
  EventStall,
  EventBudgetExceeded,
  UnclassifiableEndpoint,
  SolverFailure,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace twocontact
