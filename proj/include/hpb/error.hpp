#pragma once

#include <stdexcept>
#include <string>

namespace hpb {

enum class ErrorKind {
  Dimension,   // operator/Hilbert-space shape mismatch
  Domain,      // parameter outside the valid domain of an operation
  Config,      // malformed configuration or CLI input
  Singular,    // linear system singular or too ill-conditioned to trust
  Positivity,  // density matrix violates positivity beyond roundoff
  Timeout,     // time integration did not reach its tolerance
  Undefined,   // observable undefined at this point (e.g. g2 with a dark cavity)
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Numerical failures map to a different CLI exit code than usage errors.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::Singular || kind_ == ErrorKind::Positivity ||
           kind_ == ErrorKind::Timeout || kind_ == ErrorKind::Undefined;
  }

 private:
  ErrorKind kind_;
};

}  // namespace hpb
