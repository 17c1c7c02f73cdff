#ifndef NOK_ERRORS_HPP
#define NOK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nok {

// Invalid kernel/energy/solver parameters (bad alpha range, delta out of
// (0,pi], omega outside (0,1/2], ...).
class ParameterDomainError : public std::invalid_argument {
public:
  explicit ParameterDomainError(const std::string& msg)
      : std::invalid_argument(msg) {}
};

// A mode with lambda = 0 showed up where its inverse is required.
class SingularModeError : public std::runtime_error {
public:
  explicit SingularModeError(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Time stepping produced non-finite values.
class DivergenceError : public std::runtime_error {
public:
  explicit DivergenceError(const std::string& msg)
      : std::runtime_error(msg) {}
};

// A cross-check that must hold by construction failed (bisection bracket,
// analytic vs finite-difference derivative, sweep monotonicity).
class InternalConsistencyError : public std::logic_error {
public:
  explicit InternalConsistencyError(const std::string& msg)
      : std::logic_error(msg) {}
};

}  // namespace nok

#endif
