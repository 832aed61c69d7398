#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exforge {

/// Malformed textual input (graph files, constructor strings).
class parse_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A requested object would exceed the configured vertex budget.
class budget_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// No admissible construction exists for the requested parameters.
class planning_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An eigensolver stopped without reaching its residual target.
class convergence_error : public std::runtime_error {
public:
  convergence_error(const std::string& what, double residual, std::size_t iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

private:
  double residual_;
  std::size_t iterations_;
};

} // namespace exforge
