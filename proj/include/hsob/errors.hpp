#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hsob {

/// Raised when two independent computations of the same quantity disagree.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the gradient solvers when the iteration budget runs out.
/// Carries the best feasible iterate found so far.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> best_feasible)
      : std::runtime_error(what), best_feasible_(std::move(best_feasible)) {}

  const std::vector<double>& best_feasible() const noexcept { return best_feasible_; }

 private:
  std::vector<double> best_feasible_;
};

}  // namespace hsob
