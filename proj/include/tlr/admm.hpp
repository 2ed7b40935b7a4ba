#pragma once

// Shared ADMM machinery: penalty schedule settings and the per-run report.

#include <cstdint>
#include <vector>

namespace tlr {

/// Penalty schedule and stopping rule shared by every ADMM solver. The
/// penalty starts at mu0 and grows by rho per iteration up to mu_max. A run
/// stops once every constraint residual and every change in the primal
/// variables is at most tol in max-norm.
struct SolverConfig {
  double mu0 = 1e-3;
  double rho = 1.1;
  double mu_max = 1e10;
  double tol = 1e-7;
  int max_iter = 500;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct SolverReport {
  int iterations = 0;
  /// Max-norm of the constraint residuals after each iteration.
  std::vector<double> residuals;
  /// Model objective after each iteration, evaluated at the feasible point
  /// derived from the current iterate.
  std::vector<double> objectives;
  double objective = 0.0;
  bool converged = false;
};

namespace detail {

/// Bookkeeping for one ADMM run.
class AdmmLoop {
public:
  explicit AdmmLoop(const SolverConfig &cfg);

  double mu() const { return mu_; }
  bool done() const;
  /// Records an iteration and advances the penalty. Returns true when the
  /// stopping rule is met.
  bool step(double residual, double change, double objective);
  SolverReport finish() &&;

private:
  SolverConfig cfg_;
  double mu_;
  SolverReport report_;
};

} // namespace detail
} // namespace tlr
