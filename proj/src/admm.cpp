#include "tlr/admm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tlr {

void SolverConfig::validate() const {
  if (!(mu0 > 0) || !std::isfinite(mu0))
    throw std::invalid_argument("SolverConfig: mu0 must be positive");
  if (!(rho >= 1) || !std::isfinite(rho))
    throw std::invalid_argument("SolverConfig: rho must be >= 1");
  if (!(mu_max >= mu0) || !std::isfinite(mu_max))
    throw std::invalid_argument("SolverConfig: mu_max must be >= mu0");
  if (!(tol > 0))
    throw std::invalid_argument("SolverConfig: tol must be positive");
  if (max_iter < 1)
    throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
}

namespace detail {

AdmmLoop::AdmmLoop(const SolverConfig &cfg) : cfg_(cfg), mu_(cfg.mu0) {
  cfg_.validate();
  report_.residuals.reserve(static_cast<std::size_t>(cfg_.max_iter));
  report_.objectives.reserve(static_cast<std::size_t>(cfg_.max_iter));
}

bool AdmmLoop::done() const {
  return report_.converged || report_.iterations >= cfg_.max_iter;
}

bool AdmmLoop::step(double residual, double change, double objective) {
  ++report_.iterations;
  report_.residuals.push_back(residual);
  report_.objectives.push_back(objective);
  report_.objective = objective;
  if (residual <= cfg_.tol && change <= cfg_.tol)
    report_.converged = true;
  mu_ = std::min(cfg_.rho * mu_, cfg_.mu_max);
  return report_.converged;
}

SolverReport AdmmLoop::finish() && { return std::move(report_); }

} // namespace detail
} // namespace tlr
