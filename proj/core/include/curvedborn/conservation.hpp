#pragma once

#include "curvedborn/born_rule.hpp"
#include "curvedborn/currents.hpp"
#include "curvedborn/flow.hpp"

#include <optional>
#include <span>
#include <vector>

namespace curvedborn {

/// How a surface is carried along tau in the conservation checks.
struct FlowOptions {
  Integrator integrator = Integrator::AnalyticIfAvailable;
  /// RK4 step; <= 0 selects default_rk4_step over the tau grid.
  double step = 0.0;
  /// Flow field; defaults to the current's velocity X.
  std::optional<VectorField> field;
};

struct ConservationReport {
  std::vector<double> tau;
  std::vector<double> totals;
  std::vector<double> error_estimates;
  /// |P(tau) - P(tau_0)| for sweeps; |dP/dtau - source| for Reynolds checks.
  std::vector<double> residuals;
  std::vector<double> derivatives;
  std::vector<double> sources;
  double max_drift = 0.0;
  double max_residual = 0.0;
  double max_error_estimate = 0.0;
};

/// dy/dx by three-point formulas on a possibly non-uniform grid; one-sided
/// second-order stencils at the endpoints.
std::vector<double> three_point_derivative(std::span<const double> x, std::span<const double> y);

/// P(tau) over Sigma_tau = Phi_tau(Sigma_0) for each tau in the grid.
ConservationReport conservation_sweep(const Spacetime& st, const CurrentSpec& c, const ParametrizedHypersurface& h,
                                      std::span<const double> tau_grid, const FlowOptions& options = {});

/// Compares dP/dtau (three-point differences of P over the tau grid) with the
/// surface integral of div(rho X) X.mu, Sigma_tau evolved along X.
ConservationReport reynolds_check(const Spacetime& st, const CurrentSpec& c, const ParametrizedHypersurface& h,
                                  std::span<const double> tau_grid, const FlowOptions& options = {});

/// Region swept by a base surface between two flow times.
struct FlowCylinder {
  ParametrizedHypersurface base;
  FlowMap flow;
  double tau0 = 0.0;
  double tau1 = 1.0;
  int tau_resolution = 16;
};

/// One lateral face of the cylinder: parameters (tau, remaining u), embedding
/// Phi_tau(base(u with u[axis] fixed at the lower or upper bound)).
ParametrizedHypersurface tube_face(const FlowCylinder& cyl, int axis, bool upper);

struct DivergenceTheoremReport {
  /// integral of g(J, n) nu over each cap
  IntegralResult cap0;
  IntegralResult cap1;
  double cap_difference = 0.0;
  /// The same caps through iota^*(J . mu), signed P(tau1) - P(tau0).
  double born_cap_difference = 0.0;
  /// Outward flux through the lateral faces, oriented so that
  /// born_cap_difference + tube_flux = 0 for divergence-free J.
  double tube_flux = 0.0;
  double tube_error = 0.0;
  double stokes_residual = 0.0;
  double error_budget = 0.0;
};

DivergenceTheoremReport divergence_theorem_check(const Spacetime& st, const VectorField& current,
                                                 const FlowCylinder& cyl);

}  // namespace curvedborn
