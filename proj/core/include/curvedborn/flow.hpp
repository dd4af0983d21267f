#pragma once

#include "curvedborn/geometry.hpp"
#include "curvedborn/hypersurface.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace curvedborn {

enum class Integrator { AnalyticIfAvailable, RK4 };

/// Flow of a vector field, either from its closed form or by fixed-step RK4.
struct FlowMap {
  VectorField field;
  Integrator integrator = Integrator::AnalyticIfAvailable;
  double step = 1e-3;
  /// flow_point compares against a half-step run; <= 0 disables the check.
  double self_check_tolerance = 1e-6;
  /// Chart domain; empty means all finite points.
  std::function<bool(const Vec&)> in_domain;

  bool analytic() const { return integrator == Integrator::AnalyticIfAvailable && field.has_flow(); }
};

/// Default RK4 step for integrations up to |tau_max|.
inline double default_rk4_step(double tau_max) { return 1e-3 * (1.0 + std::abs(tau_max)); }

/// Classical RK4 with `steps` equal steps; the state sum is Kahan-compensated so
/// long integrations do not accumulate round-off in large coordinates.
Vec rk4_integrate(const VectorField& field, const Vec& p, double tau, long steps);

/// Phi_tau(p). RK4 results are checked against a half-step run
/// (StepSizeTooLarge) and for leaving the chart (LeftChartDomain).
Vec flow_point(const FlowMap& fm, const Vec& p, double tau);

/// Moves every point from flow time tau_from to tau_to, without the half-step check.
void advance(const FlowMap& fm, std::span<Vec> points, double tau_from, double tau_to);

/// Sigma_tau = Phi_tau(Sigma_0), sharing the base's box, grid and orientation.
struct EvolvedSurface {
  ParametrizedHypersurface base;
  FlowMap flow;
  double tau = 0.0;

  /// Embedding Phi_tau o base.embed; tangents by differentiating it.
  ParametrizedHypersurface surface() const;
};

/// Checks the flow at every coarse grid node (half-step check at the box centre).
EvolvedSurface evolve_surface(const FlowMap& fm, const ParametrizedHypersurface& h, double tau);

/// Finite-difference stencils of a surface's grid nodes, carried along a flow.
///
/// Frames at the current flow time equal those of EvolvedSurface::surface()
/// (same stencil steps); carrying the stencil points lets RK4 sweeps over an
/// increasing tau grid integrate each point only once.
class SurfaceEvolution {
 public:
  SurfaceEvolution(const ParametrizedHypersurface& base, FlowMap flow, std::vector<Grid> grids);

  void advance_to(double tau);
  double tau() const { return tau_; }

  std::vector<TangentFrame> frames(std::size_t grid) const;
  TangentFrame anchor_frame() const;
  const Grid& grid(std::size_t i) const { return grids_[i]; }
  std::size_t grid_count() const { return grids_.size(); }

  /// Pairs grids[coarse] with grids[fine] as a SampledSurface.
  SampledSurface sampled(std::size_t coarse, std::size_t fine) const;

  /// Coarse and refined grids for each rectangle, in that order.
  static std::vector<Grid> quadrature_grids(const ParametrizedHypersurface& h, const std::vector<ParamBox>& rects);

 private:
  TangentFrame frame_at(std::size_t stencil) const;

  ParametrizedHypersurface base_;
  FlowMap flow_;
  std::vector<Grid> grids_;
  std::vector<std::size_t> offsets_;  // first stencil of each grid; last entry is the anchor
  int param_dim_ = 0;
  std::vector<Vec> initial_;
  std::vector<Vec> points_;
  std::vector<double> steps_;
  double tau_ = 0.0;
};

/// First flow time in (0, tau_max] at which the pushed-forward tangent
/// direction `direction` at parameter `u` becomes lightlike, or nullopt.
///
/// The direction is transported by a fourth-order difference of the evolved
/// embedding; roots are bracketed on tolerance::kBracketSamples uniform samples
/// and refined by bisection to well below tolerance::kRoot.
std::optional<double> lightlike_crossing(const Spacetime& st, const FlowMap& fm, const ParametrizedHypersurface& h,
                                         const Vec& u, const Vec& direction, double tau_max);

struct SweepRow {
  std::size_t node = 0;
  Vec param;
  double tau = 0.0;
  Vec point;
  CausalCharacter character = CausalCharacter::Spacelike;
};

/// Causal character of every coarse grid node at every tau in `tau_grid`.
std::vector<SweepRow> causal_sweep(const Spacetime& st, const FlowMap& fm, const ParametrizedHypersurface& h,
                                   std::span<const double> tau_grid);

}  // namespace curvedborn
