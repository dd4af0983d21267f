#pragma once

#include "curvedborn/geometry.hpp"
#include "curvedborn/quadrature.hpp"

#include <functional>
#include <string>
#include <vector>

namespace curvedborn {

/// Embedding of a rectangular parameter box into the chart.
///
/// The box has dimension d-1; `grid` is the coarse quadrature resolution,
/// which integrals refine once for their error estimate.
struct ParametrizedHypersurface {
  std::string name;
  std::function<Vec(const Vec&)> embed;
  /// Optional d x (d-1) Jacobian; central differences are used when empty.
  std::function<Mat(const Vec&)> jacobian;
  ParamBox box;
  std::vector<int> grid;
  int orientation = 1;
  /// The box is a cut-off of an unbounded surface; integrals report the
  /// integrand mass at the cut as a truncation estimate.
  bool truncated = false;
};

void validate(const ParametrizedHypersurface& h);

struct TangentFrame {
  Vec point;
  /// Columns are the tangent vectors d(phi)/du^i.
  Mat basis;
};

/// Throws DegenerateImmersion when the columns are (numerically) dependent.
void check_immersion(const TangentFrame& frame);

TangentFrame tangent_frame(const ParametrizedHypersurface& h, const Vec& u);

/// Entries -g(d_i phi, d_j phi).
Mat pullback_metric(const Spacetime& st, const TangentFrame& frame);
Mat pullback_metric(const Spacetime& st, const ParametrizedHypersurface& h, const Vec& u);

/// Classification of the tangent space. Basis vectors are rescaled to unit
/// coordinate length first, which leaves the inertia of the pullback unchanged.
CausalCharacter surface_causal_class(const Spacetime& st, const TangentFrame& frame);
CausalCharacter surface_causal_class(const Spacetime& st, const ParametrizedHypersurface& h, const Vec& u);

/// sqrt det(-iota^* g); throws NotSpacelike off spacelike nodes.
double induced_volume_density(const Spacetime& st, const TangentFrame& frame);

using SurfaceScalar = std::function<double(const TangentFrame&)>;

/// Frames of a surface on the coarse and refined grids of one parameter rectangle.
struct SampledSurface {
  Grid coarse;
  Grid fine;
  std::vector<TangentFrame> coarse_frames;
  std::vector<TangentFrame> fine_frames;
  /// Fine nodes adjacent to a truncation cut of the parent box.
  std::vector<char> fine_at_cut;
};

SampledSurface sample_surface(const ParametrizedHypersurface& h, const ParamBox& rect);
inline SampledSurface sample_surface(const ParametrizedHypersurface& h) { return sample_surface(h, h.box); }

/// Marks the fine nodes of `s` that touch a face of `parent`.
void mark_truncation_cut(SampledSurface& s, const ParamBox& parent);

/// Midpoint + Richardson over a sampled surface.
IntegralResult integrate_sampled(const SampledSurface& s, const SurfaceScalar& integrand);

/// Integral of f * nu, nu the volume form of -iota^* g.
IntegralResult induced_volume_integral(const Spacetime& st, const ParametrizedHypersurface& h, const SurfaceScalar& f);

// Built-in surfaces. Parameters are Cartesian spatial coordinates unless noted.

/// t = t0 slice over [-half_width, half_width]^(dim-1); marked truncated.
ParametrizedHypersurface time_slice(int dim, double t0, double half_width, int resolution);

/// Disk of the given radius in the t = t0 plane of a 3-chart, parameters (r, theta).
/// The radial interval starts at 1e-6 * radius to avoid the polar coordinate singularity.
ParametrizedHypersurface disk_polar(double radius, int n_r, int n_theta, double t0 = 0.0);

/// Same disk over (s, b) in [-pi/2, pi/2] x [-1, 1] with x = R sin s, y = b R cos s.
ParametrizedHypersurface disk_cartesian(double radius, int resolution, double t0 = 0.0);

/// (slope * x, x, y) over `box`.
ParametrizedHypersurface tilted_plane(double slope, const ParamBox& box, int resolution);

/// Graph t = height(x) over a spatial box of dimension d-1.
ParametrizedHypersurface graph_surface(std::string name, ScalarFn height, const ParamBox& box, int resolution,
                                       bool truncated);

}  // namespace curvedborn
