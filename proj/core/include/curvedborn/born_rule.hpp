#pragma once

#include "curvedborn/geometry.hpp"
#include "curvedborn/hypersurface.hpp"

#include <cstddef>
#include <vector>

namespace curvedborn {

/// The (d-1)-form J . mu: the current inserted into the metric volume form.
struct ContractedCurrentForm {
  Spacetime spacetime;
  VectorField current;

  /// sqrt|det g(p)| * det[J(p) | V_1 | ... | V_{d-1}] in chart orientation.
  double operator()(const Vec& p, const Mat& frame) const;
};

double contracted_form_eval(const ContractedCurrentForm& form, const Vec& p, const Mat& frame);

/// Union of non-overlapping sub-rectangles of a parameter box.
struct RegionSpec {
  std::vector<ParamBox> rects;

  static RegionSpec full(const ParametrizedHypersurface& h) { return RegionSpec{{h.box}}; }
};

void validate(const RegionSpec& region, const ParamBox& box);

/// Scale below which |J . mu| on a frame counts as tangency:
/// kTangency * sqrt|g| * |J| * prod |V_i|.
double tangency_threshold(const ContractedCurrentForm& form, const Vec& p, const Mat& frame);

/// +1 or -1 such that `sign * J.mu` is nonnegative at the anchor node
/// (box centre, or the first non-tangent coarse node), times h.orientation.
int orientation_sign(const ContractedCurrentForm& form, const ParametrizedHypersurface& h);

/// Same convention for a frame already evaluated at the anchor.
int orientation_sign(const ContractedCurrentForm& form, const TangentFrame& anchor, int orientation);

/// sign * integral of iota^*(J . mu) over a sampled rectangle.
IntegralResult integrate_form(const ContractedCurrentForm& form, const SampledSurface& s, int sign);

/// P(A) = integral over A of iota^*(J . mu). No causal assumption on the surface.
IntegralResult born_probability(const Spacetime& st, const VectorField& current, const ParametrizedHypersurface& h,
                                const RegionSpec& region);
IntegralResult born_probability(const Spacetime& st, const VectorField& current, const ParametrizedHypersurface& h);

/// Future-directed unit normal of a spacelike tangent space: the time axis
/// e_0 made g-orthogonal to the frame, then normalized.
Vec unit_normal(const Spacetime& st, const TangentFrame& frame);

struct SpacelikeIdentityReport {
  /// integral of g(J, n) nu
  IntegralResult lhs;
  /// integral of iota^*(J . mu)
  IntegralResult rhs;
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  /// Largest relative pointwise integrand difference over fine nodes with |integrand| > 1e-12.
  double max_pointwise_rel_diff = 0.0;
  std::size_t compared_nodes = 0;
};

SpacelikeIdentityReport verify_spacelike_identity(const Spacetime& st, const VectorField& current,
                                                  const ParametrizedHypersurface& h, const RegionSpec& region);

struct PositivityReport {
  Grid grid;
  int sign = 1;
  /// sign * J.mu at each coarse node.
  std::vector<double> oriented_values;
  std::vector<std::size_t> tangent_nodes;
  std::vector<std::size_t> negative_nodes;
};

/// Flags coarse nodes where the surface is tangent to J, and nodes with a
/// negative oriented integrand.
PositivityReport positivity_check(const Spacetime& st, const VectorField& current, const ParametrizedHypersurface& h);

}  // namespace curvedborn
