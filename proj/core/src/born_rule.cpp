#include "curvedborn/born_rule.hpp"

#include <algorithm>
#include <cmath>

namespace curvedborn {

double ContractedCurrentForm::operator()(const Vec& p, const Mat& frame) const {
  const int d = spacetime.dim;
  if (frame.rows() != d || frame.cols() != d - 1) {
    throw Error(ErrorKind::InvalidArgument, "contracted form needs d-1 vectors of length d");
  }
  Mat columns(d, d);
  columns.col(0) = current(p);
  columns.rightCols(d - 1) = frame;
  return volume_density(spacetime, p) * columns.determinant();
}

double contracted_form_eval(const ContractedCurrentForm& form, const Vec& p, const Mat& frame) {
  return form(p, frame);
}

void validate(const RegionSpec& region, const ParamBox& box) {
  for (std::size_t i = 0; i < region.rects.size(); ++i) {
    validate(region.rects[i]);
    if (!box.contains(region.rects[i])) {
      throw Error(ErrorKind::InvalidArgument, "region rectangle " + std::to_string(i) + " leaves the parameter box");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (region.rects[i].overlaps(region.rects[j])) {
        throw Error(ErrorKind::InvalidArgument,
                    "region rectangles " + std::to_string(j) + " and " + std::to_string(i) + " overlap");
      }
    }
  }
}

double tangency_threshold(const ContractedCurrentForm& form, const Vec& p, const Mat& frame) {
  double scale = volume_density(form.spacetime, p) * form.current(p).norm();
  for (Eigen::Index i = 0; i < frame.cols(); ++i) scale *= frame.col(i).norm();
  return tolerance::kTangency * scale;
}

int orientation_sign(const ContractedCurrentForm& form, const TangentFrame& anchor, int orientation) {
  const double value = form(anchor.point, anchor.basis);
  if (std::abs(value) <= tangency_threshold(form, anchor.point, anchor.basis)) return 0;
  return (value >= 0.0 ? 1 : -1) * orientation;
}

int orientation_sign(const ContractedCurrentForm& form, const ParametrizedHypersurface& h) {
  validate(h);
  if (int s = orientation_sign(form, tangent_frame(h, h.box.center()), h.orientation); s != 0) return s;
  const Grid grid{h.box, h.grid};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (int s = orientation_sign(form, tangent_frame(h, grid.node(i)), h.orientation); s != 0) return s;
  }
  return h.orientation;  // tangent everywhere: the integrand vanishes anyway
}

IntegralResult integrate_form(const ContractedCurrentForm& form, const SampledSurface& s, int sign) {
  return integrate_sampled(s, [&](const TangentFrame& f) { return sign * form(f.point, f.basis); });
}

IntegralResult born_probability(const Spacetime& st, const VectorField& current, const ParametrizedHypersurface& h,
                                const RegionSpec& region) {
  validate(h);
  validate(region, h.box);
  const ContractedCurrentForm form{st, current};
  IntegralResult total;
  if (region.rects.empty()) return total;
  const int sign = orientation_sign(form, h);
  for (const ParamBox& rect : region.rects) total += integrate_form(form, sample_surface(h, rect), sign);
  return total;
}

IntegralResult born_probability(const Spacetime& st, const VectorField& current, const ParametrizedHypersurface& h) {
  return born_probability(st, current, h, RegionSpec::full(h));
}

Vec unit_normal(const Spacetime& st, const TangentFrame& frame) {
  const int d = st.dim;
  const Mat g = metric_at(st, frame.point);
  Vec e0 = Vec::Zero(d);
  e0[0] = 1.0;
  const Mat gram = frame.basis.transpose() * g * frame.basis;
  const Vec coupling = frame.basis.transpose() * (g * e0);
  const Vec n = e0 - frame.basis * gram.ldlt().solve(coupling);
  return normalize_timelike(st, frame.point, n);
}

SpacelikeIdentityReport verify_spacelike_identity(const Spacetime& st, const VectorField& current,
                                                  const ParametrizedHypersurface& h, const RegionSpec& region) {
  validate(h);
  validate(region, h.box);
  const ContractedCurrentForm form{st, current};
  const int sign = orientation_sign(form, h);

  auto lhs_density = [&](const TangentFrame& f) {
    const double nu = induced_volume_density(st, f);
    return inner(st, f.point, current(f.point), unit_normal(st, f)) * nu;
  };
  auto rhs_density = [&](const TangentFrame& f) { return sign * form(f.point, f.basis); };

  SpacelikeIdentityReport report;
  for (const ParamBox& rect : region.rects) {
    const SampledSurface s = sample_surface(h, rect);
    report.lhs += integrate_sampled(s, lhs_density);
    report.rhs += integrate_sampled(s, rhs_density);
    for (const TangentFrame& f : s.fine_frames) {
      const double l = lhs_density(f), r = rhs_density(f);
      if (std::abs(r) <= 1e-12) continue;
      report.max_pointwise_rel_diff = std::max(report.max_pointwise_rel_diff, std::abs(l - r) / std::abs(r));
      ++report.compared_nodes;
    }
  }
  report.abs_diff = std::abs(report.lhs.value - report.rhs.value);
  const double scale = std::max(std::abs(report.lhs.value), std::abs(report.rhs.value));
  report.rel_diff = scale > 0.0 ? report.abs_diff / scale : 0.0;
  return report;
}

PositivityReport positivity_check(const Spacetime& st, const VectorField& current, const ParametrizedHypersurface& h) {
  validate(h);
  const ContractedCurrentForm form{st, current};
  PositivityReport report;
  report.grid = Grid{h.box, h.grid};
  report.sign = orientation_sign(form, h);
  report.oriented_values.resize(report.grid.size());
  for (std::size_t i = 0; i < report.grid.size(); ++i) {
    const TangentFrame f = tangent_frame(h, report.grid.node(i));
    const double v = report.sign * form(f.point, f.basis);
    report.oriented_values[i] = v;
    if (std::abs(v) <= tangency_threshold(form, f.point, f.basis)) {
      report.tangent_nodes.push_back(i);
    } else if (v < 0.0) {
      report.negative_nodes.push_back(i);
    }
  }
  return report;
}

}  // namespace curvedborn
