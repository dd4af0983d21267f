#include "curvedborn/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace curvedborn {

void validate(const ParametrizedHypersurface& h) {
  validate(h.box);
  if (!h.embed) throw Error(ErrorKind::InvalidArgument, "surface '" + h.name + "' has no embedding");
  if (static_cast<int>(h.grid.size()) != h.box.dim()) {
    throw Error(ErrorKind::InvalidArgument, "surface '" + h.name + "' grid rank does not match its box");
  }
  for (int n : h.grid) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "surface '" + h.name + "' grid entries must be >= 2");
  }
  if (h.orientation != 1 && h.orientation != -1) {
    throw Error(ErrorKind::InvalidArgument, "surface orientation must be +1 or -1");
  }
}

void check_immersion(const TangentFrame& frame) {
  Mat unit = frame.basis;
  for (Eigen::Index i = 0; i < unit.cols(); ++i) {
    const double len = unit.col(i).norm();
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw Error(ErrorKind::DegenerateImmersion, "tangent vector " + std::to_string(i) + " vanishes");
    }
    unit.col(i) /= len;
  }
  const Mat gram = unit.transpose() * unit;
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < 1e-10) {
    throw Error(ErrorKind::DegenerateImmersion, "tangent vectors are linearly dependent");
  }
}

TangentFrame tangent_frame(const ParametrizedHypersurface& h, const Vec& u) {
  const int n = h.box.dim();
  if (u.size() != n) throw Error(ErrorKind::InvalidArgument, "parameter has wrong length");

  TangentFrame frame;
  frame.point = h.embed(u);
  if (h.jacobian) {
    frame.basis = h.jacobian(u);
  } else {
    frame.basis.resize(frame.point.size(), n);
    for (int i = 0; i < n; ++i) {
      const double step = fd_step(u[i]);
      Vec plus = u, minus = u;
      plus[i] += step;
      minus[i] -= step;
      frame.basis.col(i) = (h.embed(plus) - h.embed(minus)) / (2.0 * step);
    }
  }
  if (frame.basis.cols() != n || frame.basis.rows() != frame.point.size() || !frame.basis.allFinite()) {
    throw Error(ErrorKind::DegenerateImmersion, "surface '" + h.name + "' has an invalid tangent frame");
  }
  check_immersion(frame);
  return frame;
}

Mat pullback_metric(const Spacetime& st, const TangentFrame& frame) {
  const Mat g = metric_at(st, frame.point);
  return -(frame.basis.transpose() * g * frame.basis);
}

Mat pullback_metric(const Spacetime& st, const ParametrizedHypersurface& h, const Vec& u) {
  return pullback_metric(st, tangent_frame(h, u));
}

CausalCharacter surface_causal_class(const Spacetime& st, const TangentFrame& frame) {
  TangentFrame unit = frame;
  for (Eigen::Index i = 0; i < unit.basis.cols(); ++i) unit.basis.col(i).normalize();
  Eigen::SelfAdjointEigenSolver<Mat> eig(pullback_metric(st, unit), Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  if (ev.minCoeff() > tolerance::kCausal) return CausalCharacter::Spacelike;
  if (ev.minCoeff() < -tolerance::kCausal) return CausalCharacter::Timelike;
  int near_zero = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) near_zero += std::abs(ev[i]) <= tolerance::kCausal ? 1 : 0;
  // A Lorentzian tangent space holds at most one null direction.
  return near_zero == 1 ? CausalCharacter::Lightlike : CausalCharacter::Degenerate;
}

CausalCharacter surface_causal_class(const Spacetime& st, const ParametrizedHypersurface& h, const Vec& u) {
  return surface_causal_class(st, tangent_frame(h, u));
}

double induced_volume_density(const Spacetime& st, const TangentFrame& frame) {
  const CausalCharacter c = surface_causal_class(st, frame);
  if (c != CausalCharacter::Spacelike) {
    throw Error(ErrorKind::NotSpacelike,
                "tangent space is " + std::string(to_string(c)) + "; the induced volume form is undefined");
  }
  return std::sqrt(pullback_metric(st, frame).determinant());
}

SampledSurface sample_surface(const ParametrizedHypersurface& h, const ParamBox& rect) {
  validate(h);
  validate(rect);
  if (!h.box.contains(rect)) throw Error(ErrorKind::InvalidArgument, "sub-rectangle leaves the parameter box");

  SampledSurface s;
  s.coarse = Grid{rect, scaled_shape(h.box, h.grid, rect)};
  s.fine = refined(s.coarse);
  auto frames = [&h](const Grid& g) {
    std::vector<TangentFrame> out;
    out.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out.push_back(tangent_frame(h, g.node(i)));
    return out;
  };
  s.coarse_frames = frames(s.coarse);
  s.fine_frames = frames(s.fine);
  if (h.truncated) mark_truncation_cut(s, h.box);
  return s;
}

void mark_truncation_cut(SampledSurface& s, const ParamBox& parent) {
  s.fine_at_cut.assign(s.fine.size(), 0);
  const auto& g = s.fine;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec u = g.node(i);
    for (int k = 0; k < g.box.dim(); ++k) {
      const double cell = (g.box.hi[k] - g.box.lo[k]) / g.shape[k];
      if (u[k] - parent.lo[k] < cell || parent.hi[k] - u[k] < cell) {
        s.fine_at_cut[i] = 1;
        break;
      }
    }
  }
}

IntegralResult integrate_sampled(const SampledSurface& s, const SurfaceScalar& integrand) {
  std::vector<double> coarse(s.coarse_frames.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = integrand(s.coarse_frames[i]);
  std::vector<double> fine(s.fine_frames.size());
  for (std::size_t i = 0; i < fine.size(); ++i) fine[i] = integrand(s.fine_frames[i]);

  IntegralResult r = richardson(midpoint_sum(s.coarse, coarse), midpoint_sum(s.fine, fine));
  r.nodes = coarse.size() + fine.size();
  if (!s.fine_at_cut.empty()) {
    double edge = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
      if (s.fine_at_cut[i]) edge = std::max(edge, std::abs(fine[i]));
    }
    r.truncation_estimate = edge * s.fine.box.volume();
  }
  return r;
}

IntegralResult induced_volume_integral(const Spacetime& st, const ParametrizedHypersurface& h, const SurfaceScalar& f) {
  const SampledSurface s = sample_surface(h);
  return integrate_sampled(s, [&](const TangentFrame& fr) {
    const double nu = induced_volume_density(st, fr);  // NotSpacelike before f sees the frame
    return f(fr) * nu;
  });
}

ParametrizedHypersurface time_slice(int dim, double t0, double half_width, int resolution) {
  const int n = dim - 1;
  ParametrizedHypersurface h;
  h.name = "time_slice";
  h.box.lo = Vec::Constant(n, -half_width);
  h.box.hi = Vec::Constant(n, half_width);
  h.grid.assign(static_cast<std::size_t>(n), resolution);
  h.truncated = true;
  h.embed = [t0, dim](const Vec& u) {
    Vec p(dim);
    p[0] = t0;
    p.tail(dim - 1) = u;
    return p;
  };
  h.jacobian = [dim](const Vec&) {
    Mat j = Mat::Zero(dim, dim - 1);
    j.bottomRows(dim - 1).setIdentity();
    return j;
  };
  return h;
}

ParametrizedHypersurface disk_polar(double radius, int n_r, int n_theta, double t0) {
  ParametrizedHypersurface h;
  h.name = "disk_polar";
  h.box.lo = make_vec({1e-6 * radius, 0.0});
  h.box.hi = make_vec({radius, 2.0 * std::numbers::pi});
  h.grid = {n_r, n_theta};
  h.embed = [t0](const Vec& u) { return make_vec({t0, u[0] * std::cos(u[1]), u[0] * std::sin(u[1])}); };
  h.jacobian = [](const Vec& u) {
    Mat j(3, 2);
    j << 0.0, 0.0, std::cos(u[1]), -u[0] * std::sin(u[1]), std::sin(u[1]), u[0] * std::cos(u[1]);
    return j;
  };
  return h;
}

ParametrizedHypersurface disk_cartesian(double radius, int resolution, double t0) {
  ParametrizedHypersurface h;
  h.name = "disk_cartesian";
  h.box.lo = make_vec({-std::numbers::pi / 2.0, -1.0});
  h.box.hi = make_vec({std::numbers::pi / 2.0, 1.0});
  h.grid = {resolution, resolution};
  h.embed = [t0, radius](const Vec& u) {
    return make_vec({t0, radius * std::sin(u[0]), u[1] * radius * std::cos(u[0])});
  };
  h.jacobian = [radius](const Vec& u) {
    Mat j(3, 2);
    j << 0.0, 0.0, radius * std::cos(u[0]), 0.0, -u[1] * radius * std::sin(u[0]), radius * std::cos(u[0]);
    return j;
  };
  return h;
}

ParametrizedHypersurface tilted_plane(double slope, const ParamBox& box, int resolution) {
  ParametrizedHypersurface h;
  h.name = "tilted_plane";
  h.box = box;
  h.grid = {resolution, resolution};
  h.embed = [slope](const Vec& u) { return make_vec({slope * u[0], u[0], u[1]}); };
  h.jacobian = [slope](const Vec&) {
    Mat j(3, 2);
    j << slope, 0.0, 1.0, 0.0, 0.0, 1.0;
    return j;
  };
  return h;
}

ParametrizedHypersurface graph_surface(std::string name, ScalarFn height, const ParamBox& box, int resolution,
                                       bool truncated) {
  const int n = box.dim();
  ParametrizedHypersurface h;
  h.name = std::move(name);
  h.box = box;
  h.grid.assign(static_cast<std::size_t>(n), resolution);
  h.truncated = truncated;
  h.embed = [height = std::move(height), n](const Vec& u) {
    Vec p(n + 1);
    p[0] = height(u);
    p.tail(n) = u;
    return p;
  };
  return h;
}

}  // namespace curvedborn
