#include "curvedborn/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curvedborn {

namespace {

bool inside(const FlowMap& fm, const Vec& p) { return p.allFinite() && (!fm.in_domain || fm.in_domain(p)); }

long steps_for(double span, double step) {
  if (span == 0.0) return 0;
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "RK4 step must be positive");
  return std::max(1L, static_cast<long>(std::ceil(std::abs(span) / step - 1e-12)));
}

Vec integrate(const FlowMap& fm, const Vec& p, double tau) {
  if (tau == 0.0) return p;
  if (fm.analytic()) return fm.field.flow(tau, p);
  return rk4_integrate(fm.field, p, tau, steps_for(tau, fm.step));
}

}  // namespace

Vec rk4_integrate(const VectorField& field, const Vec& p, double tau, long steps) {
  if (steps <= 0 || tau == 0.0) return p;
  const double h = tau / static_cast<double>(steps);
  Vec y = p;
  Vec carry = Vec::Zero(p.size());
  for (long s = 0; s < steps; ++s) {
    const Vec k1 = field(y);
    const Vec k2 = field(y + 0.5 * h * k1);
    const Vec k3 = field(y + 0.5 * h * k2);
    const Vec k4 = field(y + h * k3);
    const Vec increment = (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4) - carry;
    const Vec next = y + increment;
    carry = (next - y) - increment;
    y = next;
    if (!y.allFinite()) throw Error(ErrorKind::LeftChartDomain, "RK4 state became non-finite");
  }
  return y;
}

Vec flow_point(const FlowMap& fm, const Vec& p, double tau) {
  if (!inside(fm, p)) throw Error(ErrorKind::LeftChartDomain, "start point outside chart domain");
  if (tau == 0.0) return p;
  if (fm.analytic()) {
    Vec q = fm.field.flow(tau, p);
    if (!inside(fm, q)) throw Error(ErrorKind::LeftChartDomain, "flow left the chart domain");
    return q;
  }
  const long n = steps_for(tau, fm.step);
  Vec q = rk4_integrate(fm.field, p, tau, n);
  if (!inside(fm, q)) throw Error(ErrorKind::LeftChartDomain, "flow left the chart domain");
  if (fm.self_check_tolerance > 0.0) {
    const Vec half = rk4_integrate(fm.field, p, tau, 2 * n);
    const double diff = (half - q).norm();
    if (diff > fm.self_check_tolerance * (1.0 + q.norm())) {
      throw Error(ErrorKind::StepSizeTooLarge,
                  "RK4 step " + std::to_string(fm.step) + " disagrees with half step by " + std::to_string(diff));
    }
  }
  return q;
}

void advance(const FlowMap& fm, std::span<Vec> points, double tau_from, double tau_to) {
  const double span = tau_to - tau_from;
  if (span == 0.0) return;
  for (Vec& p : points) {
    p = integrate(fm, p, span);
    if (!inside(fm, p)) throw Error(ErrorKind::LeftChartDomain, "flow left the chart domain");
  }
}

ParametrizedHypersurface EvolvedSurface::surface() const {
  ParametrizedHypersurface h = base;
  h.name = base.name + "@tau";
  h.jacobian = nullptr;
  h.embed = [embed = base.embed, fm = flow, tau = tau](const Vec& u) {
    const Vec p = embed(u);
    if (!inside(fm, p)) throw Error(ErrorKind::LeftChartDomain, "surface point outside chart domain");
    Vec q = integrate(fm, p, tau);
    if (!inside(fm, q)) throw Error(ErrorKind::LeftChartDomain, "flow left the chart domain");
    return q;
  };
  return h;
}

EvolvedSurface evolve_surface(const FlowMap& fm, const ParametrizedHypersurface& h, double tau) {
  validate(h);
  EvolvedSurface e{h, fm, tau};
  (void)flow_point(fm, h.embed(h.box.center()), tau);
  const Grid grid{h.box, h.grid};
  FlowMap unchecked = fm;
  unchecked.self_check_tolerance = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) (void)flow_point(unchecked, h.embed(grid.node(i)), tau);
  return e;
}

SurfaceEvolution::SurfaceEvolution(const ParametrizedHypersurface& base, FlowMap flow, std::vector<Grid> grids)
    : base_(base), flow_(std::move(flow)), grids_(std::move(grids)), param_dim_(base.box.dim()) {
  validate(base_);
  const std::size_t width = static_cast<std::size_t>(2 * param_dim_ + 1);
  auto add_stencil = [&](const Vec& u) {
    initial_.push_back(base_.embed(u));
    for (int i = 0; i < param_dim_; ++i) {
      const double step = fd_step(u[i]);
      Vec plus = u, minus = u;
      plus[i] += step;
      minus[i] -= step;
      initial_.push_back(base_.embed(plus));
      initial_.push_back(base_.embed(minus));
      steps_.push_back(step);
    }
  };
  for (const Grid& g : grids_) {
    offsets_.push_back(initial_.size() / width);
    for (std::size_t i = 0; i < g.size(); ++i) add_stencil(g.node(i));
  }
  offsets_.push_back(initial_.size() / width);
  add_stencil(base_.box.center());
  for (const Vec& p : initial_) {
    if (!inside(flow_, p)) throw Error(ErrorKind::LeftChartDomain, "surface point outside chart domain");
  }
  points_ = initial_;
}

void SurfaceEvolution::advance_to(double tau) {
  if (tau == tau_) return;
  if (flow_.analytic()) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      points_[i] = flow_.field.flow(tau, initial_[i]);
      if (!inside(flow_, points_[i])) throw Error(ErrorKind::LeftChartDomain, "flow left the chart domain");
    }
  } else {
    // Half-step check on the anchor point only; the rest share its step.
    if (flow_.self_check_tolerance > 0.0) {
      const std::size_t anchor = offsets_.back() * static_cast<std::size_t>(2 * param_dim_ + 1);
      FlowMap checked = flow_;
      (void)flow_point(checked, points_[anchor], tau - tau_);
    }
    advance(flow_, points_, tau_, tau);
  }
  tau_ = tau;
}

TangentFrame SurfaceEvolution::frame_at(std::size_t stencil) const {
  const std::size_t width = static_cast<std::size_t>(2 * param_dim_ + 1);
  const std::size_t base = stencil * width;
  TangentFrame f;
  f.point = points_[base];
  f.basis.resize(f.point.size(), param_dim_);
  for (int i = 0; i < param_dim_; ++i) {
    const double step = steps_[stencil * static_cast<std::size_t>(param_dim_) + static_cast<std::size_t>(i)];
    f.basis.col(i) = (points_[base + 1 + 2 * i] - points_[base + 2 + 2 * i]) / (2.0 * step);
  }
  check_immersion(f);
  return f;
}

std::vector<TangentFrame> SurfaceEvolution::frames(std::size_t grid) const {
  std::vector<TangentFrame> out;
  out.reserve(grids_.at(grid).size());
  for (std::size_t i = 0; i < grids_[grid].size(); ++i) out.push_back(frame_at(offsets_[grid] + i));
  return out;
}

TangentFrame SurfaceEvolution::anchor_frame() const { return frame_at(offsets_.back()); }

SampledSurface SurfaceEvolution::sampled(std::size_t coarse, std::size_t fine) const {
  SampledSurface s;
  s.coarse = grids_.at(coarse);
  s.fine = grids_.at(fine);
  s.coarse_frames = frames(coarse);
  s.fine_frames = frames(fine);
  if (base_.truncated) mark_truncation_cut(s, base_.box);
  return s;
}

std::vector<Grid> SurfaceEvolution::quadrature_grids(const ParametrizedHypersurface& h,
                                                     const std::vector<ParamBox>& rects) {
  std::vector<Grid> grids;
  for (const ParamBox& r : rects) {
    validate(r);
    if (!h.box.contains(r)) throw Error(ErrorKind::InvalidArgument, "sub-rectangle leaves the parameter box");
    Grid coarse{r, scaled_shape(h.box, h.grid, r)};
    grids.push_back(coarse);
    grids.push_back(refined(coarse));
  }
  return grids;
}

namespace {

// Five-point stencil along a parameter direction, carried along the flow.
struct DirectionProbe {
  std::vector<Vec> points;  // offsets -2, -1, 0, +1, +2
  double step = 0.0;

  Vec tangent() const { return (points[0] - 8.0 * points[1] + 8.0 * points[3] - points[4]) / (12.0 * step); }
};

double normalized_norm(const Spacetime& st, const DirectionProbe& probe) {
  const Vec v = probe.tangent();
  const double len2 = v.squaredNorm();
  if (!(len2 > 0.0) || !std::isfinite(len2)) {
    throw Error(ErrorKind::RootNotBracketable, "transported tangent vector vanished");
  }
  return inner(st, probe.points[2], v, v) / len2;
}

void advance_probe(const FlowMap& fm, DirectionProbe& probe, const DirectionProbe& origin, double from, double to) {
  if (fm.analytic()) {
    for (std::size_t k = 0; k < probe.points.size(); ++k) probe.points[k] = fm.field.flow(to, origin.points[k]);
    for (const Vec& p : probe.points) {
      if (!inside(fm, p)) throw Error(ErrorKind::LeftChartDomain, "flow left the chart domain");
    }
    return;
  }
  advance(fm, probe.points, from, to);
}

}  // namespace

std::optional<double> lightlike_crossing(const Spacetime& st, const FlowMap& fm, const ParametrizedHypersurface& h,
                                         const Vec& u, const Vec& direction, double tau_max) {
  validate(h);
  if (!(tau_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "tau_max must be positive");
  if (direction.size() != h.box.dim() || direction.norm() == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "direction must be a nonzero parameter-space vector");
  }
  const Vec dir = direction / direction.norm();

  DirectionProbe origin;
  origin.step = 1e-3 * (1.0 + u.cwiseAbs().maxCoeff());
  for (int k = -2; k <= 2; ++k) origin.points.push_back(h.embed(u + (k * origin.step) * dir));

  const double q0 = normalized_norm(st, origin);
  if (std::abs(q0) <= tolerance::kCausal) {
    throw Error(ErrorKind::RootNotBracketable, "direction is already lightlike at tau = 0");
  }
  auto changed = [q0](double q) { return q == 0.0 || std::signbit(q) != std::signbit(q0); };

  const int samples = tolerance::kBracketSamples;
  const double dt = tau_max / samples;
  DirectionProbe left = origin;
  double tau_left = 0.0;
  for (int k = 1; k <= samples; ++k) {
    const double tau_right = k * dt;
    DirectionProbe right = left;
    advance_probe(fm, right, origin, tau_left, tau_right);
    const double q = normalized_norm(st, right);
    if (!std::isfinite(q)) throw Error(ErrorKind::RootNotBracketable, "non-finite causal norm along the flow");
    if (q == 0.0) return tau_right;
    if (changed(q)) {
      double lo = tau_left, hi = tau_right;
      const double width = std::max(tolerance::kRoot * 1e-3, 8.0 * std::numeric_limits<double>::epsilon() * hi);
      while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        DirectionProbe probe = left;
        advance_probe(fm, probe, origin, lo, mid);
        const double qm = normalized_norm(st, probe);
        if (!std::isfinite(qm)) throw Error(ErrorKind::RootNotBracketable, "non-finite causal norm in bisection");
        if (changed(qm)) {
          hi = mid;
        } else {
          lo = mid;
          left = std::move(probe);
        }
      }
      return 0.5 * (lo + hi);
    }
    left = std::move(right);
    tau_left = tau_right;
  }
  return std::nullopt;
}

std::vector<SweepRow> causal_sweep(const Spacetime& st, const FlowMap& fm, const ParametrizedHypersurface& h,
                                   std::span<const double> tau_grid) {
  SurfaceEvolution evo(h, fm, {Grid{h.box, h.grid}});
  std::vector<SweepRow> rows;
  rows.reserve(tau_grid.size() * evo.grid(0).size());
  for (double tau : tau_grid) {
    evo.advance_to(tau);
    const auto frames = evo.frames(0);
    for (std::size_t i = 0; i < frames.size(); ++i) {
      rows.push_back(SweepRow{i, evo.grid(0).node(i), tau, frames[i].point, surface_causal_class(st, frames[i])});
    }
  }
  return rows;
}

}  // namespace curvedborn
