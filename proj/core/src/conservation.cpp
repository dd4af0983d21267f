#include "curvedborn/conservation.hpp"

#include <algorithm>
#include <cmath>

namespace curvedborn {

namespace {

FlowMap make_flow(const CurrentSpec& c, std::span<const double> tau_grid, const FlowOptions& options) {
  FlowMap fm;
  fm.field = options.field ? *options.field : c.velocity;
  fm.integrator = options.integrator;
  double span = 0.0;
  for (double t : tau_grid) span = std::max(span, std::abs(t));
  fm.step = options.step > 0.0 ? options.step : default_rk4_step(span);
  return fm;
}

void require_grid(std::span<const double> tau_grid, std::size_t minimum) {
  if (tau_grid.size() < minimum) {
    throw Error(ErrorKind::InvalidArgument, "tau grid needs at least " + std::to_string(minimum) + " samples");
  }
}

int fixed_sign(const ContractedCurrentForm& form, const SurfaceEvolution& evo, int orientation) {
  const int s = orientation_sign(form, evo.anchor_frame(), orientation);
  return s != 0 ? s : orientation;
}

}  // namespace

std::vector<double> three_point_derivative(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw Error(ErrorKind::InvalidArgument, "derivative needs matching grids of length >= 2");
  std::vector<double> d(n);
  if (n == 2) {
    d[0] = d[1] = (y[1] - y[0]) / (x[1] - x[0]);
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h1 = x[k] - x[k - 1], h2 = x[k + 1] - x[k];
    d[k] = -h2 / (h1 * (h1 + h2)) * y[k - 1] + (h2 - h1) / (h1 * h2) * y[k] + h1 / (h2 * (h1 + h2)) * y[k + 1];
  }
  {
    const double h1 = x[1] - x[0], h2 = x[2] - x[1];
    d[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1] - h1 / (h2 * (h1 + h2)) * y[2];
  }
  {
    const double h1 = x[n - 2] - x[n - 3], h2 = x[n - 1] - x[n - 2];
    d[n - 1] = h2 / (h1 * (h1 + h2)) * y[n - 3] - (h1 + h2) / (h1 * h2) * y[n - 2] +
               (h1 + 2 * h2) / (h2 * (h1 + h2)) * y[n - 1];
  }
  return d;
}

ConservationReport conservation_sweep(const Spacetime& st, const CurrentSpec& c, const ParametrizedHypersurface& h,
                                      std::span<const double> tau_grid, const FlowOptions& options) {
  require_grid(tau_grid, 1);
  const FlowMap fm = make_flow(c, tau_grid, options);
  const ContractedCurrentForm form{st, c.current};
  SurfaceEvolution evo(h, fm, SurfaceEvolution::quadrature_grids(h, {h.box}));
  evo.advance_to(tau_grid[0]);
  const int sign = fixed_sign(form, evo, h.orientation);

  ConservationReport report;
  for (double tau : tau_grid) {
    evo.advance_to(tau);
    const IntegralResult p = integrate_form(form, evo.sampled(0, 1), sign);
    report.tau.push_back(tau);
    report.totals.push_back(p.value);
    report.error_estimates.push_back(p.error_budget());
  }
  for (double total : report.totals) {
    const double drift = std::abs(total - report.totals.front());
    report.residuals.push_back(drift);
    report.max_drift = std::max(report.max_drift, drift);
  }
  report.max_residual = report.max_drift;
  report.max_error_estimate = *std::max_element(report.error_estimates.begin(), report.error_estimates.end());
  return report;
}

ConservationReport reynolds_check(const Spacetime& st, const CurrentSpec& c, const ParametrizedHypersurface& h,
                                  std::span<const double> tau_grid, const FlowOptions& options) {
  require_grid(tau_grid, 3);
  const FlowMap fm = make_flow(c, tau_grid, options);
  const ContractedCurrentForm current_form{st, c.current};
  const ContractedCurrentForm velocity_form{st, fm.field};
  SurfaceEvolution evo(h, fm, SurfaceEvolution::quadrature_grids(h, {h.box}));
  evo.advance_to(tau_grid[0]);
  const int sign = fixed_sign(current_form, evo, h.orientation);

  ConservationReport report;
  for (double tau : tau_grid) {
    evo.advance_to(tau);
    const SampledSurface s = evo.sampled(0, 1);
    const IntegralResult p = integrate_form(current_form, s, sign);
    const IntegralResult source = integrate_sampled(s, [&](const TangentFrame& f) {
      return sign * divergence(st, c.current, f.point) * velocity_form(f.point, f.basis);
    });
    report.tau.push_back(tau);
    report.totals.push_back(p.value);
    report.error_estimates.push_back(p.error_budget());
    report.sources.push_back(source.value);
  }
  report.derivatives = three_point_derivative(report.tau, report.totals);
  for (std::size_t k = 0; k < report.tau.size(); ++k) {
    const double r = std::abs(report.derivatives[k] - report.sources[k]);
    report.residuals.push_back(r);
    report.max_residual = std::max(report.max_residual, r);
    report.max_drift = std::max(report.max_drift, std::abs(report.totals[k] - report.totals.front()));
  }
  report.max_error_estimate = *std::max_element(report.error_estimates.begin(), report.error_estimates.end());
  return report;
}

ParametrizedHypersurface tube_face(const FlowCylinder& cyl, int axis, bool upper) {
  const ParametrizedHypersurface& base = cyl.base;
  const int n = base.box.dim();
  if (axis < 0 || axis >= n) throw Error(ErrorKind::InvalidArgument, "tube face axis out of range");
  const double fixed = upper ? base.box.hi[axis] : base.box.lo[axis];

  ParametrizedHypersurface face;
  face.name = base.name + "_tube";
  face.box.lo.resize(n);
  face.box.hi.resize(n);
  face.box.lo[0] = cyl.tau0;
  face.box.hi[0] = cyl.tau1;
  face.grid.assign(static_cast<std::size_t>(n), 2);
  face.grid[0] = cyl.tau_resolution;
  for (int k = 0, j = 1; k < n; ++k) {
    if (k == axis) continue;
    face.box.lo[j] = base.box.lo[k];
    face.box.hi[j] = base.box.hi[k];
    face.grid[static_cast<std::size_t>(j)] = base.grid[static_cast<std::size_t>(k)];
    ++j;
  }

  auto base_param = [n, axis, fixed](const Vec& w) {
    Vec u(n);
    for (int k = 0, j = 1; k < n; ++k) u[k] = (k == axis) ? fixed : w[j++];
    return u;
  };
  FlowMap fm = cyl.flow;
  fm.self_check_tolerance = 0.0;
  auto embed = [fm, embed = base.embed, base_param](const Vec& w) {
    return flow_point(fm, embed(base_param(w)), w[0]);
  };
  face.embed = embed;
  // d/dtau Phi_tau(p) is the field itself; the other columns are differenced.
  face.jacobian = [fm, embed, n](const Vec& w) {
    const Vec p = embed(w);
    Mat j(p.size(), n);
    j.col(0) = fm.field(p);
    for (int k = 1; k < n; ++k) {
      const double step = fd_step(w[k]);
      Vec plus = w, minus = w;
      plus[k] += step;
      minus[k] -= step;
      j.col(k) = (embed(plus) - embed(minus)) / (2.0 * step);
    }
    return j;
  };
  return face;
}

DivergenceTheoremReport divergence_theorem_check(const Spacetime& st, const VectorField& current,
                                                 const FlowCylinder& cyl) {
  validate(cyl.base);
  if (cyl.tau1 < cyl.tau0) throw Error(ErrorKind::InvalidArgument, "cylinder needs tau1 >= tau0");
  if (cyl.tau_resolution < 2) throw Error(ErrorKind::InvalidArgument, "cylinder tau resolution must be >= 2");

  const ContractedCurrentForm form{st, current};
  const ParametrizedHypersurface cap0 = evolve_surface(cyl.flow, cyl.base, cyl.tau0).surface();
  const ParametrizedHypersurface cap1 = evolve_surface(cyl.flow, cyl.base, cyl.tau1).surface();

  auto flux_density = [&](const TangentFrame& f) { return inner(st, f.point, current(f.point), unit_normal(st, f)); };

  DivergenceTheoremReport r;
  r.cap0 = induced_volume_integral(st, cap0, flux_density);
  r.cap1 = induced_volume_integral(st, cap1, flux_density);
  r.cap_difference = std::abs(r.cap1.value - r.cap0.value);

  const int sign = orientation_sign(form, cap0);
  const IntegralResult born0 = integrate_form(form, sample_surface(cap0), sign);
  const IntegralResult born1 = integrate_form(form, sample_surface(cap1), sign);
  r.born_cap_difference = born1.value - born0.value;
  r.error_budget = r.cap0.error_budget() + r.cap1.error_budget() + born0.error_budget() + born1.error_budget();

  if (cyl.tau1 > cyl.tau0) {
    const int n = cyl.base.box.dim();
    for (int axis = 0; axis < n; ++axis) {
      // Induced boundary orientation in (tau, u_1..u_n): (-1)^(axis+1) on the upper face.
      const int parity = (axis % 2 == 0) ? -1 : 1;
      for (bool upper : {false, true}) {
        const int face_sign = upper ? parity : -parity;
        const IntegralResult flux = integrate_form(form, sample_surface(tube_face(cyl, axis, upper)), 1);
        r.tube_flux += sign * face_sign * flux.value;
        r.tube_error += flux.error_estimate;
      }
    }
  }
  r.error_budget += r.tube_error;
  r.stokes_residual = std::abs(r.born_cap_difference + r.tube_flux);
  return r;
}

}  // namespace curvedborn
