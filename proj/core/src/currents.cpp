#include "curvedborn/currents.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace curvedborn {

namespace {

double gaussian_norm(int n, double width) { return std::pow(2.0 * std::numbers::pi, -0.5 * n) * std::pow(width, -n); }

ParamBox centered_box(int dim, double half_time, double half_space) {
  ParamBox b;
  b.lo = Vec::Constant(dim, -half_space);
  b.hi = Vec::Constant(dim, half_space);
  b.lo[0] = -half_time;
  b.hi[0] = half_time;
  return b;
}

Vec random_point(const ParamBox& box, std::mt19937_64& rng) {
  Vec p(box.dim());
  for (int i = 0; i < box.dim(); ++i) p[i] = std::uniform_real_distribution<double>(box.lo[i], box.hi[i])(rng);
  return p;
}

}  // namespace

VectorField example1_field(double omega) {
  if (!(omega > 0.0)) throw Error(ErrorKind::InvalidArgument, "omega must be positive");
  VectorField x;
  x.value = [omega](const Vec& p) {
    const double vx = -omega * p[2];
    const double vy = omega * p[1];
    return make_vec({std::sqrt(1.0 + vx * vx + vy * vy), vx, vy});
  };
  x.divergence = [](const Vec&) { return 0.0; };
  x.flow = [omega](double tau, const Vec& p) {
    const double c = std::cos(omega * tau), s = std::sin(omega * tau);
    const double r2 = p[1] * p[1] + p[2] * p[2];
    return make_vec({std::sqrt(1.0 + omega * omega * r2) * tau + p[0], p[1] * c - p[2] * s, p[1] * s + p[2] * c});
  };
  return x;
}

double example1_crossing_time(double omega, double r0) {
  if (!(omega > 0.0) || !(r0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "omega and r0 must be positive");
  return std::sqrt(1.0 + omega * omega * r0 * r0) / (omega * omega * r0);
}

CurrentSpec boosted_gaussian_current(const Spacetime& st, const Vec& velocity, double width) {
  const int n = st.dim - 1;
  if (velocity.size() != n) throw Error(ErrorKind::InvalidArgument, "velocity must have dim - 1 components");
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "width must be positive");
  const double speed2 = velocity.squaredNorm();
  if (!(speed2 < 1.0)) {
    throw Error(ErrorKind::SuperluminalVelocity, "|v| = " + std::to_string(std::sqrt(speed2)) + " is not below 1");
  }
  const double gamma = 1.0 / std::sqrt(1.0 - speed2);
  const double norm = gaussian_norm(n, width);

  auto profile = [velocity, width, norm](const Vec& p) {
    const Vec xi = p.tail(velocity.size()) - velocity * p[0];
    return norm * std::exp(-xi.squaredNorm() / (2.0 * width * width));
  };

  Vec direction(st.dim);
  direction[0] = 1.0;
  direction.tail(n) = velocity;

  CurrentSpec c;
  c.name = "boosted_gaussian";
  c.divergence_free = true;
  c.current.value = [st, profile, direction](const Vec& p) {
    return Vec(direction * (profile(p) / volume_density(st, p)));
  };
  c.current.divergence = [](const Vec&) { return 0.0; };
  c.velocity.value = [direction, gamma](const Vec&) { return Vec(gamma * direction); };
  c.velocity.divergence = [](const Vec&) { return 0.0; };
  c.velocity.flow = [direction, gamma](double tau, const Vec& p) { return Vec(p + (tau * gamma) * direction); };
  c.density = [st, profile, gamma](const Vec& p) { return profile(p) / (gamma * volume_density(st, p)); };
  c.sample_box = centered_box(st.dim, 5.0, 3.0 * width);
  return c;
}

CurrentSpec uniform_current(const Spacetime& st, double density) {
  if (!(density > 0.0)) throw Error(ErrorKind::InvalidArgument, "density must be positive");
  Vec e0 = Vec::Zero(st.dim);
  e0[0] = 1.0;
  CurrentSpec c;
  c.name = "uniform";
  c.divergence_free = true;
  c.current.value = [st, e0, density](const Vec& p) { return Vec(e0 * (density / volume_density(st, p))); };
  c.current.divergence = [](const Vec&) { return 0.0; };
  c.velocity.value = [e0](const Vec&) { return e0; };
  c.velocity.divergence = [](const Vec&) { return 0.0; };
  c.velocity.flow = [e0](double tau, const Vec& p) { return Vec(p + tau * e0); };
  c.density = [st, density](const Vec& p) { return density / volume_density(st, p); };
  c.sample_box = centered_box(st.dim, 5.0, 5.0);
  return c;
}

CurrentSpec swirling_gaussian_current(double omega, double width) {
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "width must be positive");
  const VectorField x = example1_field(omega);
  const double norm = gaussian_norm(2, width);
  auto rho = [omega, width, norm](const Vec& p) {
    const double r2 = p[1] * p[1] + p[2] * p[2];
    return norm * std::exp(-r2 / (2.0 * width * width)) / std::sqrt(1.0 + omega * omega * r2);
  };
  CurrentSpec c;
  c.name = "swirling_gaussian";
  c.divergence_free = true;
  c.velocity = x;
  c.density = rho;
  c.current.value = [x, rho](const Vec& p) { return Vec(rho(p) * x(p)); };
  c.current.divergence = [](const Vec&) { return 0.0; };
  c.sample_box = centered_box(3, 5.0, 3.0 * width);
  return c;
}

CurrentSpec decaying_rotating_current(double omega, double center_x, double width, double decay) {
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "width must be positive");
  const VectorField x = example1_field(omega);
  const double norm = gaussian_norm(2, width);
  auto rho = [=](const Vec& p) {
    const double dx = p[1] - center_x;
    return norm * std::exp(-(dx * dx + p[2] * p[2]) / (2.0 * width * width) - decay * p[0]);
  };
  CurrentSpec c;
  c.name = "decaying_rotating";
  c.divergence_free = false;
  c.velocity = x;
  c.density = rho;
  c.current.value = [x, rho](const Vec& p) { return Vec(rho(p) * x(p)); };
  c.current.divergence = [=](const Vec& p) {
    const double x0 = x(p)[0];
    return -rho(p) * (decay * x0 + omega * center_x * p[2] / (width * width));
  };
  c.sample_box = centered_box(3, 2.0, 3.0 * width + std::abs(center_x));
  return c;
}

CurrentSpec rescale_velocity(const CurrentSpec& c, ScalarFn f, std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Vec p = random_point(c.sample_box, rng);
    const double v = f(p);
    if (!(v > 0.0)) {
      throw Error(ErrorKind::NonPositiveRescaling, "rescaling function is " + std::to_string(v) + " at a sample");
    }
  }
  CurrentSpec out = c;
  out.name = c.name + "_rescaled";
  out.velocity = VectorField{};
  out.velocity.value = [x = c.velocity, f](const Vec& p) { return Vec(f(p) * x(p)); };
  out.density = [rho = c.density, f](const Vec& p) { return rho(p) / f(p); };
  return out;
}

CurrentCheck check_current(const Spacetime& st, const CurrentSpec& c, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CurrentCheck r;
  r.min_normalized_norm = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const Vec p = random_point(c.sample_box, rng);
    const Vec j = c.current(p);
    const double len = j.norm();
    if (len == 0.0) continue;  // J underflows far out in the Gaussian tails
    const Vec factored = c.density(p) * c.velocity(p);
    r.max_factorization_error = std::max(r.max_factorization_error, (j - factored).norm() / len);
    r.min_normalized_norm = std::min(r.min_normalized_norm, inner(st, p, j, j) / (len * len));
    r.future_directed = r.future_directed && j[0] > 0.0;
    if (c.divergence_free) r.max_divergence = std::max(r.max_divergence, std::abs(divergence_fd(st, c.current, p)));
    ++r.samples;
  }
  r.ok = r.max_factorization_error < 1e-12 && r.min_normalized_norm > tolerance::kCausal && r.future_directed &&
         r.max_divergence < kDivergenceTolerance;
  return r;
}

}  // namespace curvedborn
