#pragma once

#include "curvedborn/geometry.hpp"
#include "curvedborn/quadrature.hpp"

#include <cstdint>
#include <string>

namespace curvedborn {

/// A current J = rho * X with its factorization kept explicit.
struct CurrentSpec {
  std::string name;
  VectorField current;
  VectorField velocity;
  ScalarFn density;
  bool divergence_free = false;
  /// Spacetime box used for sampled invariant checks.
  ParamBox sample_box;
};

/// Rotating observer field on Minkowski 3-space: X = (sqrt(1 + w^2 r^2), -w y, w x),
/// with its closed-form flow (rotation by w*tau, t advanced by X^0 * tau).
VectorField example1_field(double omega);

/// Flow time at which the radial direction at radius r0 of the t = 0 plane
/// becomes lightlike under example1_field: sqrt(1 + w^2 r0^2) / (w^2 r0).
double example1_crossing_time(double omega, double r0);

/// Gaussian packet moving with spatial velocity v, |v| < 1:
///   J = (f, v f) / sqrt|g|,  f(x) = (2 pi)^(-n/2) w^(-n) exp(-|x - v t|^2 / (2 w^2)),
/// n = dim - 1. Dividing by sqrt|g| keeps div J = 0 in any chart, and the
/// probability on every t = const slice is 1. X = gamma (1, v), which is the
/// unit observer field in Minkowski space; rho = J^0 / X^0.
CurrentSpec boosted_gaussian_current(const Spacetime& st, const Vec& velocity, double width);

inline CurrentSpec static_gaussian_current(const Spacetime& st, double width) {
  return boosted_gaussian_current(st, Vec::Zero(st.dim - 1), width);
}

/// J = density * e_0 / sqrt|g|, X = e_0. Divergence free.
CurrentSpec uniform_current(const Spacetime& st, double density);

/// Minkowski 3-space: J = rho X with X = example1_field(omega) and
/// rho = f(r) / X^0, f the normalized 2-d Gaussian. Divergence free, J^0 = f.
CurrentSpec swirling_gaussian_current(double omega, double width);

/// Minkowski 3-space, not conserved: rho = f(x - c, y) exp(-decay * t),
/// X = example1_field(omega); div(rho X) = -rho (decay X^0 + omega c y / w^2).
CurrentSpec decaying_rotating_current(double omega, double center_x, double width, double decay);

/// X' = f X, rho' = rho / f, J unchanged. f is checked positive on a seeded
/// sample of the current's sample box (NonPositiveRescaling).
CurrentSpec rescale_velocity(const CurrentSpec& c, ScalarFn f, std::uint64_t seed = 0, int samples = 256);

struct CurrentCheck {
  std::size_t samples = 0;
  double max_factorization_error = 0.0;  // |J - rho X| / |J|
  double min_normalized_norm = 0.0;      // min g(J,J) / |J|^2
  bool future_directed = true;
  double max_divergence = 0.0;           // finite-difference |div J|
  bool ok = false;
};

inline constexpr double kDivergenceTolerance = 1e-6;

CurrentCheck check_current(const Spacetime& st, const CurrentSpec& c, int samples, std::uint64_t seed);

}  // namespace curvedborn
