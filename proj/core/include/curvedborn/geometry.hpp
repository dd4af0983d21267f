#pragma once

#include "curvedborn/types.hpp"

#include <functional>
#include <string>
#include <string_view>

namespace curvedborn {

using MetricFn = std::function<Mat(const Vec&)>;
using ScalarFn = std::function<double(const Vec&)>;

/// A single global chart of a Lorentzian manifold with signature (+,-,...,-).
///
/// Coordinate 0 is the time coordinate in every built-in chart; the
/// future-directedness tests below rely on that chart convention.
struct Spacetime {
  int dim = 4;
  MetricFn metric;
  std::string name;
  /// Chart domain; an empty function means all of R^dim.
  std::function<bool(const Vec&)> in_domain;
};

Spacetime minkowski(int dim);

/// Omega(p)^2 * diag(1,-1,...,-1) with Omega = 1 + amplitude * sin(x).
Spacetime conformally_flat(int dim, double amplitude = 0.1);

/// Contravariant vector field with optional closed-form divergence and flow.
struct VectorField {
  std::function<Vec(const Vec&)> value;
  ScalarFn divergence;
  std::function<Vec(double, const Vec&)> flow;

  Vec operator()(const Vec& p) const { return value(p); }
  bool has_divergence() const { return static_cast<bool>(divergence); }
  bool has_flow() const { return static_cast<bool>(flow); }
};

enum class CausalCharacter { Spacelike, Timelike, Lightlike, Degenerate };

std::string_view to_string(CausalCharacter c);

bool in_domain(const Spacetime& st, const Vec& p);

/// Metric components at p, validated: symmetric, nondegenerate, Lorentzian.
Mat metric_at(const Spacetime& st, const Vec& p);

/// sqrt|det g| at p.
double volume_density(const Spacetime& st, const Vec& p);

double inner(const Spacetime& st, const Vec& p, const Vec& v, const Vec& w);

/// (grad f)^mu = g^{mu nu} d_nu f, with d_nu f by central differences.
VectorField gradient_field(const Spacetime& st, ScalarFn f);

Vec normalize_timelike(const Spacetime& st, const Vec& p, const Vec& v);

/// Uses the field's closed-form divergence when present, else divergence_fd.
double divergence(const Spacetime& st, const VectorField& field, const Vec& p);

/// (1/sqrt|g|) d_mu (sqrt|g| F^mu) by central differences.
double divergence_fd(const Spacetime& st, const VectorField& field, const Vec& p);

/// Classifies v by the sign of g(v,v) / |v|^2, thresholded at tolerance::kCausal.
CausalCharacter causal_class(const Spacetime& st, const Vec& p, const Vec& v);

}  // namespace curvedborn
