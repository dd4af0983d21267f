#include "curvedborn/geometry.hpp"

#include <cmath>
#include <sstream>

namespace curvedborn {

namespace {

Mat minkowski_eta(int dim) {
  Mat eta = Mat::Zero(dim, dim);
  eta(0, 0) = 1.0;
  for (int i = 1; i < dim; ++i) eta(i, i) = -1.0;
  return eta;
}

void require_dim(int dim) {
  if (dim < 3 || dim > kMaxDim) {
    throw Error(ErrorKind::InvalidArgument, "spacetime dimension must be 3 or 4, got " + std::to_string(dim));
  }
}

void require_length(const Spacetime& st, const Vec& v, const char* what) {
  if (v.size() != st.dim) {
    std::ostringstream os;
    os << what << " has length " << v.size() << ", expected " << st.dim;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace

std::string_view to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::Spacelike: return "spacelike";
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Lightlike: return "lightlike";
    case CausalCharacter::Degenerate: return "degenerate";
  }
  return "unknown";
}

Spacetime minkowski(int dim) {
  require_dim(dim);
  Mat eta = minkowski_eta(dim);
  return Spacetime{dim, [eta](const Vec&) { return eta; }, "minkowski" + std::to_string(dim), {}};
}

Spacetime conformally_flat(int dim, double amplitude) {
  require_dim(dim);
  if (!(std::abs(amplitude) < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "conformal amplitude must satisfy |a| < 1");
  }
  Mat eta = minkowski_eta(dim);
  auto metric = [eta, amplitude](const Vec& p) {
    const double omega = 1.0 + amplitude * std::sin(p[1]);
    return Mat(omega * omega * eta);
  };
  return Spacetime{dim, metric, "conformal" + std::to_string(dim), {}};
}

bool in_domain(const Spacetime& st, const Vec& p) {
  if (p.size() != st.dim || !all_finite(p)) return false;
  return !st.in_domain || st.in_domain(p);
}

Mat metric_at(const Spacetime& st, const Vec& p) {
  require_length(st, p, "point");
  if (!in_domain(st, p)) throw Error(ErrorKind::LeftChartDomain, "point outside chart domain of " + st.name);

  Mat g = st.metric(p);
  if (g.rows() != st.dim || g.cols() != st.dim || !g.allFinite()) {
    throw Error(ErrorKind::NonLorentzian, "metric of " + st.name + " has wrong shape or non-finite entries");
  }
  const double scale = g.cwiseAbs().maxCoeff();
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::NonLorentzian, "metric of " + st.name + " is not symmetric");
  }
  if (std::abs(g.determinant()) < tolerance::kDeterminant) {
    throw Error(ErrorKind::Singular, "metric of " + st.name + " is singular");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(g, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  int positive = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) positive += ev[i] > 0.0 ? 1 : 0;
  if (positive != 1) {
    throw Error(ErrorKind::NonLorentzian,
                "metric of " + st.name + " has " + std::to_string(positive) + " positive eigenvalues");
  }
  return g;
}

double volume_density(const Spacetime& st, const Vec& p) { return std::sqrt(std::abs(metric_at(st, p).determinant())); }

double inner(const Spacetime& st, const Vec& p, const Vec& v, const Vec& w) {
  require_length(st, v, "vector");
  require_length(st, w, "vector");
  const Mat g = metric_at(st, p);
  // Pairs (mu, nu) and (nu, mu) are summed together so swapping v and w is exact.
  double total = 0.0;
  for (Eigen::Index mu = 0; mu < g.rows(); ++mu) {
    total += g(mu, mu) * (v[mu] * w[mu]);
    for (Eigen::Index nu = mu + 1; nu < g.cols(); ++nu) total += g(mu, nu) * (v[mu] * w[nu] + v[nu] * w[mu]);
  }
  return total;
}

VectorField gradient_field(const Spacetime& st, ScalarFn f) {
  VectorField grad;
  grad.value = [st, f = std::move(f)](const Vec& p) {
    require_length(st, p, "point");
    Vec df(st.dim);
    for (int mu = 0; mu < st.dim; ++mu) {
      const double h = fd_step(p[mu]);
      Vec plus = p, minus = p;
      plus[mu] += h;
      minus[mu] -= h;
      if (!in_domain(st, plus) || !in_domain(st, minus)) {
        throw Error(ErrorKind::DifferentiationFailure, "gradient stencil leaves the chart domain");
      }
      const double fp = f(plus), fm = f(minus);
      if (!std::isfinite(fp) || !std::isfinite(fm)) {
        throw Error(ErrorKind::DifferentiationFailure, "non-finite value in gradient stencil");
      }
      df[mu] = (fp - fm) / (2.0 * h);
    }
    return Vec(metric_at(st, p).inverse() * df);
  };
  return grad;
}

Vec normalize_timelike(const Spacetime& st, const Vec& p, const Vec& v) {
  const double norm2 = inner(st, p, v, v);
  if (!(norm2 > tolerance::kCausal)) {
    throw Error(ErrorKind::NotTimelike, "vector with g(V,V) = " + std::to_string(norm2) + " is not timelike");
  }
  if (!(v[0] > 0.0)) throw Error(ErrorKind::PastDirected, "timelike vector is past-directed");
  return v / std::sqrt(norm2);
}

double divergence_fd(const Spacetime& st, const VectorField& field, const Vec& p) {
  require_length(st, p, "point");
  double sum = 0.0;
  for (int mu = 0; mu < st.dim; ++mu) {
    const double h = fd_step(p[mu]);
    Vec plus = p, minus = p;
    plus[mu] += h;
    minus[mu] -= h;
    if (!in_domain(st, plus) || !in_domain(st, minus)) {
      throw Error(ErrorKind::DifferentiationFailure, "divergence stencil leaves the chart domain");
    }
    const double fp = volume_density(st, plus) * field(plus)[mu];
    const double fm = volume_density(st, minus) * field(minus)[mu];
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw Error(ErrorKind::DifferentiationFailure, "non-finite value in divergence stencil");
    }
    sum += (fp - fm) / (2.0 * h);
  }
  return sum / volume_density(st, p);
}

double divergence(const Spacetime& st, const VectorField& field, const Vec& p) {
  if (field.has_divergence()) return field.divergence(p);
  return divergence_fd(st, field, p);
}

CausalCharacter causal_class(const Spacetime& st, const Vec& p, const Vec& v) {
  require_length(st, v, "vector");
  const double len = v.norm();
  if (len == 0.0) throw Error(ErrorKind::ZeroVector, "cannot classify the zero vector");
  const Vec unit = v / len;
  const double q = inner(st, p, unit, unit);
  if (q > tolerance::kCausal) return CausalCharacter::Timelike;
  if (q < -tolerance::kCausal) return CausalCharacter::Spacelike;
  return CausalCharacter::Lightlike;
}

}  // namespace curvedborn
