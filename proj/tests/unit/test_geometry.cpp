#include "curvedborn/curvedborn.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace curvedborn;

namespace {

Vec random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

}  // namespace

TEST(Metric, MinkowskiIsConstantDiagonal) {
  const Mat g4 = metric_at(minkowski(4), make_vec({3.0, -1.0, 2.0, 5.0}));
  EXPECT_TRUE(g4.isApprox(Vec(make_vec({1, -1, -1, -1})).asDiagonal().toDenseMatrix()));
  const Mat g3 = metric_at(minkowski(3), make_vec({0.1, 0.2, 0.3}));
  EXPECT_TRUE(g3.isApprox(Vec(make_vec({1, -1, -1})).asDiagonal().toDenseMatrix()));
}

TEST(Metric, ConformalReducesToFlatWhereOmegaIsOne) {
  const Mat g = metric_at(conformally_flat(4), Vec::Zero(4));
  EXPECT_TRUE(g.isApprox(Vec(make_vec({1, -1, -1, -1})).asDiagonal().toDenseMatrix(), 1e-15));
}

TEST(Metric, SignatureStableOnSampledPoints) {
  std::mt19937_64 rng(7);
  for (const Spacetime& st : {minkowski(3), minkowski(4), conformally_flat(3), conformally_flat(4)}) {
    for (int k = 0; k < 200; ++k) {
      const Mat g = metric_at(st, random_vec(rng, st.dim, 10.0));
      Eigen::SelfAdjointEigenSolver<Mat> es(g);
      int positive = 0;
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) positive += es.eigenvalues()[i] > 0.0;
      EXPECT_EQ(positive, 1);
    }
  }
}

TEST(Metric, RejectsEuclideanAndSingular) {
  Spacetime euclid{3, [](const Vec&) { return Mat(Mat::Identity(3, 3)); }, "euclid", {}};
  try {
    metric_at(euclid, Vec::Zero(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonLorentzian);
  }
  Spacetime flat{3, [](const Vec&) { return Mat(Vec(make_vec({1, -1, 0})).asDiagonal()); }, "flat", {}};
  try {
    metric_at(flat, Vec::Zero(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Singular);
  }
}

TEST(Inner, Examples) {
  EXPECT_DOUBLE_EQ(inner(minkowski(4), Vec::Zero(4), make_vec({1, 0, 0, 0}), make_vec({1, 0, 0, 0})), 1.0);
  EXPECT_DOUBLE_EQ(inner(minkowski(3), Vec::Zero(3), make_vec({1, 1, 0}), make_vec({1, 1, 0})), 0.0);
  EXPECT_DOUBLE_EQ(inner(minkowski(3), Vec::Zero(3), make_vec({std::sqrt(2.0), 1, 0}), make_vec({0, 0, 1})), 0.0);
}

TEST(Inner, SymmetricOnRandomSamples) {
  std::mt19937_64 rng(11);
  for (const Spacetime& st : {minkowski(4), conformally_flat(3), conformally_flat(4)}) {
    for (int k = 0; k < 200; ++k) {
      const Vec p = random_vec(rng, st.dim, 5.0), v = random_vec(rng, st.dim), w = random_vec(rng, st.dim);
      EXPECT_EQ(inner(st, p, v, w), inner(st, p, w, v));
    }
  }
}

TEST(Gradient, CoordinateFunctionsInMinkowski) {
  const Spacetime st = minkowski(4);
  const Vec p = make_vec({0.3, 1.0, -2.0, 0.5});
  EXPECT_TRUE(gradient_field(st, [](const Vec& q) { return q[0]; })(p).isApprox(make_vec({1, 0, 0, 0}), 1e-9));
  const Vec gx = gradient_field(st, [](const Vec& q) { return q[1]; })(p);
  EXPECT_NEAR(gx[1], -1.0, 1e-9);
  EXPECT_NEAR(gx.norm(), 1.0, 1e-9);
}

TEST(Gradient, InverseConformalFactor) {
  // Omega = 1 + 0.1 sin(x) = 1.1 at x = pi/2, so g^00 = 1 / 1.21.
  const Spacetime st = conformally_flat(4);
  const Vec p = make_vec({0.0, M_PI / 2, 0.0, 0.0});
  const Vec grad = gradient_field(st, [](const Vec& q) { return q[0]; })(p);
  // Oracle: invert the metric returned by the chart directly.
  const Mat ginv = st.metric(p).inverse();
  EXPECT_NEAR(grad[0], ginv(0, 0), 1e-9);
  EXPECT_NEAR(grad[0], 1.0 / 1.21, 1e-9);
  EXPECT_NEAR(grad.tail(3).norm(), 0.0, 1e-9);
}

TEST(NormalizeTimelike, Examples) {
  const Spacetime st3 = minkowski(3);
  EXPECT_TRUE(normalize_timelike(minkowski(4), Vec::Zero(4), make_vec({2, 0, 0, 0})).isApprox(make_vec({1, 0, 0, 0})));
  const Vec unit = make_vec({std::sqrt(2.0), 1, 0});
  EXPECT_TRUE(normalize_timelike(st3, Vec::Zero(3), unit).isApprox(unit, 1e-15));
  EXPECT_TRUE(normalize_timelike(st3, Vec::Zero(3), make_vec({2 * std::sqrt(2.0), 2, 0})).isApprox(unit, 1e-15));
}

TEST(NormalizeTimelike, Errors) {
  const Spacetime st = minkowski(3);
  try {
    normalize_timelike(st, Vec::Zero(3), make_vec({1, 1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotTimelike);
  }
  try {
    normalize_timelike(st, Vec::Zero(3), make_vec({-2, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PastDirected);
  }
}

TEST(NormalizeTimelike, Idempotent) {
  std::mt19937_64 rng(3);
  const Spacetime st = conformally_flat(4);
  for (int k = 0; k < 100; ++k) {
    const Vec p = random_vec(rng, 4, 3.0);
    Vec v = random_vec(rng, 4, 0.4);
    v[0] = 1.0;
    const Vec once = normalize_timelike(st, p, v);
    EXPECT_NEAR((normalize_timelike(st, p, once) - once).norm(), 0.0, 1e-14);
    EXPECT_NEAR(inner(st, p, once, once), 1.0, 1e-13);
  }
}

TEST(Divergence, Examples) {
  const Spacetime st4 = minkowski(4);
  VectorField constant{[](const Vec&) { return make_vec({1, 2, 3, 4}); }, {}, {}};
  EXPECT_NEAR(divergence(st4, constant, make_vec({0.5, 1, 2, 3})), 0.0, 1e-9);
  VectorField position{[](const Vec& p) { return p; }, {}, {}};
  EXPECT_NEAR(divergence(st4, position, make_vec({0.5, 1, 2, 3})), 4.0, 1e-8);

  const VectorField x = example1_field(1.0);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const Vec p = random_vec(rng, 3, 4.0);
    EXPECT_NEAR(divergence_fd(minkowski(3), x, p), 0.0, 1e-8);
    EXPECT_EQ(divergence(minkowski(3), x, p), 0.0);
  }
}

TEST(Divergence, ConformalDensityEntersTheFormula) {
  // F = e_0 / sqrt|g| is divergence free in any chart; e_1 / sqrt|g| is too.
  const Spacetime st = conformally_flat(4);
  VectorField f{[&](const Vec& p) {
                  Vec v = make_vec({1.0, 0.5, 0, 0});
                  return Vec(v / volume_density(st, p));
                },
                {},
                {}};
  std::mt19937_64 rng(9);
  for (int k = 0; k < 50; ++k) EXPECT_NEAR(divergence_fd(st, f, random_vec(rng, 4, 3.0)), 0.0, 1e-8);
}

TEST(Divergence, ClosedFormMatchesDifferencesOnBuiltIns) {
  std::mt19937_64 rng(13);
  const CurrentSpec decaying = decaying_rotating_current(1.0, 0.5, 0.7, 0.4);
  for (int k = 0; k < 100; ++k) {
    const Vec p = random_vec(rng, 3, 1.5);
    EXPECT_NEAR(divergence(minkowski(3), decaying.current, p), divergence_fd(minkowski(3), decaying.current, p), 1e-6);
  }
}

TEST(CausalClass, Examples) {
  const Spacetime st = minkowski(4);
  EXPECT_EQ(causal_class(st, Vec::Zero(4), make_vec({1, 0, 0, 0})), CausalCharacter::Timelike);
  EXPECT_EQ(causal_class(st, Vec::Zero(4), make_vec({1, 1, 0, 0})), CausalCharacter::Lightlike);
  EXPECT_EQ(causal_class(st, Vec::Zero(4), make_vec({0, 1, 0, 0})), CausalCharacter::Spacelike);
  try {
    causal_class(st, Vec::Zero(4), Vec::Zero(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroVector);
  }
}

TEST(CausalClass, ScaleInvariant) {
  const Spacetime st = minkowski(3);
  for (double s : {1e-8, 1.0, 1e8}) {
    EXPECT_EQ(causal_class(st, Vec::Zero(3), Vec(s * make_vec({1, 1, 0}))), CausalCharacter::Lightlike);
    EXPECT_EQ(causal_class(st, Vec::Zero(3), Vec(s * make_vec({1, 0.999, 0}))), CausalCharacter::Timelike);
  }
}

TEST(ContractedForm, VolumeDensityOfConformalMetric) {
  // Omega = 1.1 at x = pi/2; det(Omega^2 eta) = Omega^6 det(eta) in three dimensions.
  const Spacetime st = conformally_flat(3);
  const Vec p = make_vec({0.0, M_PI / 2, 0.0});
  EXPECT_NEAR(volume_density(st, p), std::sqrt(std::abs(oracle::leibniz_det(st.metric(p)))), 1e-14);
  EXPECT_NEAR(volume_density(st, p), 1.331, 1e-12);
}
