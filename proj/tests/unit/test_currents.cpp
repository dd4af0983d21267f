#include "curvedborn/curvedborn.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace curvedborn;

namespace {

Vec random_point(std::mt19937_64& rng, int dim, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Vec p(dim);
  for (int i = 0; i < dim; ++i) p[i] = d(rng);
  return p;
}

}  // namespace

TEST(Example1Field, Values) {
  const VectorField x = example1_field(1.0);
  EXPECT_NEAR((x(make_vec({0.3, 1, 0})) - make_vec({std::sqrt(2.0), 0, 1})).norm(), 0.0, 1e-15);
  for (double w : {0.1, 1.0, 7.0}) EXPECT_EQ(example1_field(w)(Vec::Zero(3)), make_vec({1, 0, 0}));
}

TEST(Example1Field, UnitObserverField) {
  std::mt19937_64 rng(1);
  const Spacetime st = minkowski(3);
  const VectorField x = example1_field(1.7);
  for (int k = 0; k < 100; ++k) {
    const Vec p = random_point(rng, 3, 5.0);
    EXPECT_NEAR(inner(st, p, x(p), x(p)), 1.0, 1e-12);
    EXPECT_EQ(causal_class(st, p, x(p)), CausalCharacter::Timelike);
  }
}

TEST(Example1Field, FlowStartsAtIdentityAndMatchesOracle) {
  std::mt19937_64 rng(2);
  const VectorField x = example1_field(0.6);
  for (int k = 0; k < 20; ++k) {
    const Vec p = random_point(rng, 3, 3.0);
    EXPECT_EQ(x.flow(0.0, p), p);
    EXPECT_NEAR((x.flow(1.3, p) - oracle::rotating_flow(0.6, p, 1.3)).norm(), 0.0, 1e-13);
  }
  EXPECT_DOUBLE_EQ(example1_crossing_time(1.0, 1.0), std::sqrt(2.0));
}

TEST(BoostedGaussian, StaticCaseIsNormalizedDensity) {
  const Spacetime st = minkowski(4);
  const CurrentSpec c = static_gaussian_current(st, 1.0);
  const Vec p = make_vec({0.0, 0.5, -0.2, 0.1});
  const double f = std::exp(-p.tail(3).squaredNorm() / 2) / std::pow(2 * M_PI, 1.5);
  EXPECT_NEAR((c.current(p) - make_vec({f, 0, 0, 0})).norm(), 0.0, 1e-16);
  EXPECT_TRUE(c.divergence_free);
  const IntegralResult p0 = born_probability(st, c.current, time_slice(4, 0.0, 8.0, 16));
  EXPECT_NEAR(p0.value, 1.0, 1e-6);
}

TEST(BoostedGaussian, MovingPacketIsDivergenceFree) {
  const Spacetime st = minkowski(4);
  const CurrentSpec c = boosted_gaussian_current(st, make_vec({0.5, 0, 0}), 1.0);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const Vec p = random_point(rng, 4, 2.0);
    EXPECT_LT(std::abs(divergence_fd(st, c.current, p)), kDivergenceTolerance);
    const double f = c.current(p)[0];
    EXPECT_NEAR(inner(st, p, c.current(p), c.current(p)), f * f * 0.75, 1e-15 + 1e-12 * f * f);
  }
}

TEST(BoostedGaussian, SuperluminalRejected) {
  for (double v : {1.0, 1.5}) {
    try {
      boosted_gaussian_current(minkowski(3), make_vec({v, 0.0}), 1.0);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::SuperluminalVelocity);
    }
  }
  try {
    boosted_gaussian_current(minkowski(4), make_vec({0.6, 0.6, 0.6}), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SuperluminalVelocity);
  }
}

TEST(BoostedGaussian, ConformalChartStaysConserved) {
  const Spacetime st = conformally_flat(3);
  const CurrentSpec c = boosted_gaussian_current(st, make_vec({0.3, -0.2}), 0.8);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 100; ++k) EXPECT_LT(std::abs(divergence_fd(st, c.current, random_point(rng, 3, 2.0))), 1e-6);
}

TEST(BuiltInCurrents, PassTheirInvariants) {
  const std::vector<std::pair<Spacetime, CurrentSpec>> cases = {
      {minkowski(3), static_gaussian_current(minkowski(3), 1.0)},
      {minkowski(4), boosted_gaussian_current(minkowski(4), make_vec({0.5, 0, 0}), 1.0)},
      {conformally_flat(4), boosted_gaussian_current(conformally_flat(4), make_vec({0.2, 0.1, 0}), 1.0)},
      {minkowski(3), uniform_current(minkowski(3), 0.3)},
      {conformally_flat(3), uniform_current(conformally_flat(3), 1.0)},
      {minkowski(3), swirling_gaussian_current(1.0, 1.0)},
      {minkowski(3), decaying_rotating_current(1.0, 0.5, 0.5, 0.5)},
  };
  for (const auto& [st, c] : cases) {
    const CurrentCheck r = check_current(st, c, 1000, 99);
    EXPECT_TRUE(r.ok) << c.name;
    EXPECT_EQ(r.samples, 1000u);
    EXPECT_LT(r.max_factorization_error, 1e-14) << c.name;
    EXPECT_GT(r.min_normalized_norm, 0.0) << c.name;
    EXPECT_TRUE(r.future_directed) << c.name;
    if (c.divergence_free) EXPECT_LT(r.max_divergence, kDivergenceTolerance) << c.name;
  }
}

TEST(BuiltInCurrents, DecayingCurrentHasTheStatedSource) {
  const CurrentSpec c = decaying_rotating_current(1.0, 0.5, 0.5, 0.5);
  EXPECT_FALSE(c.divergence_free);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    const Vec p = random_point(rng, 3, 1.0);
    const double rho = c.density(p);
    const double expected = -rho * (0.5 * std::sqrt(1 + p[1] * p[1] + p[2] * p[2]) + 0.5 * p[2] / 0.25);
    EXPECT_NEAR(divergence(minkowski(3), c.current, p), expected, 1e-12 + 1e-12 * std::abs(expected));
    EXPECT_NEAR(divergence_fd(minkowski(3), c.current, p), expected, 1e-6);
  }
}

TEST(Rescale, IdentityAndConstantFactor) {
  const Spacetime st = minkowski(3);
  const CurrentSpec c = boosted_gaussian_current(st, make_vec({0.5, 0}), 1.0);
  const CurrentSpec same = rescale_velocity(c, [](const Vec&) { return 1.0; });
  const CurrentSpec twice = rescale_velocity(c, [](const Vec&) { return 2.0; });
  std::mt19937_64 rng(6);
  for (int k = 0; k < 50; ++k) {
    const Vec p = random_point(rng, 3, 2.0);
    EXPECT_EQ(same.velocity(p), c.velocity(p));
    EXPECT_EQ(same.density(p), c.density(p));
    EXPECT_EQ(twice.velocity(p), Vec(2.0 * c.velocity(p)));
    EXPECT_EQ(twice.density(p), c.density(p) / 2.0);
    EXPECT_EQ(twice.current(p), c.current(p));
  }
}

TEST(Rescale, PositiveFunctionLeavesCurrentUnchanged) {
  const Spacetime st = minkowski(3);
  const CurrentSpec c = boosted_gaussian_current(st, make_vec({0.5, 0}), 1.0);
  const CurrentSpec r = rescale_velocity(c, [](const Vec& p) { return 1 + 0.5 * std::sin(p[1]); }, 7);
  std::mt19937_64 rng(8);
  for (int k = 0; k < 100; ++k) {
    const Vec p = random_point(rng, 3, 3.0);
    EXPECT_EQ(r.current(p), c.current(p));
    const Vec rho_x = r.density(p) * r.velocity(p);
    EXPECT_LT((rho_x - c.current(p)).norm(), 1e-15 * (1.0 + c.current(p).norm()));
  }
  EXPECT_FALSE(r.velocity.has_flow());
}

TEST(Rescale, NonPositiveFactorRejected) {
  const CurrentSpec c = static_gaussian_current(minkowski(3), 1.0);
  try {
    rescale_velocity(c, [](const Vec& p) { return std::sin(p[1]); }, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPositiveRescaling);
  }
}
