#include <gtest/gtest.h>

#include <set>

#include "common.hpp"
#include "twocontact/consistency.hpp"
#include "twocontact/model.hpp"

using namespace twocontact;
using namespace twocontact::testing;

namespace {

// Generated by tests/fixtures/tableau_A.py (30-digit closed form).
const Vec3 kb_ex(-8.8908793908295361394, -8.8908793908295361394, 4.145885147676261469);
const Vec3 kB1z(1.8993165719166990623, 0.97198697325842907534, -0.56524954172760911477);
const Vec3 kB2z(0.97198697325842907534, 4.0292767438349129385, 1.8635570828832113002);
const Vec3 kB1x(-0.56524954172760911477, 1.8635570828832113002, 3.1639697215030972183);
const Vec3 kB2x(-0.56524954172760911477, 1.8635570828832113002, 3.1639697215030972183);

void expect_vec_near(const Vec3& a, const Vec3& b, double rel) {
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(a[k], b[k], rel * std::max(1.0, std::abs(b[k]))) << "component " << k;
  }
}

ModeSolution solve(const Configuration& cfg, const char* word) {
  return mode_dynamics(build_tableau(cfg), *ContactMode::parse(word));
}

}  // namespace

TEST(Model, ConfigATableauMatchesFixture) {
  const ZodTableau tab = build_tableau(config_A());
  expect_vec_near(tab.b_ex, kb_ex, 1e-13);
  expect_vec_near(tab.B1z, kB1z, 1e-13);
  expect_vec_near(tab.B2z, kB2z, 1e-13);
  expect_vec_near(tab.B1x, kB1x, 1e-13);
  expect_vec_near(tab.B2x, kB2x, 1e-13);
}

TEST(Model, FreeFlightOnSlopeIsGravity) {
  const Configuration cfg = config_A();
  const ModeSolution ff = solve(cfg, "FF");
  const double g = kStandardGravity;
  expect_vec_near(ff.qdd, Vec3(-g * std::cos(cfg.alpha), -g * std::cos(cfg.alpha),
                               g * std::sin(cfg.alpha)),
                  1e-14);
  EXPECT_EQ(ff.forces(), Vec4::Zero());
}

TEST(Model, ZeroLoadHasZeroLoadVector) {
  Configuration cfg = config_A();
  cfg.f_ex = 0;
  cfg.tau_ex = 0;
  EXPECT_EQ(build_tableau(cfg).b_ex, Vec3::Zero());
}

TEST(Model, StickStickOfConfigAIsAnEquilibrium) {
  const Configuration cfg = config_A();
  const ModeSolution ss = solve(cfg, "SS");
  EXPECT_GT(ss.f1z, 0);
  EXPECT_GT(ss.f2z, 0);
  EXPECT_LE(std::abs(ss.f1x), cfg.mu1 * ss.f1z);
  EXPECT_LE(std::abs(ss.f2x), cfg.mu2 * ss.f2z);
  expect_vec_near(ss.qdd, Vec3::Zero(), 1e-12);
  EXPECT_NEAR(ss.ddx1, 0, 1e-12);
  // The forces balance the load.
  const double fx = ss.f1x + ss.f2x, fz = ss.f1z + ss.f2z;
  EXPECT_NEAR(fx, -cfg.f_ex * std::sin(cfg.alpha), 1e-12);
  EXPECT_NEAR(fz, cfg.f_ex * std::cos(cfg.alpha), 1e-12);
}

TEST(Model, CentreOfMassAboveContact1CarriesAllWeight) {
  const Configuration cfg = Configuration::slope(1.3, 0.12, 0.1, 0.0, 0.08, 0.5, 0.5, 0.0);
  const ModeSolution ss = solve(cfg, "SS");
  EXPECT_NEAR(ss.f2z, 0, 1e-12);
  EXPECT_NEAR(ss.f1z, cfg.m * kStandardGravity, 1e-12);
}

TEST(Model, ForcesEnterLinearlyThroughTheColumns) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Configuration cfg = random_configuration(rng);
    const ZodTableau tab = build_tableau(cfg);
    for (const ContactMode mode : ContactMode::all()) {
      if (!is_admissible(tab, mode)) continue;
      ModeSolution s;
      try {
        s = mode_dynamics(tab, mode);
      } catch (const Error&) {
        continue;
      }
      const Vec3 rhs = tab.b_ex + tab.B1z * s.f1z + tab.B1x * s.f1x + tab.B2z * s.f2z +
                       tab.B2x * s.f2x;
      const double scale = std::max({tab.accel_scale, s.qdd.norm(), 1.0});
      EXPECT_LT((s.qdd - rhs).norm(), 1e-10 * scale) << mode.name();
      for (int i = 0; i < 2; ++i) {
        switch (mode.at(i)) {
          case Letter::F:
            EXPECT_EQ(s.fz(i), 0);
            EXPECT_EQ(s.fx(i), 0);
            break;
          case Letter::P:
            EXPECT_NEAR(s.fx(i), -cfg.mu(i) * s.fz(i), 1e-12 * tab.force_scale());
            break;
          case Letter::N:
            EXPECT_NEAR(s.fx(i), cfg.mu(i) * s.fz(i), 1e-12 * tab.force_scale());
            break;
          case Letter::S:
            break;
        }
      }
    }
  }
}

TEST(Model, DoublingTheLoadDoublesFreeFlight) {
  Configuration cfg = config_D();
  const Vec3 a = solve(cfg, "FF").qdd;
  cfg.f_ex *= 2;
  EXPECT_EQ(solve(cfg, "FF").qdd, 2 * a);
}

TEST(Model, AccelerationsAreAffineInTheLoad) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Configuration cfg = random_configuration(rng);
    const Vec3 a0 = build_tableau(cfg).b_ex;
    cfg.f_ex *= 3;
    cfg.tau_ex *= 3;
    const Vec3 a1 = build_tableau(cfg).b_ex;
    EXPECT_LT((a1 - 3 * a0).norm(), 1e-13 * a1.norm());
  }
}

TEST(Model, DelassusMatrixIsReciprocal) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const ZodTableau tab = build_tableau(random_configuration(rng));
    EXPECT_LT((tab.delassus - tab.delassus.transpose()).norm(), 1e-14 * tab.delassus.norm());
    // Positive semidefinite with the rigid-body rank deficiency.
    const Eigen::SelfAdjointEigenSolver<Mat4> eig(tab.delassus);
    EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-12 * eig.eigenvalues().maxCoeff());
  }
}

TEST(Model, TableauDoesNotDependOnTheState) {
  const ZodTableau a = build_tableau(config_A());
  const ZodTableau b = build_tableau(config_A());
  EXPECT_EQ(a.delassus, b.delassus);
  EXPECT_EQ(a.load, b.load);
}

TEST(Model, SixteenWordsRoundTrip) {
  std::set<std::string> names;
  for (const ContactMode mode : ContactMode::all()) {
    names.insert(mode.name());
    EXPECT_EQ(ContactMode::parse(mode.name()), mode);
  }
  EXPECT_EQ(names.size(), 16u);
  EXPECT_FALSE(ContactMode::parse("SX").has_value());
  EXPECT_FALSE(ContactMode::parse("S").has_value());
}

TEST(Model, ValidationRejectsBadConfigurations) {
  auto kind_of = [](Configuration c) -> std::optional<ErrorKind> {
    try {
      validate(c);
    } catch (const Error& e) {
      return e.kind();
    }
    return std::nullopt;
  };
  EXPECT_FALSE(kind_of(config_A()).has_value());
  Configuration c = config_A();
  c.m = 0;
  EXPECT_EQ(kind_of(c), ErrorKind::InvalidConfiguration);
  c = config_A();
  c.rho = -1;
  EXPECT_EQ(kind_of(c), ErrorKind::InvalidConfiguration);
  c = config_A();
  c.mu2 = -0.1;
  EXPECT_EQ(kind_of(c), ErrorKind::InvalidConfiguration);
  c = config_A();
  c.phi1 = kPi / 2;
  EXPECT_EQ(kind_of(c), ErrorKind::DegenerateGeometry);
  c = config_A();
  c.l2 = c.l1;
  EXPECT_EQ(kind_of(c), ErrorKind::InvalidConfiguration);
}
