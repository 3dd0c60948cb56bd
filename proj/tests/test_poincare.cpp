#include <gtest/gtest.h>

#include <algorithm>

#include "common.hpp"
#include "twocontact/poincare.hpp"
#include "twocontact/verdict.hpp"

using namespace twocontact;
using namespace twocontact::testing;

namespace {

constexpr double kHalfPi = kPi / 2;

RGFunction synthetic(std::function<double(double)> r, std::function<double(double)> g) {
  return [r, g](double phi) {
    RGSample s;
    s.phi = phi;
    s.r = r(phi);
    s.g = g(phi);
    return s;
  };
}

class PaperMaps : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    a_ = new RGMap(build_rg_map(config_A()));
    b_ = new RGMap(build_rg_map(config_B()));
    d_ = new RGMap(build_rg_map(config_D()));
  }
  static void TearDownTestSuite() {
    delete a_;
    delete b_;
    delete d_;
  }
  static RGMap* a_;
  static RGMap* b_;
  static RGMap* d_;
};
RGMap* PaperMaps::a_ = nullptr;
RGMap* PaperMaps::b_ = nullptr;
RGMap* PaperMaps::d_ = nullptr;

}  // namespace

TEST(ReturnMap, HalvingMapHasOneFixedPointAtZero) {
  RGOptions opts;
  opts.grid = 201;
  const RGMap map = build_rg_map(synthetic([](double p) { return p / 2; }, [](double) { return 0.5; }),
                                 opts);
  ASSERT_EQ(map.fixedPoints.size(), 1u);
  EXPECT_NEAR(map.fixedPoints[0].phi, 0, 1e-6);
  EXPECT_EQ(map.fixedPoints[0].stability, FixedPointStability::Attractive);
  EXPECT_NEAR(map.fixedPoints[0].slope, 0.5, 1e-6);
}

TEST(ReturnMap, IdentityMapEndpointsAreSetOne) {
  const auto f = synthetic([](double p) { return p; }, [](double) { return 0.5; });
  const std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  for (int side : {-1, 1}) {
    const EndpointRecord e = endpoint_analysis(f, side, eps);
    EXPECT_EQ(e.set, EndpointSet::Set1);
    EXPECT_NEAR(e.G_pm, 0.5, 1e-12);
    EXPECT_TRUE(e.attractive());
  }
}

TEST(ReturnMap, BoundedEndpointIsSetTwo) {
  // R tends to 0.3 and G diverges like 0.4 / (pi/2 - |phi|).
  const auto f = synthetic([](double) { return 0.3; },
                           [](double p) { return 0.4 / (kHalfPi - std::abs(p)); });
  const EndpointRecord e = endpoint_analysis(f, 1, {1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
  EXPECT_EQ(e.set, EndpointSet::Set2);
  EXPECT_NEAR(e.R_pm, 0.3, 1e-12);
  EXPECT_NEAR(e.G_eps_limit, 0.4, 1e-9);
  EXPECT_TRUE(e.not_attractive());
}

TEST(ReturnMap, SerialAndParallelSamplingAgree) {
  const Simulator sim(config_D());
  const RGFunction f = rg_function(sim);
  const std::vector<double> phis = uniform_grid(401, 1e-3);
  const auto s = sample_serial(f, phis);
  for (int threads : {1, 2, 4}) {
    const auto p = sample_parallel(f, phis, threads);
    ASSERT_EQ(s.size(), p.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
      EXPECT_EQ(s[k].phi, p[k].phi);
      EXPECT_EQ(s[k].r, p[k].r);
      EXPECT_EQ(s[k].g, p[k].g);
    }
  }
}

TEST(ReturnMap, SectionSpeedScalesOut) {
  const Simulator sim(config_A());
  for (double phi : {-1.3, -0.2, 0.4, 1.2}) {
    const RGSample a = rg_eval(sim, phi);
    for (double s : {1e-3, 0.3, 7.0}) {
      const RGSample b = rg_eval(sim, phi, s);
      ASSERT_EQ(a.defined(), b.defined());
      if (a.defined()) {
        EXPECT_LT(rel_diff(*a.r, *b.r), 1e-12);
        EXPECT_LT(rel_diff(*a.g, *b.g), 1e-12);
      }
    }
  }
}

TEST_F(PaperMaps, SamplesAreWellFormed) {
  for (const RGMap* m : {a_, b_, d_}) {
    ASSERT_GE(m->samples.size(), 2001u);
    EXPECT_TRUE(std::is_sorted(m->samples.begin(), m->samples.end(),
                               [](const RGSample& x, const RGSample& y) { return x.phi < y.phi; }));
    for (const RGSample& s : m->samples) {
      if (!s.defined()) continue;
      EXPECT_GT(*s.g, 0);
      EXPECT_GT(*s.r, -kHalfPi);
      EXPECT_LT(*s.r, kHalfPi);
    }
  }
}

TEST_F(PaperMaps, ConfigAHasThreeFixedPoints) {
  const auto& fps = a_->fixedPoints;
  ASSERT_EQ(fps.size(), 3u);
  EXPECT_LT(std::abs(fps[1].phi), 1e-3);
  EXPECT_EQ(fps[0].stability, FixedPointStability::Repulsive);
  EXPECT_EQ(fps[1].stability, FixedPointStability::Attractive);
  EXPECT_EQ(fps[2].stability, FixedPointStability::Repulsive);
  ASSERT_TRUE(a_->max_G().has_value());
  EXPECT_LT(*a_->max_G(), 1);
}

TEST_F(PaperMaps, FixedPointsSolveTheMap) {
  for (const auto& [cfg, map] : {std::pair{config_A(), a_}, std::pair{config_D(), d_}}) {
    const Simulator sim(cfg);
    for (const FixedPoint& fp : map->fixedPoints) {
      const RGSample s = rg_eval(sim, fp.phi);
      ASSERT_TRUE(s.defined());
      EXPECT_LT(std::abs(*s.r - fp.phi), 1e-6);
      EXPECT_NEAR(*s.g, fp.G, 1e-9);
    }
  }
}

TEST_F(PaperMaps, ConfigAEndpointsAreAttractiveSetOne) {
  for (int side : {-1, 1}) {
    const EndpointRecord& e = a_->endpoint(side);
    EXPECT_EQ(e.set, EndpointSet::Set1);
    EXPECT_TRUE(e.attractive());
    EXPECT_LT(e.fit_residual, 0.02);
    EXPECT_LT(e.rprime_residual, 0.02);
  }
}

TEST_F(PaperMaps, EndpointFitsConverge) {
  for (const RGMap* m : {a_, b_, d_}) {
    for (int side : {-1, 1}) {
      const EndpointRecord& e = m->endpoint(side);
      EXPECT_TRUE(e.set == EndpointSet::Set1 || e.set == EndpointSet::Set2);
      EXPECT_LT(e.fit_residual, 0.02);
    }
  }
}

TEST_F(PaperMaps, ConfigsBAndDHaveNearlyConstantR) {
  const Configuration cfgs[] = {config_B(), config_D()};
  for (const Configuration& cfg : cfgs) {
    const Simulator sim(cfg);
    const RGSample s0 = rg_eval(sim, 0.0);
    ASSERT_TRUE(s0.defined());
    for (const RGSample& s : sample_serial(rg_function(sim),
                                           [] {
                                             std::vector<double> v;
                                             for (int k = 0; k <= 400; ++k)
                                               v.push_back(-kHalfPi + 0.3 +
                                                           (kPi - 0.35) * k / 400.0);
                                             return v;
                                           }())) {
      ASSERT_TRUE(s.defined()) << s.phi;
      EXPECT_LT(std::abs(*s.r - *s0.r), 0.05) << s.phi;
    }
  }
}

TEST_F(PaperMaps, ConfigDHasOneGrowingAttractiveFixedPoint) {
  ASSERT_EQ(d_->fixedPoints.size(), 1u);
  EXPECT_EQ(d_->fixedPoints[0].stability, FixedPointStability::Attractive);
  EXPECT_GT(d_->fixedPoints[0].G, 1);
}

TEST_F(PaperMaps, ConfigAHasAnAllSafePartition) {
  const auto p = build_stable_partition(*a_);
  ASSERT_TRUE(p.has_value());
  for (const PartitionInterval& iv : p->intervals) EXPECT_TRUE(iv.safe);
}

TEST_F(PaperMaps, ConfigDHasNoStablePartition) {
  EXPECT_FALSE(build_stable_partition(*d_).has_value());
  // The interval holding the growing fixed point is neither safe nor transient.
  const double phi = d_->fixedPoints[0].phi;
  const Partition p = label_partition(*d_, {phi - 0.01, phi + 0.01}, 1e-3);
  ASSERT_EQ(p.intervals.size(), 3u);
  EXPECT_FALSE(p.intervals[1].safe);
  EXPECT_FALSE(p.intervals[1].transient);
}

TEST(Partition, MonotoneMapWithTwoFixedPoints) {
  // Fixed points at -0.5 (repulsive) and 0.5 (attractive); R is increasing;
  // G exceeds 1 only on a band that every orbit leaves for good.
  const auto f = synthetic(
      [](double p) { return p - 0.3 * (p * p - 0.25) * std::cos(p) * std::cos(p); },
      [](double p) { return p > 0.9 && p < 1.2 ? 1.5 : 0.5; });
  RGOptions opts;
  opts.grid = 801;
  const RGMap map = build_rg_map(f, opts);
  ASSERT_EQ(map.fixedPoints.size(), 2u);
  EXPECT_TRUE(map.non_decreasing(1e-3));
  const auto p = build_stable_partition(map);
  ASSERT_TRUE(p.has_value());
  EXPECT_TRUE(p->stable());
  for (const auto& [from, to] : p->edges) EXPECT_NE(from, to);
  bool band_transient = false;
  for (const PartitionInterval& iv : p->intervals) {
    if (iv.lo < 1.0 && iv.hi > 1.0) band_transient = iv.transient && !iv.safe;
  }
  EXPECT_TRUE(band_transient);
}

TEST(Partition, CyclesAreNotTransient) {
  // R swaps two intervals: both are on a cycle.
  const auto f = synthetic([](double p) { return -p; }, [](double) { return 1.2; });
  RGOptions opts;
  opts.grid = 201;
  const RGMap map = build_rg_map(f, opts);
  const Partition p = label_partition(map, {-0.01, 0.01}, 1e-3);
  ASSERT_EQ(p.intervals.size(), 3u);
  EXPECT_TRUE(p.intervals[0].on_cycle);
  EXPECT_TRUE(p.intervals[2].on_cycle);
  EXPECT_FALSE(p.intervals[0].transient);
  EXPECT_FALSE(p.stable());
}
