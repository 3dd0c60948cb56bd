#include <gtest/gtest.h>

#include "common.hpp"
#include "twocontact/config_io.hpp"
#include "twocontact/verdict.hpp"

using namespace twocontact;
using namespace twocontact::testing;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_configuration(text, "cfg.json");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidConfiguration);
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ConfigIo, ShippedConfigsMatchTheReferenceValues) {
  const Configuration a = load_configuration(config_path("A.json"));
  const Configuration ref = config_A();
  EXPECT_NEAR(a.m, ref.m, 1e-15);
  EXPECT_NEAR(a.rho, ref.rho, 1e-15);
  EXPECT_NEAR(a.h, ref.h, 1e-15);
  EXPECT_NEAR(a.l1, ref.l1, 1e-15);
  EXPECT_NEAR(a.l2, ref.l2, 1e-15);
  EXPECT_NEAR(a.alpha, ref.alpha, 1e-15);
  EXPECT_NEAR(a.f_ex, ref.f_ex, 1e-14);
  EXPECT_EQ(a.mu1, ref.mu1);
  EXPECT_EQ(a.tau_ex, 0.0);
}

TEST(ConfigIo, UnitSuffixesConvert) {
  const Configuration c = parse_configuration(R"({
    "mass_g": 594, "rho_cm": 14.3, "h_m": 0.1341, "l1_mm": -51.2, "l2_mm": 168.8,
    "mu1": 0.315, "mu2": 1, "f_ex_N": 5.0, "alpha_rad": 0.25, "tau_ex_Nm": 0.01,
    "phi1_deg": 10, "phi2_rad": 0
  })");
  EXPECT_NEAR(c.m, 0.594, 1e-15);
  EXPECT_NEAR(c.rho, 0.143, 1e-15);
  EXPECT_NEAR(c.phi1, deg(10), 1e-15);
  EXPECT_EQ(c.f_ex, 5.0);
  EXPECT_EQ(c.alpha, 0.25);
  EXPECT_EQ(c.tau_ex, 0.01);
}

TEST(ConfigIo, RoundTripIsBitExact) {
  for (const char* name : {"A.json", "B.json", "D.json"}) {
    const Configuration c = load_configuration(config_path(name));
    const Configuration back = parse_configuration(configuration_to_json(c));
    EXPECT_EQ(back, c) << name;
    const StabilityVerdict v1 = stability_verdict(c);
    const StabilityVerdict v2 = stability_verdict(back);
    EXPECT_EQ(v1.verdict, v2.verdict);
    EXPECT_EQ(v1.justification, v2.justification);
    ASSERT_EQ(v1.witness.has_value(), v2.witness.has_value());
    if (v1.witness) {
      EXPECT_EQ(v1.witness->phi, v2.witness->phi);
      EXPECT_EQ(v1.witness->G, v2.witness->G);
    }
  }
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) {
    const Configuration c = random_configuration(rng);
    EXPECT_EQ(parse_configuration(configuration_to_json(c)), c);
  }
}

TEST(ConfigIo, BipedRoundTrip) {
  const BipedFile f = load_biped(config_path("biped.json"));
  const BipedSpec def;
  EXPECT_NEAR(f.spec.cylinder_positions[0], def.cylinder_positions[0], 1e-15);
  EXPECT_NEAR(f.spec.cylinder_positions[1], def.cylinder_positions[1], 1e-15);
  EXPECT_NEAR(f.spec.beam_offset, def.beam_offset, 1e-15);
  EXPECT_NEAR(f.spec.alpha, def.alpha, 1e-15);
  EXPECT_EQ(f.grid.holes, 13);
  EXPECT_EQ(f.grid.leg_lengths.size(), 5u);
  const BipedFile back = parse_biped(biped_to_json(f));
  EXPECT_EQ(back.spec, f.spec);
  EXPECT_EQ(back.grid.leg_lengths, f.grid.leg_lengths);
  EXPECT_EQ(back.grid.hole_spacing, f.grid.hole_spacing);
  EXPECT_EQ(back.grid.centre_shift, f.grid.centre_shift);
}

TEST(ConfigIo, ErrorsNameTheLine) {
  const std::string base =
      "{\n"
      "  \"mass_kg\": 0.594,\n"
      "  \"rho_mm\": 143,\n"
      "  \"h_mm\": 134.1,\n"
      "  \"l1_mm\": -51.2,\n"
      "  \"l2_mm\": 168.8,\n"
      "  \"mu1\": 0.315,\n"
      "  \"mu2\": 1,\n"
      "  \"slope_deg\": 25\n"
      "}\n";
  EXPECT_EQ(error_of(base), "");

  std::string bad = base;
  bad.replace(bad.find("  \"mu2\""), 0, "  \"wings\": 2,\n");
  EXPECT_NE(error_of(bad).find("unknown key 'wings'"), std::string::npos) << error_of(bad);
  EXPECT_NE(error_of(bad).find("cfg.json:8:"), std::string::npos) << error_of(bad);
  bad = base;
  bad.replace(bad.find("\"mu1\""), 5, "\"mu3\"");
  EXPECT_NE(error_of(bad).find("mu1"), std::string::npos) << error_of(bad);

  bad = base;
  bad.replace(bad.find("143"), 3, "\"big\"");
  EXPECT_NE(error_of(bad).find("cfg.json:3:"), std::string::npos) << error_of(bad);

  bad = base;
  bad.replace(bad.find("\"h_mm\""), 6, "\"rho_m\"");
  EXPECT_NE(error_of(bad).find("duplicates"), std::string::npos) << error_of(bad);

  bad = base;
  bad.replace(bad.find("0.594"), 5, "-1");
  EXPECT_NE(error_of(bad).find("cfg.json:2:"), std::string::npos) << error_of(bad);

  bad = base;
  bad.replace(bad.find("  \"mu2\": 1,\n"), 12, "");
  EXPECT_NE(error_of(bad).find("mu2"), std::string::npos) << error_of(bad);

  bad = base;
  bad.replace(bad.find("168.8,"), 6, "168.8");
  EXPECT_NE(error_of(bad).find("cfg.json:"), std::string::npos) << error_of(bad);
}

TEST(ConfigIo, MissingFileIsAnIoError) {
  try {
    load_configuration("/nonexistent/cfg.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}
