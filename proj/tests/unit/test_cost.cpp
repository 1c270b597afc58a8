#include <gtest/gtest.h>

#include <cmath>

#include "rrambb/cost.hpp"
#include "rrambb/types.hpp"

using namespace rrambb;

namespace {

double round_sig(double v, int digits) {
  const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(v)))));
  return std::round(v * scale) / scale;
}

}  // namespace

TEST(DigitalCost, PublishedArithmetic) {
  const DigitalCost c = digital_cost(DigitalWorkload{}, combined_65nm_profile());
  // The published expressions, transcribed term by term.
  const double latency = 688.0 * 14 * 160 / 250e6 + 1024.0 * (24 + 12.0 * (14 * 160 - 4)) / 625e6;
  const double energy = (14.0 * 160 / 2.07) * 1e-6 + 153.6 * 12 * (14.0 * 160 - 4) * 1024 * 1e-12;
  EXPECT_NEAR(c.latency(), latency, 1e-15);
  EXPECT_NEAR(c.energy(), energy, 1e-15);
  EXPECT_DOUBLE_EQ(round_sig(c.latency(), 3), 0.0502);
  EXPECT_DOUBLE_EQ(round_sig(c.energy(), 2), 0.0053);
}

TEST(DigitalCost, PilotOnlyWorkload) {
  const ProcessorProfile p = combined_65nm_profile();
  const DigitalCost c = digital_cost({1024, 4, 4, 4}, p);
  EXPECT_DOUBLE_EQ(c.fft_latency, 688.0 * 4 / 250e6);
  EXPECT_DOUBLE_EQ(c.fft_energy, 4 / 2.07e6);
  EXPECT_DOUBLE_EQ(c.detect_latency, 1024.0 * 24 / 625e6);
  EXPECT_EQ(c.detect_energy, 0);
}

TEST(DigitalCost, AntennaScaling) {
  const ProcessorProfile p = combined_65nm_profile();
  const DigitalCost a = digital_cost({64, 4, 100, 4}, p);
  const DigitalCost b = digital_cost({64, 8, 100, 4}, p);
  EXPECT_DOUBLE_EQ(b.detect_energy / a.detect_energy, 4.0);
  EXPECT_DOUBLE_EQ(b.fft_latency, a.fft_latency);
  EXPECT_GT(b.detect_latency, a.detect_latency);
}

TEST(ProcessorProfile, MissingCoefficientNamed) {
  ProcessorProfile p = combined_65nm_profile();
  p.ffts_per_joule = 0;
  try {
    digital_cost(DigitalWorkload{}, p);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "ffts_per_joule");
  }
}
