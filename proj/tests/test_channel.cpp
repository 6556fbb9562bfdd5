#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "rp3p/channel.hpp"
#include "rp3p/error.hpp"
#include "support.hpp"

using namespace rp3p;
using testing_support::kDeg;

namespace {

LedSource down_led(const Vec3& pos) { return {LedBeacon{1, pos, 60 * kDeg, 2.2}, -Vec3::UnitZ()}; }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no rp3p::Error thrown";
  return ErrorCode::Io;
}

}  // namespace

TEST(Lambertian, Examples) {
  EXPECT_NEAR(lambertian_order(60 * kDeg), 1.0, 1e-15);
  EXPECT_NEAR(lambertian_order(30 * kDeg), -std::log(2.0) / std::log(std::cos(30 * kDeg)), 1e-15);
  EXPECT_NEAR(lambertian_order(30 * kDeg), 4.8188, 1e-4);
  const double steep = lambertian_order(89.9 * kDeg);
  EXPECT_TRUE(std::isfinite(steep));
  EXPECT_GT(steep, 0.0);
  EXPECT_LT(lambertian_order(89.9 * kDeg), lambertian_order(10 * kDeg));
}

TEST(Lambertian, OutOfRange) {
  for (double a : {0.0, -0.1, 90 * kDeg, 2.0}) {
    EXPECT_EQ(code_of([a] { lambertian_order(a); }), ErrorCode::InvalidParameter) << a;
  }
}

TEST(Concentrator, GainInsideAndAtBoundary) {
  PdParams pd;
  EXPECT_NEAR(concentrator_gain(0.0, pd), 3.0, 1e-14);
  EXPECT_NEAR(concentrator_gain(pd.fov, pd), 3.0, 1e-14);
  EXPECT_EQ(concentrator_gain(pd.fov + 1e-12, pd), 0.0);
  EXPECT_EQ(concentrator_gain(std::numbers::pi, pd), 0.0);
}

TEST(ChannelGain, OnAxisExample) {
  const PdParams pd;
  const double h = channel_gain(down_led(Vec3(2.5, 2.5, 3)), Vec3(2.5, 2.5, 1), Vec3::UnitZ(), pd);
  EXPECT_NEAR(h, 2.0e-4 / (2.0 * std::numbers::pi * 4.0) * 3.0, 1e-18);
  EXPECT_NEAR(h, 2.3873e-5, 1e-9);
  EXPECT_NEAR(received_power(down_led(Vec3(2.5, 2.5, 3)), Vec3(2.5, 2.5, 1), Vec3::UnitZ(), pd), 5.2521e-5, 1e-9);
}

TEST(ChannelGain, ZeroOutsideFovAndBehindPanel) {
  const PdParams pd;
  // psi = 63.4 deg > 60 deg
  EXPECT_EQ(channel_gain(down_led(Vec3(2.5, 2.5, 3)), Vec3(0.5, 2.5, 2), Vec3::UnitZ(), pd), 0.0);
  // receiver above a down-facing LED
  EXPECT_EQ(channel_gain(down_led(Vec3(2.5, 2.5, 2)), Vec3(2.5, 2.6, 2.5), -Vec3::UnitZ(), pd), 0.0);
  EXPECT_EQ(received_power(down_led(Vec3(2.5, 2.5, 2)), Vec3(2.5, 2.6, 2.5), -Vec3::UnitZ(), pd), 0.0);
}

TEST(ChannelGain, CoincidentPointsAreDegenerate) {
  EXPECT_EQ(code_of([] { channel_gain(down_led(Vec3(1, 1, 1)), Vec3(1, 1, 1), Vec3::UnitZ(), PdParams{}); }),
            ErrorCode::DegenerateGeometry);
}

TEST(ChannelGain, MatchesLonghandFormula) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PdParams pd;
  int compared = 0;
  for (int n = 0; n < 2000; ++n) {
    const double semi = (10 + 40 * (u(rng) + 1)) * kDeg;
    const Vec3 normal = testing_support::tilted_normal(40 * kDeg * std::abs(u(rng)), 3.0 * u(rng));
    const LedSource led{LedBeacon{1, Vec3(2.5, 2.5, 3), semi, 2.2}, normal};
    const Vec3 rx(2.5 + 2 * u(rng), 2.5 + 2 * u(rng), 1.5 + 1.4 * u(rng));
    const Vec3 rn = Vec3(0.4 * u(rng), 0.4 * u(rng), 1.0).normalized();
    const double expect = testing_support::oracle_gain(led.beacon.position, normal, semi, rx, rn, pd.area,
                                                       pd.filter_gain, pd.refractive_index, pd.fov);
    const double got = channel_gain(led, rx, rn, pd);
    if (expect > 0.0) ++compared;
    EXPECT_NEAR(got, expect, 1e-12 * std::max(expect, 1e-12));
  }
  EXPECT_GT(compared, 500);
}

TEST(ChannelGain, UnitOrderClosedForm) {
  // m = 1, phi = psi: H = 2 A g cos^2(phi) / (2 pi d^2)
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const PdParams pd;
  for (int n = 0; n < 100; ++n) {
    const Vec3 rx(5 * u(rng), 5 * u(rng), 2.5 * u(rng));
    const Vec3 led_pos(2.5, 2.5, 3.0);
    const Vec3 to_led = led_pos - rx;
    if (std::acos(to_led.normalized().z()) > 55 * kDeg) continue;
    const double d = to_led.norm();
    const double c = to_led.z() / d;
    const double expect = 2.0 * pd.area * 3.0 * c * c / (2.0 * std::numbers::pi * d * d);
    EXPECT_NEAR(channel_gain(down_led(led_pos), rx, Vec3::UnitZ(), pd), expect, 1e-12 * expect);
  }
}

TEST(ChannelGain, DecreasingInDistanceAndInverseSquare) {
  const PdParams pd;
  const Vec3 led(2.5, 2.5, 3.0);
  const Vec3 dir = Vec3(0.3, 0.2, -1.0).normalized();
  double prev = std::numeric_limits<double>::infinity();
  for (double d = 0.2; d < 3.0; d += 0.1) {
    const double h = channel_gain(down_led(led), led + d * dir, Vec3::UnitZ(), pd);
    EXPECT_LT(h, prev);
    prev = h;
  }
  const double p1 = received_power(down_led(led), led + 1.0 * dir, Vec3::UnitZ(), pd);
  const double p2 = received_power(down_led(led), led + 2.0 * dir, Vec3::UnitZ(), pd);
  EXPECT_NEAR(p2, p1 / 4.0, 1e-15 * p1);
}

TEST(ChannelGain, ContinuousInsideFovThenZero) {
  const PdParams pd;
  const Vec3 led(2.5, 2.5, 3.0);
  const double d = 1.5;
  double prev = -1.0;
  for (double psi = 0.0; psi < pd.fov; psi += 1e-4) {
    const Vec3 rx = led - d * Vec3(std::sin(psi), 0, std::cos(psi));
    const LedSource aimed{LedBeacon{1, led, 60 * kDeg, 2.2}, (rx - led).normalized()};
    const double h = channel_gain(aimed, rx, Vec3::UnitZ(), pd);
    if (prev >= 0.0) EXPECT_LT(std::abs(h - prev), 1e-3 * prev);
    prev = h;
  }
  const Vec3 rx = led - d * Vec3(std::sin(pd.fov + 1e-6), 0, std::cos(pd.fov + 1e-6));
  const LedSource aimed{LedBeacon{1, led, 60 * kDeg, 2.2}, (rx - led).normalized()};
  EXPECT_EQ(channel_gain(aimed, rx, Vec3::UnitZ(), pd), 0.0);
}

TEST(ReceivedPower, LinearInTransmitPower) {
  const PdParams pd;
  LedSource led = down_led(Vec3(2, 3, 3));
  const double p1 = received_power(led, Vec3(2.4, 2.1, 0.7), Vec3::UnitZ(), pd);
  led.beacon.tx_power = 2.2 * 3.5;
  EXPECT_NEAR(received_power(led, Vec3(2.4, 2.1, 0.7), Vec3::UnitZ(), pd), 3.5 * p1, 1e-15 * p1);
}

TEST(Snr, FixedStdExamples) {
  PdParams pd;
  NoiseParams noise = NoiseParams::noiseless();
  noise.power_noise_std = 2e-6;
  EXPECT_NEAR(snr_db(2e-6, pd, noise), 0.0, 1e-12);
  EXPECT_NEAR(snr_db(2e-6 * std::sqrt(10.0), pd, noise), 10.0, 1e-12);
  EXPECT_EQ(snr_db(0.0, pd, noise), -std::numeric_limits<double>::infinity());
  noise.power_noise_std = 0.0;
  EXPECT_EQ(code_of([&] { snr_db(1e-5, pd, noise); }), ErrorCode::InvalidParameter);
}

TEST(Snr, FixedSnrMode) {
  const NoiseParams noise = NoiseParams::from_snr(13.6);
  EXPECT_DOUBLE_EQ(snr_db(3e-5, PdParams{}, noise), 13.6);
  EXPECT_EQ(snr_db(0.0, PdParams{}, noise), -std::numeric_limits<double>::infinity());
  // The per-measurement std it implies reproduces the target under the formula.
  NoiseParams fixed = NoiseParams::noiseless();
  fixed.power_noise_std = NoiseParams::std_for_snr(3e-5, 13.6);
  EXPECT_NEAR(snr_db(3e-5, PdParams{}, fixed), 13.6, 1e-12);
}

TEST(MeasuredPower, ZeroStdIsExact) {
  std::mt19937_64 rng(1);
  const NoiseParams noise = NoiseParams::noiseless();
  for (double p : {0.0, 1e-7, 5.2521e-5}) EXPECT_EQ(sample_measured_power(p, noise, rng), p);
}

TEST(MeasuredPower, AveragingShrinksStd) {
  NoiseParams noise = NoiseParams::noiseless();
  noise.power_noise_std = 3e-6;
  noise.n_power_averages = 1000;
  std::mt19937_64 rng(12345);
  const int n = 10000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_measured_power(5e-5, noise, rng) - 5e-5;
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  const double expect = 3e-6 / std::sqrt(1000.0);
  EXPECT_NEAR(sd, expect, 0.1 * expect);
}

TEST(MeasuredPower, SeedDeterminism) {
  const NoiseParams noise = NoiseParams::from_snr(13.6);
  std::mt19937_64 a(99), b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_measured_power(4e-5, noise, a), sample_measured_power(4e-5, noise, b));
}

TEST(Params, Validation) {
  PdParams pd;
  pd.refractive_index = 0.9;
  EXPECT_EQ(code_of([&] { pd.validate(); }), ErrorCode::InvalidParameter);
  pd = PdParams{};
  pd.fov = 0.0;
  EXPECT_EQ(code_of([&] { pd.validate(); }), ErrorCode::InvalidParameter);
  NoiseParams noise;
  noise.n_power_averages = 0;
  EXPECT_EQ(code_of([&] { noise.validate(); }), ErrorCode::InvalidParameter);
  noise = NoiseParams{};
  noise.pixel_noise_std = -1.0;
  EXPECT_EQ(code_of([&] { noise.validate(); }), ErrorCode::InvalidParameter);
  LedSource led = down_led(Vec3(1, 1, 3));
  led.normal = Vec3(0, 0, -2);
  EXPECT_EQ(code_of([&] { led.validate(); }), ErrorCode::InvalidParameter);
}
