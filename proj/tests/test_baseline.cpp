#include <random>
#include <type_traits>

#include <gtest/gtest.h>

#include "rp3p/baseline_pnp.hpp"
#include "rp3p/error.hpp"
#include "support.hpp"

using namespace rp3p;
using testing_support::kDeg;

// The baseline sees images only.
template <class T>
concept HasPower = requires(T t) { t.power; };
static_assert(!HasPower<ImageObservation>);
static_assert(HasPower<LedMeasurement>);
static_assert(std::is_invocable_r_v<PositionEstimate, decltype(&estimate_position_pnp),
                                    std::span<const ImageObservation>, const CameraIntrinsics&>);

TEST(Pnp, ExactRecoveryNoiseless) {
  std::mt19937_64 rng(101);
  for (double theta : {0.0, 30 * kDeg, 60 * kDeg}) {
    for (int n = 0; n < 1000; ++n) {
      const auto s = testing_support::random_scene(rng, theta, 4, true);
      const auto images = s.images(4);
      const PositionEstimate est = estimate_position_pnp(images, s.K);
      EXPECT_LT((est.position - s.receiver).norm(), 1e-6);
      for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(est.distances[i], s.distance(i), 1e-6 * s.distance(i));
    }
  }
}

TEST(Pnp, PicksSmallestFourthLedDiscrepancy) {
  std::mt19937_64 rng(7);
  int multi = 0;
  for (int n = 0; n < 500; ++n) {
    const auto s = testing_support::random_scene(rng, 0.0, 4);
    auto images = s.images(4);
    for (auto& o : images) o.pixel.u += 1.5;
    std::array<Vec3, 4> bearings, leds;
    for (std::size_t i = 0; i < 4; ++i) {
      bearings[i] = back_project_bearing(images[i].pixel, s.K);
      leds[i] = images[i].led.position;
    }
    PositionEstimate est;
    try {
      est = estimate_position_pnp(images, s.K);
    } catch (const Error&) {
      continue;
    }
    const double chosen = fourth_led_discrepancy(est.position, leds, bearings);
    // Score every candidate the solver would have produced.
    const std::span<const Vec3, 3> b3(bearings.data(), 3), s3(leds.data(), 3);
    const auto cands = solve_p3p(p3p_problem(b3, s3));
    if (cands.size() > 1) ++multi;
    for (const auto& c : cands) {
      try {
        const PlanarFix xy = lls_xy(c.d, s3);
        const Vec3 p(xy.x, xy.y, z_from_distance(xy, c.d[0], leds[0]));
        EXPECT_LE(chosen, fourth_led_discrepancy(p, leds, bearings));
      } catch (const Error&) {
      }
    }
  }
  EXPECT_GT(multi, 50);
}

TEST(Pnp, FrameChecks) {
  std::mt19937_64 rng(1);
  const auto s = testing_support::random_scene(rng, 0.0, 4);
  auto images = s.images(4);
  const auto three = s.images(3);
  try {
    estimate_position_pnp(three, s.K);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidFrame);
  }
  images[3].led.id = images[1].led.id;
  try {
    estimate_position_pnp(images, s.K);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidFrame);
  }
}

TEST(Pnp, SolverFailureBecomesBaselineFailure) {
  std::mt19937_64 rng(1);
  const auto s = testing_support::random_scene(rng, 0.0, 4);
  auto images = s.images(4);
  images[1].pixel = images[0].pixel;
  try {
    estimate_position_pnp(images, s.K);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BaselineFailure);
    EXPECT_EQ(e.stage(), Stage::Distance);
  }
}

TEST(Pnp, DiscrepancyVanishesAtTruth) {
  std::mt19937_64 rng(2);
  const auto s = testing_support::random_scene(rng, 0.0, 4);
  std::array<Vec3, 4> bearings, leds;
  for (std::size_t i = 0; i < 4; ++i) {
    bearings[i] = s.camera_point(i).normalized();
    leds[i] = s.leds[i];
  }
  EXPECT_LT(fourth_led_discrepancy(s.receiver, leds, bearings), 1e-12);
  EXPECT_GT(fourth_led_discrepancy(s.receiver + Vec3(0.1, 0, 0), leds, bearings), 1e-3);
}
