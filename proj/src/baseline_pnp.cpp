#include "rp3p/baseline_pnp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rp3p/error.hpp"

namespace rp3p {

double fourth_led_discrepancy(const Vec3& position, std::span<const Vec3, 4> leds, std::span<const Vec3, 4> bearings) {
  const Vec3 to4 = leds[3] - position;
  double sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double predicted = angle_between(leds[i] - position, to4);
    const double measured = inter_bearing_angle(bearings[i], bearings[3]);
    sum += std::abs(predicted - measured);
  }
  return sum;
}

PositionEstimate estimate_position_pnp(std::span<const ImageObservation> obs, const CameraIntrinsics& K) {
  if (obs.size() != 4) {
    throw Error(ErrorCode::InvalidFrame, "baseline needs 4 LED observations, got " + std::to_string(obs.size()));
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (obs[i].led.id == obs[j].led.id) {
        throw Error(ErrorCode::InvalidFrame, "duplicate LED id " + std::to_string(obs[i].led.id));
      }
    }
  }
  K.validate();

  std::array<Vec3, 4> bearings;
  std::array<Vec3, 4> leds;
  for (std::size_t i = 0; i < 4; ++i) {
    bearings[i] = back_project_bearing(obs[i].pixel, K);
    leds[i] = obs[i].led.position;
  }
  const std::span<const Vec3, 3> b3(bearings.data(), 3);
  const std::span<const Vec3, 3> s3(leds.data(), 3);

  DistanceCandidateSet candidates;
  try {
    candidates = solve_p3p(p3p_problem(b3, s3));
  } catch (const Error& e) {
    throw Error(ErrorCode::BaselineFailure, std::string("baseline distance solve failed: ") + e.what(), Stage::Distance);
  }

  PositionEstimate best;
  double best_score = std::numeric_limits<double>::infinity();
  Stage last_stage = Stage::Position;
  for (const auto& cand : candidates) {
    Vec3 position;
    try {
      const PlanarFix xy = lls_xy(cand.d, s3);
      last_stage = Stage::Height;
      position = Vec3(xy.x, xy.y, z_from_distance(xy, cand.d[0], leds[0]));
    } catch (const Error&) {
      continue;
    }
    const double score = fourth_led_discrepancy(position, leds, bearings);
    if (score < best_score) {
      best_score = score;
      best.position = position;
      best.distances = cand.d;
    }
  }
  if (!std::isfinite(best_score)) {
    throw Error(ErrorCode::BaselineFailure, "no distance candidate produced a receiver position", last_stage);
  }
  best.total_candidates = static_cast<int>(candidates.size());
  best.feasible_candidates = 1;
  return best;
}

}  // namespace rp3p
