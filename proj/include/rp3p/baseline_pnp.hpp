#pragma once

#include <span>

#include "rp3p/estimator.hpp"

namespace rp3p {

/// Camera-only 4-LED baseline. Candidate distances come from LEDs 1-3; each
/// candidate is turned into a receiver position and scored by how well the
/// angles it predicts between LED 4 and LEDs 1-3 match the measured ones.
/// The best-scoring position is returned.
///
/// Takes image observations only, so it cannot read received powers.
/// Throws BaselineFailure (tagged with the failing stage) when no candidate
/// yields a position.
PositionEstimate estimate_position_pnp(std::span<const ImageObservation> observations, const CameraIntrinsics& K);

/// Sum over i = 1..3 of |angle(LED i, LED 4) predicted from `position` minus
/// the measured angle between their bearings|.
double fourth_led_discrepancy(const Vec3& position, std::span<const Vec3, 4> leds,
                              std::span<const Vec3, 4> bearings);

}  // namespace rp3p
