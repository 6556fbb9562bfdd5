#pragma once

#include <array>
#include <random>
#include <span>
#include <vector>

#include "rp3p/channel.hpp"
#include "rp3p/geometry.hpp"
#include "rp3p/p3p.hpp"

namespace rp3p {

/// One LED as seen by the camera: the known beacon plus its image.
struct ImageObservation {
  LedBeacon led;
  PixelCoord pixel;
};

/// One LED as seen by the whole receiver: image plus averaged RSS.
struct LedMeasurement {
  ImageObservation image;
  double power = 0.0;  // W
};

/// Input of the RSS-assisted estimator: exactly three LEDs.
struct MeasurementFrame {
  std::vector<LedMeasurement> entries;

  /// Throws InvalidFrame unless there are `expected` entries with distinct
  /// ids and positive powers.
  void validate(std::size_t expected = 3) const;
};

/// Feasibility of one distance candidate against the LED semi-angle band.
struct CandidateEvaluation {
  std::size_t index = 0;
  std::array<double, 3> cos_phi{};
  bool feasible = false;
  /// Tolerance at which the candidate first became feasible; < 0 if never.
  double tolerance = -1.0;
};

struct PositionEstimate {
  Vec3 position = Vec3::Zero();
  std::array<double, 3> distances{};
  double tolerance = 0.0;
  int feasible_candidates = 0;
  int total_candidates = 0;
  bool ambiguous = false;
};

struct CandidateChoice {
  std::size_t index = 0;
  double tolerance = 0.0;
  int feasible_count = 0;
  bool ambiguous = false;
  std::vector<CandidateEvaluation> evaluations;
};

/// Relaxation schedule: tolerance k * kToleranceStep for k = 0..kMaxToleranceSteps.
inline constexpr double kToleranceStep = 0.05;
inline constexpr int kMaxToleranceSteps = 20;

/// Per-LED cosine of the irradiance angle implied by a distance triple,
///   cos(phi_i) = (P_i d_i^2 / (C_i cos(psi_i)))^(1/m_i).
/// Values are returned unclamped. Throws InvalidIncidence for psi >= pi/2.
std::array<double, 3> irradiance_cosines(const std::array<double, 3>& distances, const MeasurementFrame& frame,
                                         const std::array<double, 3>& psi_est, const PdParams& pd);

/// True when every cosine lies in [cos(semi_angle_i) (1 - t), 1 + t].
bool within_band(const std::array<double, 3>& cos_phi, const MeasurementFrame& frame, double tolerance);

/// Picks the candidate satisfying the semi-angle band at the smallest
/// tolerance on the relaxation schedule. Ties are broken uniformly at random
/// with `rng`, which is only advanced when a tie occurs. Throws
/// DisambiguationFailure when nothing passes at the largest tolerance.
CandidateChoice filter_candidates(const DistanceCandidateSet& candidates, const MeasurementFrame& frame,
                                  const std::array<double, 3>& psi_est, const PdParams& pd, std::mt19937_64& rng);

struct PlanarFix {
  double x = 0.0;
  double y = 0.0;
};

/// Linear least-squares (x, y) from three distances to LEDs at a common
/// height. Throws InvalidProblem if heights differ by more than 1e-9 and
/// SingularGeometry for LEDs collinear in plan view.
PlanarFix lls_xy(const std::array<double, 3>& distances, std::span<const Vec3, 3> leds);

/// Height below `led1` consistent with distance `d1` at `xy`: z1 - Delta.
/// Radicands down to -1e-9 are clamped to zero; below that throws
/// InconsistentDistance.
double z_from_distance(const PlanarFix& xy, double d1, const Vec3& led1);

/// Full pipeline: bearings, incidence angles, candidate distances, RSS
/// disambiguation, planar fix, height. Stage errors are re-tagged with the
/// stage they came from.
PositionEstimate estimate_position(const MeasurementFrame& frame, const CameraIntrinsics& K, const PdParams& pd,
                                   std::mt19937_64& rng);

/// Shared by both estimators: distance system built from image observations.
P3PProblem p3p_problem(std::span<const Vec3, 3> bearings, std::span<const Vec3, 3> leds);

}  // namespace rp3p
