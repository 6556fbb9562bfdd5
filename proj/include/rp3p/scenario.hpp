#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "rp3p/channel.hpp"
#include "rp3p/estimator.hpp"
#include "rp3p/geometry.hpp"

namespace rp3p {

enum class Algorithm { Rp3p, Pnp4 };

std::string_view to_string(Algorithm a);
/// Accepts "rp3p" and "pnp4"; throws Config otherwise.
Algorithm parse_algorithm(std::string_view s);
/// Number of LEDs the algorithm consumes (the first N of the scenario list).
std::size_t led_count(Algorithm a);

struct Room {
  double length = 5.0;
  double width = 5.0;
  double height = 3.0;
};

enum class TiltMode {
  /// Every LED tilted by exactly `theta`.
  Fixed,
  /// Every LED tilted by an independent uniform angle in [0, theta].
  Random,
};

/// LED normals start straight down and are rotated by the tilt angle about a
/// horizontal axis with uniformly random azimuth, drawn per LED per trial.
struct TiltPolicy {
  TiltMode mode = TiltMode::Random;
  double theta = 0.08726646259971647;  // 5 deg
};

enum class PlacementMode {
  /// Uniform in the room volume, `n_trials` draws.
  Random,
  /// Cell centers of a cubic grid; the trial count is the grid size.
  Grid,
};

struct PlacementPolicy {
  PlacementMode mode = PlacementMode::Random;
  double grid_spacing = 0.05;
};

enum class OrientationMode {
  /// Optical axis straight up.
  Up,
  /// Optical axis toward the centroid of the LEDs the algorithm uses.
  FaceLeds,
  /// Axis tilted from vertical by a uniform angle in [0, max_tilt].
  RandomTilt,
};

struct OrientationPolicy {
  OrientationMode mode = OrientationMode::Up;
  double max_tilt = 0.0;
};

struct CameraConfig {
  CameraIntrinsics intrinsics;
  int image_width = 640;
  int image_height = 480;
  /// When false only the field-of-view cone limits what the camera sees.
  bool check_image_bounds = false;
};

struct ScenarioConfig {
  Room room;
  std::vector<LedBeacon> leds;
  TiltPolicy tilt;
  PlacementPolicy placement;
  OrientationPolicy orientation;
  PdParams pd;
  CameraConfig camera;
  NoiseParams noise;
  double d_pc = 0.01;                  // m
  Vec3 d_pc_direction = Vec3::UnitX();  // receiver frame
  double snr_gate_db = 13.6;
  std::size_t n_trials = 10000;
  std::uint64_t rng_seed = 1;
  /// Off by default so campaign output is byte-stable.
  bool record_timing = false;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;

  /// Default room, LED layout and receiver of the reference setup.
  static ScenarioConfig reference();

  void validate() const;
  /// Number of trials a campaign runs (grid size in grid mode).
  std::size_t trial_count() const;
};

enum class Infeasibility { None, Fov, Emitter, ImageBounds, Snr };

std::string_view to_string(Infeasibility f);

struct GroundTruth {
  RigidPose pose;
  Vec3 pd_position = Vec3::Zero();
  std::vector<LedSource> leds;
};

struct SynthesizedTrial {
  GroundTruth truth;
  /// The first led_count(algorithm) LEDs, in scenario order.
  MeasurementFrame frame;
  Infeasibility infeasible = Infeasibility::None;

  bool feasible() const { return infeasible == Infeasibility::None; }
  std::vector<ImageObservation> images() const;
};

/// Independent per-trial random stream derived from (seed, trial index).
std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial_index);

/// Receiver position of trial `index` under the configured placement policy.
/// Random placement consumes three uniforms from `rng`.
Vec3 receiver_position(const ScenarioConfig& cfg, std::size_t index, std::mt19937_64& rng);

/// Draws one trial: receiver pose, LED tilts, noisy pixels and powers.
/// Random draws happen in a fixed order and count regardless of feasibility
/// or noise levels, so sweeps over those parameters share random streams.
SynthesizedTrial synthesize_trial(const ScenarioConfig& cfg, Algorithm algorithm, std::size_t index,
                                  std::mt19937_64& rng);

}  // namespace rp3p
