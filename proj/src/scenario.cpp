#include "rp3p/scenario.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rp3p/error.hpp"

namespace rp3p {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::Config, what);
}

struct GridDims {
  std::size_t nx, ny, nz;
};

GridDims grid_dims(const ScenarioConfig& cfg) {
  const double s = cfg.placement.grid_spacing;
  const auto cells = [s](double extent) { return static_cast<std::size_t>(std::max<long long>(1, std::llround(extent / s))); };
  return {cells(cfg.room.length), cells(cfg.room.width), cells(cfg.room.height)};
}

}  // namespace

std::string_view to_string(Algorithm a) { return a == Algorithm::Rp3p ? "rp3p" : "pnp4"; }

Algorithm parse_algorithm(std::string_view s) {
  if (s == "rp3p") return Algorithm::Rp3p;
  if (s == "pnp4") return Algorithm::Pnp4;
  throw Error(ErrorCode::Config, "unknown algorithm '" + std::string(s) + "' (expected rp3p or pnp4)");
}

std::size_t led_count(Algorithm a) { return a == Algorithm::Rp3p ? 3 : 4; }

std::string_view to_string(Infeasibility f) {
  switch (f) {
    case Infeasibility::None: return "";
    case Infeasibility::Fov: return "fov";
    case Infeasibility::Emitter: return "emitter";
    case Infeasibility::ImageBounds: return "image-bounds";
    case Infeasibility::Snr: return "snr";
  }
  return "unknown";
}

ScenarioConfig ScenarioConfig::reference() {
  ScenarioConfig cfg;
  const double xy[4][2] = {{2.0, 2.0}, {2.0, 3.0}, {3.0, 3.0}, {3.0, 2.0}};
  for (int i = 0; i < 4; ++i) {
    LedBeacon led;
    led.id = i + 1;
    led.position = Vec3(xy[i][0], xy[i][1], 3.0);
    led.semi_angle = 60.0 * kDeg;
    led.tx_power = 2.2;
    cfg.leds.push_back(led);
  }
  return cfg;
}

void ScenarioConfig::validate() const {
  require(room.length > 0.0 && room.width > 0.0 && room.height > 0.0, "room dimensions must be positive");
  require(leds.size() >= 3, "at least 3 LEDs are required");
  for (const auto& led : leds) {
    LedSource probe{led, -Vec3::UnitZ()};
    try {
      probe.validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, "LED " + std::to_string(led.id) + ": " + e.what());
    }
    require(led.position.x() >= 0.0 && led.position.x() <= room.length && led.position.y() >= 0.0 &&
                led.position.y() <= room.width && led.position.z() >= 0.0 && led.position.z() <= room.height,
            "LED " + std::to_string(led.id) + " lies outside the room");
  }
  require(tilt.theta >= 0.0 && tilt.theta < std::numbers::pi / 2, "tilt angle must lie in [0, 90) deg");
  require(placement.grid_spacing > 0.0, "grid spacing must be positive");
  require(orientation.max_tilt >= 0.0 && orientation.max_tilt < std::numbers::pi / 2,
          "receiver tilt must lie in [0, 90) deg");
  try {
    pd.validate();
    camera.intrinsics.validate();
    noise.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  require(camera.image_width > 0 && camera.image_height > 0, "image size must be positive");
  require(d_pc >= 0.0, "PD-camera offset must be >= 0");
  require(d_pc_direction.norm() > 0.0, "PD-camera offset direction must be nonzero");
  require(n_trials >= 1, "n_trials must be >= 1");
}

std::size_t ScenarioConfig::trial_count() const {
  if (placement.mode == PlacementMode::Random) return n_trials;
  const GridDims g = grid_dims(*this);
  return g.nx * g.ny * g.nz;
}

std::vector<ImageObservation> SynthesizedTrial::images() const {
  std::vector<ImageObservation> out;
  out.reserve(frame.entries.size());
  for (const auto& e : frame.entries) out.push_back(e.image);
  return out;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial_index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(trial_index)));
}

Vec3 receiver_position(const ScenarioConfig& cfg, std::size_t index, std::mt19937_64& rng) {
  if (cfg.placement.mode == PlacementMode::Random) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(rng) * cfg.room.length;
    const double y = u(rng) * cfg.room.width;
    const double z = u(rng) * cfg.room.height;
    return {x, y, z};
  }
  const GridDims g = grid_dims(cfg);
  const std::size_t ix = index / (g.ny * g.nz);
  const std::size_t iy = (index / g.nz) % g.ny;
  const std::size_t iz = index % g.nz;
  return {(ix + 0.5) * cfg.room.length / g.nx, (iy + 0.5) * cfg.room.width / g.ny,
          (iz + 0.5) * cfg.room.height / g.nz};
}

SynthesizedTrial synthesize_trial(const ScenarioConfig& cfg, Algorithm algorithm, std::size_t index,
                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n_used = led_count(algorithm);

  SynthesizedTrial trial;
  const Vec3 center = receiver_position(cfg, index, rng);

  const double orient_u = uniform(rng);
  const double orient_az = 2.0 * std::numbers::pi * uniform(rng);
  Vec3 axis = Vec3::UnitZ();
  if (cfg.orientation.mode == OrientationMode::FaceLeds) {
    Vec3 centroid = Vec3::Zero();
    for (std::size_t i = 0; i < n_used; ++i) centroid += cfg.leds[i].position;
    axis = centroid / static_cast<double>(n_used) - center;
  } else if (cfg.orientation.mode == OrientationMode::RandomTilt) {
    const double t = orient_u * cfg.orientation.max_tilt;
    axis = Vec3(std::sin(t) * std::cos(orient_az), std::sin(t) * std::sin(orient_az), std::cos(t));
  }
  trial.truth.pose = RigidPose::looking_along(axis, center);
  const Vec3 rx_normal = trial.truth.pose.optical_axis_world();
  trial.truth.pd_position =
      center + cfg.d_pc * trial.truth.pose.direction_to_world(cfg.d_pc_direction.normalized());

  for (const auto& beacon : cfg.leds) {
    const double tilt_u = uniform(rng);
    const double tilt_az = 2.0 * std::numbers::pi * uniform(rng);
    const double theta = cfg.tilt.mode == TiltMode::Fixed ? cfg.tilt.theta : tilt_u * cfg.tilt.theta;
    const Vec3 normal(std::sin(theta) * std::cos(tilt_az), std::sin(theta) * std::sin(tilt_az), -std::cos(theta));
    trial.truth.leds.push_back({beacon, normal});
  }

  const double pixel_std =
      cfg.noise.pixel_noise_std / std::sqrt(static_cast<double>(cfg.noise.n_image_averages));
  const bool gate_snr = !(cfg.noise.power_mode == PowerNoiseMode::FixedStd && cfg.noise.power_noise_std == 0.0);

  for (std::size_t i = 0; i < trial.truth.leds.size(); ++i) {
    const double du = gauss(rng);
    const double dv = gauss(rng);
    const LedSource& led = trial.truth.leds[i];
    const bool used = i < n_used;

    Infeasibility why = Infeasibility::None;
    double true_power = 0.0;
    PixelCoord pixel;
    if (used) {
      const Vec3 pd_to_led = led.beacon.position - trial.truth.pd_position;
      if (angle_between(rx_normal, led.beacon.position - center) > cfg.pd.fov ||
          angle_between(rx_normal, pd_to_led) > cfg.pd.fov) {
        why = Infeasibility::Fov;
      } else if (!(led.normal.dot(-pd_to_led) > 0.0)) {
        why = Infeasibility::Emitter;
      } else {
        pixel = project_world_to_pixel(led.beacon.position, trial.truth.pose, cfg.camera.intrinsics);
        true_power = received_power(led, trial.truth.pd_position, rx_normal, cfg.pd);
        if (cfg.camera.check_image_bounds &&
            (pixel.u < 0.0 || pixel.u >= cfg.camera.image_width || pixel.v < 0.0 || pixel.v >= cfg.camera.image_height)) {
          why = Infeasibility::ImageBounds;
        } else if (gate_snr && !(snr_db(true_power, cfg.pd, cfg.noise) >= cfg.snr_gate_db)) {
          why = Infeasibility::Snr;
        }
      }
    }
    // Always consumed, feasible or not.
    const double measured = sample_measured_power(true_power, cfg.noise, rng);
    if (!used) continue;
    if (why != Infeasibility::None && trial.infeasible == Infeasibility::None) trial.infeasible = why;
    LedMeasurement m;
    m.image.led = led.beacon;
    m.image.pixel = {pixel.u + pixel_std * du, pixel.v + pixel_std * dv};
    m.power = measured;
    trial.frame.entries.push_back(m);
  }
  return trial;
}

}  // namespace rp3p
