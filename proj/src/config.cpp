#include "rp3p/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "rp3p/error.hpp"

namespace rp3p {

namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Config, where + ": " + what);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto k : allowed) known = known || key == k;
    if (!known) fail(where, "unknown key '" + key + "'");
  }
}

template <class T>
void read(const json& obj, const std::string& where, const char* key, T& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception& e) {
    fail(where + "." + key, e.what());
  }
}

void read_deg(const json& obj, const std::string& where, const char* key, double& radians) {
  double deg = radians / kDeg;
  read(obj, where, key, deg);
  radians = deg * kDeg;
}

void read_vec3(const json& obj, const std::string& where, const char* key, Vec3& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_array() || it->size() != 3) fail(where + "." + key, "expected [x, y, z]");
  for (int k = 0; k < 3; ++k) {
    if (!(*it)[k].is_number()) fail(where + "." + key, "expected numbers");
    out[k] = (*it)[k].get<double>();
  }
}

template <class E>
void read_enum(const json& obj, const std::string& where, const char* key, E& out,
               std::initializer_list<std::pair<std::string_view, E>> names) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_string()) fail(where + "." + key, "expected a string");
  const std::string s = it->get<std::string>();
  for (const auto& [name, value] : names) {
    if (s == name) {
      out = value;
      return;
    }
  }
  fail(where + "." + key, "unknown value '" + s + "'");
}

template <class E>
std::string enum_name(E v, std::initializer_list<std::pair<std::string_view, E>> names) {
  for (const auto& [name, value] : names) {
    if (value == v) return std::string(name);
  }
  return {};
}

const std::initializer_list<std::pair<std::string_view, TiltMode>> kTiltModes = {{"fixed", TiltMode::Fixed},
                                                                                 {"random", TiltMode::Random}};
const std::initializer_list<std::pair<std::string_view, PlacementMode>> kPlacementModes = {
    {"random", PlacementMode::Random}, {"grid", PlacementMode::Grid}};
const std::initializer_list<std::pair<std::string_view, OrientationMode>> kOrientationModes = {
    {"up", OrientationMode::Up}, {"face_leds", OrientationMode::FaceLeds}, {"random_tilt", OrientationMode::RandomTilt}};
const std::initializer_list<std::pair<std::string_view, PowerNoiseMode>> kPowerModes = {
    {"fixed_std", PowerNoiseMode::FixedStd}, {"fixed_snr", PowerNoiseMode::FixedSnr}};

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

// Degrees for display; radians/kDeg leaves 59.99999999999999 for 60.
double to_deg(double radians) { return std::round(radians / kDeg * 1e9) / 1e9; }

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("malformed config: ") + e.what());
  }
  check_keys(root, "config",
             {"room", "leds", "tilt", "placement", "orientation", "pd", "camera", "noise", "d_pc_m", "d_pc_direction",
              "snr_gate_db", "n_trials", "rng_seed", "record_timing", "threads"});

  ScenarioConfig cfg = ScenarioConfig::reference();

  if (root.contains("room")) {
    const json& j = root["room"];
    check_keys(j, "room", {"length_m", "width_m", "height_m"});
    read(j, "room", "length_m", cfg.room.length);
    read(j, "room", "width_m", cfg.room.width);
    read(j, "room", "height_m", cfg.room.height);
  }
  if (root.contains("leds")) {
    const json& arr = root["leds"];
    if (!arr.is_array()) fail("leds", "expected an array");
    cfg.leds.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "leds[" + std::to_string(i) + "]";
      const json& j = arr[i];
      check_keys(j, where, {"id", "position_m", "semi_angle_deg", "tx_power_w"});
      LedBeacon led;
      led.id = static_cast<int>(i) + 1;
      read(j, where, "id", led.id);
      read_vec3(j, where, "position_m", led.position);
      read_deg(j, where, "semi_angle_deg", led.semi_angle);
      read(j, where, "tx_power_w", led.tx_power);
      cfg.leds.push_back(led);
    }
  }
  if (root.contains("tilt")) {
    const json& j = root["tilt"];
    check_keys(j, "tilt", {"mode", "theta_deg"});
    read_enum(j, "tilt", "mode", cfg.tilt.mode, kTiltModes);
    read_deg(j, "tilt", "theta_deg", cfg.tilt.theta);
  }
  if (root.contains("placement")) {
    const json& j = root["placement"];
    check_keys(j, "placement", {"mode", "grid_spacing_m"});
    read_enum(j, "placement", "mode", cfg.placement.mode, kPlacementModes);
    read(j, "placement", "grid_spacing_m", cfg.placement.grid_spacing);
  }
  if (root.contains("orientation")) {
    const json& j = root["orientation"];
    check_keys(j, "orientation", {"mode", "max_tilt_deg"});
    read_enum(j, "orientation", "mode", cfg.orientation.mode, kOrientationModes);
    read_deg(j, "orientation", "max_tilt_deg", cfg.orientation.max_tilt);
  }
  if (root.contains("pd")) {
    const json& j = root["pd"];
    check_keys(j, "pd", {"area_m2", "filter_gain", "refractive_index", "fov_deg", "responsivity_a_per_w"});
    read(j, "pd", "area_m2", cfg.pd.area);
    read(j, "pd", "filter_gain", cfg.pd.filter_gain);
    read(j, "pd", "refractive_index", cfg.pd.refractive_index);
    read_deg(j, "pd", "fov_deg", cfg.pd.fov);
    read(j, "pd", "responsivity_a_per_w", cfg.pd.responsivity);
  }
  if (root.contains("camera")) {
    const json& j = root["camera"];
    check_keys(j, "camera", {"fu", "fv", "u0", "v0", "image_width", "image_height", "check_image_bounds"});
    read(j, "camera", "fu", cfg.camera.intrinsics.fu);
    read(j, "camera", "fv", cfg.camera.intrinsics.fv);
    read(j, "camera", "u0", cfg.camera.intrinsics.u0);
    read(j, "camera", "v0", cfg.camera.intrinsics.v0);
    read(j, "camera", "image_width", cfg.camera.image_width);
    read(j, "camera", "image_height", cfg.camera.image_height);
    read(j, "camera", "check_image_bounds", cfg.camera.check_image_bounds);
  }
  if (root.contains("noise")) {
    const json& j = root["noise"];
    check_keys(j, "noise",
               {"power_mode", "power_noise_std_w", "power_snr_db", "n_power_averages", "pixel_noise_std_px",
                "n_image_averages"});
    read_enum(j, "noise", "power_mode", cfg.noise.power_mode, kPowerModes);
    read(j, "noise", "power_noise_std_w", cfg.noise.power_noise_std);
    read(j, "noise", "power_snr_db", cfg.noise.power_snr_db);
    read(j, "noise", "n_power_averages", cfg.noise.n_power_averages);
    read(j, "noise", "pixel_noise_std_px", cfg.noise.pixel_noise_std);
    read(j, "noise", "n_image_averages", cfg.noise.n_image_averages);
  }
  read(root, "config", "d_pc_m", cfg.d_pc);
  read_vec3(root, "config", "d_pc_direction", cfg.d_pc_direction);
  read(root, "config", "snr_gate_db", cfg.snr_gate_db);
  read(root, "config", "n_trials", cfg.n_trials);
  read(root, "config", "rng_seed", cfg.rng_seed);
  read(root, "config", "record_timing", cfg.record_timing);
  read(root, "config", "threads", cfg.threads);

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string dump_config(const ScenarioConfig& cfg) {
  json root;
  root["room"] = {{"length_m", cfg.room.length}, {"width_m", cfg.room.width}, {"height_m", cfg.room.height}};
  root["leds"] = json::array();
  for (const auto& led : cfg.leds) {
    root["leds"].push_back({{"id", led.id},
                            {"position_m", vec_json(led.position)},
                            {"semi_angle_deg", to_deg(led.semi_angle)},
                            {"tx_power_w", led.tx_power}});
  }
  root["tilt"] = {{"mode", enum_name(cfg.tilt.mode, kTiltModes)}, {"theta_deg", to_deg(cfg.tilt.theta)}};
  root["placement"] = {{"mode", enum_name(cfg.placement.mode, kPlacementModes)},
                       {"grid_spacing_m", cfg.placement.grid_spacing}};
  root["orientation"] = {{"mode", enum_name(cfg.orientation.mode, kOrientationModes)},
                         {"max_tilt_deg", to_deg(cfg.orientation.max_tilt)}};
  root["pd"] = {{"area_m2", cfg.pd.area},
                {"filter_gain", cfg.pd.filter_gain},
                {"refractive_index", cfg.pd.refractive_index},
                {"fov_deg", to_deg(cfg.pd.fov)},
                {"responsivity_a_per_w", cfg.pd.responsivity}};
  root["camera"] = {{"fu", cfg.camera.intrinsics.fu},
                    {"fv", cfg.camera.intrinsics.fv},
                    {"u0", cfg.camera.intrinsics.u0},
                    {"v0", cfg.camera.intrinsics.v0},
                    {"image_width", cfg.camera.image_width},
                    {"image_height", cfg.camera.image_height},
                    {"check_image_bounds", cfg.camera.check_image_bounds}};
  root["noise"] = {{"power_mode", enum_name(cfg.noise.power_mode, kPowerModes)},
                   {"power_noise_std_w", cfg.noise.power_noise_std},
                   {"power_snr_db", cfg.noise.power_snr_db},
                   {"n_power_averages", cfg.noise.n_power_averages},
                   {"pixel_noise_std_px", cfg.noise.pixel_noise_std},
                   {"n_image_averages", cfg.noise.n_image_averages}};
  root["d_pc_m"] = cfg.d_pc;
  root["d_pc_direction"] = vec_json(cfg.d_pc_direction);
  root["snr_gate_db"] = cfg.snr_gate_db;
  root["n_trials"] = cfg.n_trials;
  root["rng_seed"] = cfg.rng_seed;
  root["record_timing"] = cfg.record_timing;
  root["threads"] = cfg.threads;
  return root.dump(2) + "\n";
}

}  // namespace rp3p
