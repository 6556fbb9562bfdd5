#include "rp3p/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rp3p/error.hpp"

namespace rp3p {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, what);
}

}  // namespace

void LedSource::validate() const {
  require(beacon.position.allFinite(), "LED position must be finite");
  require(std::abs(normal.norm() - 1.0) <= 1e-9, "LED normal must be a unit vector");
  require(beacon.semi_angle > 0.0 && beacon.semi_angle < std::numbers::pi / 2, "LED semi-angle must lie in (0, pi/2)");
  require(beacon.tx_power > 0.0, "LED optical power must be positive");
}

void PdParams::validate() const {
  require(area > 0.0, "PD area must be positive");
  require(filter_gain > 0.0, "filter gain must be positive");
  require(refractive_index >= 1.0, "refractive index must be >= 1");
  require(fov > 0.0 && fov <= std::numbers::pi / 2, "PD field of view must lie in (0, pi/2]");
  require(responsivity > 0.0, "responsivity must be positive");
}

void NoiseParams::validate() const {
  require(power_noise_std >= 0.0, "power noise std must be >= 0");
  require(std::isfinite(power_snr_db), "power SNR must be finite");
  require(pixel_noise_std >= 0.0, "pixel noise std must be >= 0");
  require(n_power_averages >= 1, "power averaging count must be >= 1");
  require(n_image_averages >= 1, "image averaging count must be >= 1");
}

NoiseParams NoiseParams::noiseless() {
  NoiseParams n;
  n.power_mode = PowerNoiseMode::FixedStd;
  n.power_noise_std = 0.0;
  n.pixel_noise_std = 0.0;
  return n;
}

NoiseParams NoiseParams::from_snr(double snr_db, int n_power_averages) {
  NoiseParams n;
  n.power_mode = PowerNoiseMode::FixedSnr;
  n.power_snr_db = snr_db;
  n.n_power_averages = n_power_averages;
  return n;
}

double NoiseParams::std_for_snr(double reference_power, double snr_db) {
  return reference_power / std::pow(10.0, snr_db / 20.0);
}

double NoiseParams::power_std_at(double true_power) const {
  if (power_mode == PowerNoiseMode::FixedSnr) {
    return std_for_snr(std::abs(true_power), power_snr_db);
  }
  return power_noise_std;
}

double lambertian_order(double semi_angle) {
  require(semi_angle > 0.0 && semi_angle < std::numbers::pi / 2, "semi-angle must lie in (0, pi/2)");
  return -std::numbers::ln2 / std::log(std::cos(semi_angle));
}

double concentrator_gain(double psi, const PdParams& pd) {
  if (psi < 0.0 || psi > pd.fov) return 0.0;
  const double s = std::sin(pd.fov);
  return pd.refractive_index * pd.refractive_index / (s * s);
}

double channel_constant(const LedBeacon& led, const PdParams& pd) {
  const double m = lambertian_order(led.semi_angle);
  return led.tx_power * (m + 1.0) * pd.area * pd.filter_gain * concentrator_gain(0.0, pd) / (2.0 * std::numbers::pi);
}

double channel_gain(const LedSource& led, const Vec3& rx_pos, const Vec3& rx_normal, const PdParams& pd) {
  const Vec3 led_to_rx = rx_pos - led.beacon.position;
  const double d = led_to_rx.norm();
  if (!(d > 0.0)) {
    throw Error(ErrorCode::DegenerateGeometry, "receiver coincides with the LED");
  }
  const double cos_phi = led.normal.dot(led_to_rx) / (d * led.normal.norm());
  if (!(cos_phi > 0.0)) return 0.0;
  const double psi = angle_between(rx_normal, -led_to_rx);
  const double g = concentrator_gain(psi, pd);
  if (g == 0.0) return 0.0;
  const double m = lambertian_order(led.beacon.semi_angle);
  return (m + 1.0) * pd.area / (2.0 * std::numbers::pi * d * d) * std::pow(cos_phi, m) * pd.filter_gain * g *
         std::cos(psi);
}

double received_power(const LedSource& led, const Vec3& rx_pos, const Vec3& rx_normal, const PdParams& pd) {
  return led.beacon.tx_power * channel_gain(led, rx_pos, rx_normal, pd);
}

double snr_db(double p_r, const PdParams& pd, const NoiseParams& noise) {
  if (noise.power_mode == PowerNoiseMode::FixedSnr) {
    return p_r > 0.0 ? noise.power_snr_db : -std::numeric_limits<double>::infinity();
  }
  const double sigma = pd.responsivity * noise.power_noise_std;
  if (!(sigma > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "SNR is undefined for zero noise variance");
  }
  if (!(p_r > 0.0)) return -std::numeric_limits<double>::infinity();
  const double signal = p_r * pd.responsivity;
  return 10.0 * std::log10(signal * signal / (sigma * sigma));
}

double sample_measured_power(double true_power, const NoiseParams& noise, std::mt19937_64& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  const double z = unit(rng);
  const double std_of_mean = noise.power_std_at(true_power) / std::sqrt(static_cast<double>(noise.n_power_averages));
  return true_power + std_of_mean * z;
}

}  // namespace rp3p
