#pragma once

#include <random>

#include "rp3p/geometry.hpp"

namespace rp3p {

/// What the receiver knows about an LED: identity, placement, beam and power.
struct LedBeacon {
  int id = 0;
  Vec3 position = Vec3::Zero();
  double semi_angle = 1.0471975511965976;  // 60 deg
  double tx_power = 2.2;                   // W
};

/// Transmitter ground truth. The normal is never visible to the estimators.
struct LedSource {
  LedBeacon beacon;
  Vec3 normal = -Vec3::UnitZ();

  void validate() const;
};

/// Photodiode front end.
struct PdParams {
  double area = 1e-4;               // m^2
  double filter_gain = 1.0;         // T_s
  double refractive_index = 1.5;    // concentrator n
  double fov = 1.0471975511965976;  // Psi_c, rad
  double responsivity = 0.54;       // A/W

  void validate() const;
};

enum class PowerNoiseMode {
  /// Constant per-measurement std, `power_noise_std` watts.
  FixedStd,
  /// Per-measurement std scaled so every single measurement has `power_snr_db`.
  FixedSnr,
};

struct NoiseParams {
  PowerNoiseMode power_mode = PowerNoiseMode::FixedSnr;
  double power_noise_std = 0.0;  // W, optical, one measurement
  double power_snr_db = 13.6;
  int n_power_averages = 1000;
  double pixel_noise_std = 2.0;  // px, one image
  int n_image_averages = 10;

  void validate() const;

  /// Zero pixel and power noise.
  static NoiseParams noiseless();
  /// Fixed-SNR power noise at `snr_db` with the given averaging.
  static NoiseParams from_snr(double snr_db, int n_power_averages = 1000);
  /// Optical noise std (W) giving a single measurement of `reference_power`
  /// the requested SNR.
  static double std_for_snr(double reference_power, double snr_db);

  /// Per-measurement optical noise std for a measurement of `true_power`.
  double power_std_at(double true_power) const;
};

/// Lambertian order m = -ln 2 / ln cos(semi_angle).
double lambertian_order(double semi_angle);

/// Concentrator gain n^2 / sin^2(fov) inside the field of view (boundary
/// included), 0 outside.
double concentrator_gain(double psi, const PdParams& pd);

/// P_t (m+1) A T_s g / (2 pi) with g the in-FoV concentrator gain.
double channel_constant(const LedBeacon& led, const PdParams& pd);

/// LoS DC gain between an LED and a photodiode at `rx_pos` facing `rx_normal`.
/// Zero when the receiver is behind the emitting hemisphere or outside the
/// field of view. Throws DegenerateGeometry for coincident positions.
double channel_gain(const LedSource& led, const Vec3& rx_pos, const Vec3& rx_normal, const PdParams& pd);

double received_power(const LedSource& led, const Vec3& rx_pos, const Vec3& rx_normal, const PdParams& pd);

/// Electrical SNR in dB of a measurement of `p_r` watts. Returns -infinity
/// for p_r <= 0. Throws InvalidParameter for zero noise variance.
double snr_db(double p_r, const PdParams& pd, const NoiseParams& noise);

/// Mean of `noise.n_power_averages` noisy measurements of `true_power`.
///
/// The mean of n i.i.d. N(0, s^2) draws is N(0, s^2 / n), so a single draw at
/// the reduced std is taken. One normal variate is consumed even when the std
/// is zero, which keeps random streams aligned across parameter sweeps.
double sample_measured_power(double true_power, const NoiseParams& noise, std::mt19937_64& rng);

}  // namespace rp3p
