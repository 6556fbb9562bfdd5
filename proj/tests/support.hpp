#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's channel, projection or solver code.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rp3p/estimator.hpp"

namespace testing_support {

using rp3p::Vec3;

inline constexpr double kDeg = std::numbers::pi / 180.0;

inline std::array<Vec3, 4> reference_leds() {
  return {Vec3(2, 2, 3), Vec3(2, 3, 3), Vec3(3, 3, 3), Vec3(3, 2, 3)};
}

// Lambertian LoS gain written out longhand.
inline double oracle_gain(const Vec3& led, const Vec3& led_normal, double semi_angle, const Vec3& rx,
                          const Vec3& rx_normal, double area, double ts, double n, double fov) {
  const Vec3 v = rx - led;
  const double d = v.norm();
  const double cos_phi = led_normal.normalized().dot(v / d);
  const double cos_psi = rx_normal.normalized().dot(-v / d);
  if (cos_phi <= 0.0) return 0.0;
  const double psi = std::acos(std::clamp(cos_psi, -1.0, 1.0));
  if (psi > fov) return 0.0;
  const double m = -std::log(2.0) / std::log(std::cos(semi_angle));
  const double g = n * n / (std::sin(fov) * std::sin(fov));
  return (m + 1.0) * area / (2.0 * std::numbers::pi * d * d) * std::pow(cos_phi, m) * ts * g * cos_psi;
}

// Rotation taking world vectors into a camera frame whose +z is `axis`.
inline Eigen::Matrix3d oracle_rotation(const Vec3& axis, double roll) {
  const Vec3 z = axis.normalized();
  Vec3 helper = std::abs(z.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 x = (helper - helper.dot(z) * z).normalized();
  Vec3 y = z.cross(x);
  const Vec3 xr = std::cos(roll) * x + std::sin(roll) * y;
  const Vec3 yr = z.cross(xr);
  Eigen::Matrix3d R;
  R.row(0) = xr.transpose();
  R.row(1) = yr.transpose();
  R.row(2) = z.transpose();
  return R;
}

inline Vec3 tilted_normal(double theta, double azimuth) {
  return {std::sin(theta) * std::cos(azimuth), std::sin(theta) * std::sin(azimuth), -std::cos(theta)};
}

struct NoiselessScene {
  std::vector<Vec3> leds;
  std::vector<Vec3> normals;
  Vec3 receiver = Vec3::Zero();
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();  // world -> camera
  rp3p::CameraIntrinsics K;
  rp3p::PdParams pd;
  double semi_angle = 60.0 * kDeg;
  double tx_power = 2.2;

  Vec3 camera_point(std::size_t i) const { return R * (leds[i] - receiver); }

  rp3p::PixelCoord pixel(std::size_t i) const {
    const Vec3 c = camera_point(i);
    return {K.fu * c.x() / c.z() + K.u0, K.fv * c.y() / c.z() + K.v0};
  }

  double power(std::size_t i) const {
    return tx_power * oracle_gain(leds[i], normals[i], semi_angle, receiver, R.row(2).transpose(), pd.area,
                                  pd.filter_gain, pd.refractive_index, pd.fov);
  }

  double distance(std::size_t i) const { return (leds[i] - receiver).norm(); }

  double cos_phi(std::size_t i) const { return normals[i].normalized().dot((receiver - leds[i]).normalized()); }

  rp3p::LedBeacon beacon(std::size_t i) const {
    rp3p::LedBeacon b;
    b.id = static_cast<int>(i) + 1;
    b.position = leds[i];
    b.semi_angle = semi_angle;
    b.tx_power = tx_power;
    return b;
  }

  rp3p::MeasurementFrame frame(std::size_t count = 3) const {
    rp3p::MeasurementFrame f;
    for (std::size_t i = 0; i < count; ++i) f.entries.push_back({{beacon(i), pixel(i)}, power(i)});
    return f;
  }

  std::vector<rp3p::ImageObservation> images(std::size_t count = 4) const {
    std::vector<rp3p::ImageObservation> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back({beacon(i), pixel(i)});
    return out;
  }

  // Every LED in front of the camera, inside the PD FoV and in the LED's
  // emitting hemisphere.
  bool all_visible(std::size_t count) const {
    for (std::size_t i = 0; i < count; ++i) {
      const Vec3 c = camera_point(i);
      if (c.z() <= 0.0) return false;
      if (std::acos(std::clamp(c.normalized().z(), -1.0, 1.0)) > pd.fov) return false;
      if (cos_phi(i) <= 0.0) return false;
    }
    return true;
  }
};

// Receiver facing up at a uniform spot in the 5 x 5 x 3 room, LEDs tilted by
// `theta` about random azimuths. Redraws until all `count` LEDs are visible.
inline NoiselessScene random_scene(std::mt19937_64& rng, double theta, std::size_t count = 3,
                                   bool random_orientation = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    NoiselessScene s;
    for (const auto& p : reference_leds()) s.leds.push_back(p);
    for (int i = 0; i < 4; ++i) s.normals.push_back(tilted_normal(theta, 2.0 * std::numbers::pi * u(rng)));
    s.receiver = Vec3(5.0 * u(rng), 5.0 * u(rng), 2.8 * u(rng));
    Vec3 axis = Vec3::UnitZ();
    if (random_orientation) {
      const double t = 30.0 * kDeg * u(rng), az = 2.0 * std::numbers::pi * u(rng);
      axis = Vec3(std::sin(t) * std::cos(az), std::sin(t) * std::sin(az), std::cos(t));
    }
    s.R = oracle_rotation(axis, 2.0 * std::numbers::pi * u(rng));
    if (s.all_visible(count)) return s;
  }
}

// ---------------------------------------------------------------------------
// Brute-force root oracle for the normalized distance system
//   E1: (1-a) y^2 - a x^2 + a r x y - p y + 1 = 0
//   E2: (1-b) x^2 - b y^2 + b r x y - q x + 1 = 0
// Scans y over a log grid, solves E1 for x on both quadratic branches and
// bisects every sign change of E2 along a branch.

struct OracleRoot {
  double x, y;
};

inline std::vector<OracleRoot> oracle_roots(double r, double q, double p, double a, double b, int samples = 40000,
                                            double lo = 0.01, double hi = 100.0) {
  const auto branch = [&](double y, int sign, double& x) {
    const double A = -a, B = a * r * y, C = (1.0 - a) * y * y - p * y + 1.0;
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return false;
    x = (-B + sign * std::sqrt(disc)) / (2.0 * A);
    return true;
  };
  const auto e2 = [&](double x, double y) { return (1.0 - b) * x * x - b * y * y + b * r * x * y - q * x + 1.0; };

  std::vector<OracleRoot> roots;
  const double step = std::log(hi / lo) / samples;
  for (int sign : {-1, 1}) {
    double y_prev = lo, x_prev = 0.0;
    bool have_prev = branch(y_prev, sign, x_prev);
    for (int k = 1; k <= samples; ++k) {
      const double y = lo * std::exp(step * k);
      double x = 0.0;
      const bool have = branch(y, sign, x);
      if (have && have_prev) {
        const double f0 = e2(x_prev, y_prev), f1 = e2(x, y);
        if (f0 == 0.0 || (f0 < 0.0) != (f1 < 0.0)) {
          double ya = y_prev, yb = y, fa = f0;
          for (int it = 0; it < 200 && yb - ya > 1e-15 * yb; ++it) {
            const double ym = 0.5 * (ya + yb);
            double xm = 0.0;
            if (!branch(ym, sign, xm)) break;
            const double fm = e2(xm, ym);
            if ((fm < 0.0) == (fa < 0.0)) {
              ya = ym;
              fa = fm;
            } else {
              yb = ym;
            }
          }
          const double yr = 0.5 * (ya + yb);
          double xr = 0.0;
          if (branch(yr, sign, xr) && xr >= lo && xr <= hi) roots.push_back({xr, yr});
        }
      }
      y_prev = y;
      x_prev = x;
      have_prev = have;
    }
  }
  return roots;
}

// Random desk-scale distance problem built from explicit geometry. Returns
// the ground-truth distances.
struct RandomProblem {
  std::array<Vec3, 3> leds;
  Vec3 camera;
  double d12, d13, d23, a12, a13, a23;
  std::array<double, 3> truth;
};

inline double angle_of(const Vec3& u, const Vec3& v) {
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

inline RandomProblem random_problem(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    RandomProblem pr;
    for (auto& l : pr.leds) l = Vec3(u(rng), u(rng), 2.0 + 0.3 * u(rng));
    pr.camera = Vec3(1.5 * u(rng), 1.5 * u(rng), 0.5 * u(rng));
    std::array<Vec3, 3> ray;
    for (int i = 0; i < 3; ++i) {
      ray[i] = pr.leds[i] - pr.camera;
      pr.truth[i] = ray[i].norm();
    }
    pr.d12 = (pr.leds[0] - pr.leds[1]).norm();
    pr.d13 = (pr.leds[0] - pr.leds[2]).norm();
    pr.d23 = (pr.leds[1] - pr.leds[2]).norm();
    pr.a12 = angle_of(ray[0], ray[1]);
    pr.a13 = angle_of(ray[0], ray[2]);
    pr.a23 = angle_of(ray[1], ray[2]);
    const double min_side = std::min({pr.d12, pr.d13, pr.d23});
    const double min_angle = std::min({pr.a12, pr.a13, pr.a23});
    // Keep away from collapsed triangles and near-collinear bearings.
    const double area = (pr.leds[1] - pr.leds[0]).cross(pr.leds[2] - pr.leds[0]).norm();
    if (min_side > 0.2 && min_angle > 0.05 && area > 0.05) return pr;
  }
}

inline double rel_diff(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(a[i] - b[i]) / std::abs(b[i]));
  return m;
}

}  // namespace testing_support
