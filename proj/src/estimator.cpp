#include "rp3p/estimator.hpp"

#include <cmath>
#include <numbers>
#include <algorithm>
#include <string>

#include <Eigen/Dense>

#include "rp3p/error.hpp"

namespace rp3p {

void MeasurementFrame::validate(std::size_t expected) const {
  if (entries.size() != expected) {
    throw Error(ErrorCode::InvalidFrame,
                "expected " + std::to_string(expected) + " LED measurements, got " + std::to_string(entries.size()));
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    for (std::size_t j = 0; j < i; ++j) {
      if (entries[j].image.led.id == e.image.led.id) {
        throw Error(ErrorCode::InvalidFrame, "duplicate LED id " + std::to_string(e.image.led.id));
      }
    }
    if (!(e.power > 0.0) || !std::isfinite(e.power)) {
      throw Error(ErrorCode::InvalidFrame, "measured power of LED " + std::to_string(e.image.led.id) + " is not positive");
    }
  }
}

namespace {

// Per-LED quantities shared by every candidate of a frame.
struct BandTerms {
  std::array<double, 3> inv_m{};
  std::array<double, 3> scale{};  // P_i / (C_i cos(psi_i))
  std::array<double, 3> cos_half{};
};

BandTerms band_terms(const MeasurementFrame& frame, const std::array<double, 3>& cos_psi, const PdParams& pd) {
  BandTerms t;
  const double k = pd.area * pd.filter_gain * concentrator_gain(0.0, pd) / (2.0 * std::numbers::pi);
  double semi = 0.0, m = 0.0, cos_half = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const LedBeacon& led = frame.entries[i].image.led;
    if (i == 0 || led.semi_angle != semi) {
      semi = led.semi_angle;
      m = lambertian_order(semi);
      cos_half = std::cos(semi);
    }
    t.inv_m[i] = 1.0 / m;
    t.scale[i] = frame.entries[i].power / (led.tx_power * (m + 1.0) * k * cos_psi[i]);
    t.cos_half[i] = cos_half;
  }
  return t;
}

std::array<double, 3> cos_of_incidence(const std::array<double, 3>& psi_est) {
  std::array<double, 3> c{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(psi_est[i] >= 0.0 && psi_est[i] < std::numbers::pi / 2)) {
      throw Error(ErrorCode::InvalidIncidence, "incidence angle must lie in [0, pi/2)");
    }
    c[i] = std::cos(psi_est[i]);
  }
  return c;
}

std::array<double, 3> cosines(const BandTerms& t, const std::array<double, 3>& d) {
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    const double base = t.scale[i] * d[i] * d[i];
    out[i] = t.inv_m[i] == 1.0 ? base : std::pow(base, t.inv_m[i]);
  }
  return out;
}

bool in_band(const std::array<double, 3>& cos_phi, const std::array<double, 3>& cos_half, double tolerance) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(cos_phi[i] >= cos_half[i] * (1.0 - tolerance) && cos_phi[i] <= 1.0 + tolerance)) return false;
  }
  return true;
}

// First schedule step whose band holds, or -1.
int first_step(const std::array<double, 3>& cos_phi, const std::array<double, 3>& cos_half) {
  double need = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!std::isfinite(cos_phi[i])) return -1;
    need = std::max({need, 1.0 - cos_phi[i] / cos_half[i], cos_phi[i] - 1.0});
  }
  int k = std::min(kMaxToleranceSteps, static_cast<int>(std::ceil(need / kToleranceStep - 1e-9)));
  while (k > 0 && in_band(cos_phi, cos_half, (k - 1) * kToleranceStep)) --k;
  while (k <= kMaxToleranceSteps && !in_band(cos_phi, cos_half, k * kToleranceStep)) ++k;
  return k <= kMaxToleranceSteps ? k : -1;
}

}  // namespace

std::array<double, 3> irradiance_cosines(const std::array<double, 3>& distances, const MeasurementFrame& frame,
                                         const std::array<double, 3>& psi_est, const PdParams& pd) {
  return cosines(band_terms(frame, cos_of_incidence(psi_est), pd), distances);
}

bool within_band(const std::array<double, 3>& cos_phi, const MeasurementFrame& frame, double tolerance) {
  std::array<double, 3> cos_half{};
  for (std::size_t i = 0; i < 3; ++i) cos_half[i] = std::cos(frame.entries[i].image.led.semi_angle);
  return in_band(cos_phi, cos_half, tolerance);
}

namespace {

CandidateChoice choose(const DistanceCandidateSet& candidates, const MeasurementFrame& frame,
                       const std::array<double, 3>& cos_psi, const PdParams& pd, std::mt19937_64& rng) {
  if (candidates.empty()) {
    throw Error(ErrorCode::DisambiguationFailure, "no distance candidates to choose from");
  }
  const BandTerms terms = band_terms(frame, cos_psi, pd);
  CandidateChoice choice;
  choice.evaluations.reserve(candidates.size());
  int best_step = kMaxToleranceSteps + 1;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    CandidateEvaluation ev;
    ev.index = c;
    ev.cos_phi = cosines(terms, candidates[c].d);
    const int k = first_step(ev.cos_phi, terms.cos_half);
    if (k >= 0) {
      ev.tolerance = k * kToleranceStep;
      best_step = std::min(best_step, k);
    }
    choice.evaluations.push_back(ev);
  }
  if (best_step > kMaxToleranceSteps) {
    throw Error(ErrorCode::DisambiguationFailure, "no candidate satisfies the semi-angle band at the largest tolerance");
  }
  choice.tolerance = best_step * kToleranceStep;
  for (auto& ev : choice.evaluations) {
    ev.feasible = ev.tolerance >= 0.0 && ev.tolerance <= choice.tolerance;
    if (ev.feasible) ++choice.feasible_count;
  }
  choice.ambiguous = choice.feasible_count > 1;
  int nth = 0;
  if (choice.ambiguous) {
    std::uniform_int_distribution<int> pick(0, choice.feasible_count - 1);
    nth = pick(rng);
  }
  for (const auto& ev : choice.evaluations) {
    if (ev.feasible && nth-- == 0) {
      choice.index = ev.index;
      break;
    }
  }
  return choice;
}

}  // namespace

CandidateChoice filter_candidates(const DistanceCandidateSet& candidates, const MeasurementFrame& frame,
                                  const std::array<double, 3>& psi_est, const PdParams& pd, std::mt19937_64& rng) {
  return choose(candidates, frame, cos_of_incidence(psi_est), pd, rng);
}

PlanarFix lls_xy(const std::array<double, 3>& d, std::span<const Vec3, 3> s) {
  if (std::abs(s[1].z() - s[0].z()) > 1e-9 || std::abs(s[2].z() - s[0].z()) > 1e-9) {
    throw Error(ErrorCode::InvalidProblem, "planar fix needs LEDs at a common height");
  }
  Eigen::Matrix2d A;
  A << s[1].x() - s[0].x(), s[1].y() - s[0].y(),
       s[2].x() - s[0].x(), s[2].y() - s[0].y();
  const double scale = A.cwiseAbs().maxCoeff();
  if (!(std::abs(A.determinant()) >= 1e-9 * scale * scale)) {
    throw Error(ErrorCode::SingularGeometry, "LEDs are collinear in plan view");
  }
  const double k1 = s[0].x() * s[0].x() + s[0].y() * s[0].y();
  const Eigen::Vector2d b =
      0.5 * Eigen::Vector2d(d[0] * d[0] - d[1] * d[1] + s[1].x() * s[1].x() + s[1].y() * s[1].y() - k1,
                            d[0] * d[0] - d[2] * d[2] + s[2].x() * s[2].x() + s[2].y() * s[2].y() - k1);
  const Eigen::Vector2d X = (A.transpose() * A).inverse() * (A.transpose() * b);
  return {X.x(), X.y()};
}

double z_from_distance(const PlanarFix& xy, double d1, const Vec3& led1) {
  const double dx = led1.x() - xy.x;
  const double dy = led1.y() - xy.y;
  const double radicand = d1 * d1 - dx * dx - dy * dy;
  if (radicand < -1e-9) {
    throw Error(ErrorCode::InconsistentDistance, "distance to LED 1 is shorter than its planar offset");
  }
  return led1.z() - std::sqrt(std::max(radicand, 0.0));
}

P3PProblem p3p_problem(std::span<const Vec3, 3> b, std::span<const Vec3, 3> s) {
  P3PProblem pr;
  pr.d12 = (s[0] - s[1]).norm();
  pr.d13 = (s[0] - s[2]).norm();
  pr.d23 = (s[1] - s[2]).norm();
  pr.alpha12 = inter_bearing_angle(b[0], b[1]);
  pr.alpha13 = inter_bearing_angle(b[0], b[2]);
  pr.alpha23 = inter_bearing_angle(b[1], b[2]);
  return pr;
}

namespace {

template <class F>
auto staged(Stage stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw e.at_stage(stage);
  }
}

}  // namespace

PositionEstimate estimate_position(const MeasurementFrame& frame, const CameraIntrinsics& K, const PdParams& pd,
                                   std::mt19937_64& rng) {
  frame.validate(3);
  std::array<Vec3, 3> bearings;
  std::array<Vec3, 3> leds;
  std::array<double, 3> cos_psi{};
  staged(Stage::Bearing, [&] {
    K.validate();
    for (std::size_t i = 0; i < 3; ++i) {
      bearings[i] = back_project_bearing(frame.entries[i].image.pixel, K);
      // Unit bearing: its optical-axis component is cos(psi), positive by construction.
      cos_psi[i] = bearings[i].z();
      leds[i] = frame.entries[i].image.led.position;
    }
    return 0;
  });

  const DistanceCandidateSet candidates = staged(Stage::Distance, [&] { return solve_p3p(p3p_problem(bearings, leds)); });
  const CandidateChoice choice =
      staged(Stage::Disambiguation, [&] { return choose(candidates, frame, cos_psi, pd, rng); });

  PositionEstimate est;
  est.distances = candidates[choice.index].d;
  est.tolerance = choice.tolerance;
  est.feasible_candidates = choice.feasible_count;
  est.total_candidates = static_cast<int>(candidates.size());
  est.ambiguous = choice.ambiguous;

  const PlanarFix xy = staged(Stage::Position, [&] { return lls_xy(est.distances, leds); });
  const double z = staged(Stage::Height, [&] { return z_from_distance(xy, est.distances[0], leds[0]); });
  est.position = Vec3(xy.x, xy.y, z);
  return est;
}

}  // namespace rp3p
