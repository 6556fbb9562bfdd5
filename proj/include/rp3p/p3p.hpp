#pragma once

#include <array>
#include <vector>

namespace rp3p {

/// Law-of-cosines system between the optical center and three LEDs:
///   d_i^2 + d_j^2 - 2 d_i d_j cos(alpha_ij) = d_ij^2
struct P3PProblem {
  double d12 = 0.0, d13 = 0.0, d23 = 0.0;                 // inter-LED distances, m
  double alpha12 = 0.0, alpha13 = 0.0, alpha23 = 0.0;     // inter-bearing angles, rad
};

/// Dimensionless form with x = d1/d3, y = d2/d3:
///   r = 2cos(alpha12), q = 2cos(alpha13), p = 2cos(alpha23),
///   a = d23^2/d12^2,  b = d13^2/d12^2.
struct NormalizedP3P {
  double r = 0.0, q = 0.0, p = 0.0;
  double a = 0.0, b = 0.0;
};

struct DistanceCandidate {
  std::array<double, 3> d{};  // d1, d2, d3 in meters
  double x = 0.0;             // d1 / d3
  double y = 0.0;             // d2 / d3
  double v = 0.0;             // d12^2 / d3^2
};

using DistanceCandidateSet = std::vector<DistanceCandidate>;

/// Below this any inter-bearing angle is treated as a degenerate view.
inline constexpr double kMinBearingAngle = 1e-3;

/// Throws InvalidProblem when distances are non-positive, violate the
/// triangle inequality, or an angle is outside (0, pi).
NormalizedP3P normalize(const P3PProblem& problem);

/// All positive real solutions of the normalized system, converted to
/// distances with d3 = d12 / sqrt(v). At most four candidates.
///
/// The bivariate system is reduced to a quartic in y by the resultant of the
/// two conics in x; roots come from the companion-matrix eigenvalues and are
/// polished with Newton steps on the original pair of equations.
///
/// Throws DegenerateGeometry when any bearing angle is below kMinBearingAngle
/// and NoCandidates when no positive real solution exists.
DistanceCandidateSet solve_candidates(const NormalizedP3P& norm, double d12);

/// Convenience: normalize + solve_candidates.
DistanceCandidateSet solve_p3p(const P3PProblem& problem);

/// max over pairs of |d_i^2 + d_j^2 - 2 d_i d_j cos(alpha_ij) - d_ij^2|.
double law_of_cosines_residual(const std::array<double, 3>& d, const P3PProblem& problem);

/// Quartic in y (ascending coefficients c0..c4) whose roots are the y values
/// of the normalized system. Exposed for testing.
std::array<double, 5> elimination_quartic(const NormalizedP3P& norm);

}  // namespace rp3p
