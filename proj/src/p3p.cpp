#include "rp3p/p3p.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "rp3p/error.hpp"

namespace rp3p {

namespace {

// Ascending-coefficient polynomials of degree <= 4.
using Poly = std::array<double, 5>;

Poly operator*(const Poly& f, const Poly& g) {
  Poly h{};
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; i + j < 5; ++j) h[i + j] += f[i] * g[j];
  }
  return h;
}

Poly operator-(const Poly& f, const Poly& g) {
  Poly h{};
  for (int i = 0; i < 5; ++i) h[i] = f[i] - g[i];
  return h;
}

Poly scaled(const Poly& f, double s) {
  Poly h{};
  for (int i = 0; i < 5; ++i) h[i] = f[i] * s;
  return h;
}

double eval(const Poly& f, double t) {
  double acc = 0.0;
  for (int i = 4; i >= 0; --i) acc = acc * t + f[i];
  return acc;
}

// Coefficients of the two conics written as quadratics in x with
// y-polynomial coefficients:
//   E1: A1 x^2 + B1(y) x + C1(y),   E2: A2 x^2 + B2(y) x + C2(y)
struct Conics {
  double A1, A2;
  Poly B1, C1, B2, C2;
};

Conics conics(const NormalizedP3P& n) {
  Conics c{};
  c.A1 = -n.a;
  c.B1 = {0.0, n.a * n.r};
  c.C1 = {1.0, -n.p, 1.0 - n.a};
  c.A2 = 1.0 - n.b;
  c.B2 = {-n.q, n.b * n.r};
  c.C2 = {1.0, 0.0, -n.b};
  return c;
}

// (E1, E2) at (x, y).
Eigen::Vector2d residual(const NormalizedP3P& n, double x, double y) {
  const double e1 = (1.0 - n.a) * y * y - n.a * x * x + n.a * n.r * x * y - n.p * y + 1.0;
  const double e2 = (1.0 - n.b) * x * x - n.b * y * y + n.b * n.r * x * y - n.q * x + 1.0;
  return {e1, e2};
}

void newton_polish(const NormalizedP3P& n, double& x, double& y) {
  Eigen::Vector2d f = residual(n, x, y);
  for (int it = 0; it < 10; ++it) {
    Eigen::Matrix2d J;
    J(0, 0) = -2.0 * n.a * x + n.a * n.r * y;
    J(0, 1) = 2.0 * (1.0 - n.a) * y + n.a * n.r * x - n.p;
    J(1, 0) = 2.0 * (1.0 - n.b) * x + n.b * n.r * y - n.q;
    J(1, 1) = -2.0 * n.b * y + n.b * n.r * x;
    const double det = J.determinant();
    if (!(std::abs(det) > 1e-300)) return;
    const Eigen::Vector2d step = J.inverse() * f;
    const double nx = x - step.x();
    const double ny = y - step.y();
    const Eigen::Vector2d nf = residual(n, nx, ny);
    if (!(nf.cwiseAbs().maxCoeff() <= f.cwiseAbs().maxCoeff())) return;
    x = nx;
    y = ny;
    f = nf;
    if (step.cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + std::abs(x) + std::abs(y))) return;
  }
}

template <int N>
void companion_roots(const Poly& c, int degree, std::vector<std::complex<double>>& out) {
  Eigen::Matrix<double, N, N> C = Eigen::Matrix<double, N, N>::Zero();
  for (int i = 1; i < N; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < N; ++i) C(i, N - 1) = -c[i] / c[degree];
  Eigen::EigenSolver<Eigen::Matrix<double, N, N>> es(C, false);
  for (int i = 0; i < N; ++i) out.push_back(es.eigenvalues()[i]);
}

// Roots of a polynomial of degree <= 4 via its companion matrix. Leading
// coefficients negligible against the largest one are dropped; the lost
// roots sit beyond 1e12 and have no physical meaning here.
std::vector<std::complex<double>> polynomial_roots(const Poly& coeffs) {
  double cmax = 0.0;
  for (double v : coeffs) cmax = std::max(cmax, std::abs(v));
  std::vector<std::complex<double>> roots;
  if (!(cmax > 0.0)) return roots;
  int degree = 4;
  while (degree > 0 && std::abs(coeffs[degree]) <= 1e-12 * cmax) --degree;
  if (degree == 0) return roots;

  // Rescale y = s t so |c0| == |c_deg| in the t polynomial.
  double s = 1.0;
  if (coeffs[0] != 0.0) s = std::pow(std::abs(coeffs[0]) / std::abs(coeffs[degree]), 1.0 / degree);
  Poly c{};
  double sp = 1.0;
  for (int i = 0; i <= degree; ++i, sp *= s) c[i] = coeffs[i] * sp;

  switch (degree) {
    case 1: companion_roots<1>(c, degree, roots); break;
    case 2: companion_roots<2>(c, degree, roots); break;
    case 3: companion_roots<3>(c, degree, roots); break;
    default: companion_roots<4>(c, degree, roots); break;
  }
  for (auto& z : roots) z *= s;
  return roots;
}

double relative_residual(const std::array<double, 3>& d, const NormalizedP3P& n, double d12) {
  const double d12s = d12 * d12;
  const double d13s = n.b * d12s;
  const double d23s = n.a * d12s;
  const double r12 = std::abs(d[0] * d[0] + d[1] * d[1] - n.r * d[0] * d[1] - d12s) / d12s;
  const double r13 = std::abs(d[0] * d[0] + d[2] * d[2] - n.q * d[0] * d[2] - d13s) / d13s;
  const double r23 = std::abs(d[1] * d[1] + d[2] * d[2] - n.p * d[1] * d[2] - d23s) / d23s;
  return std::max({r12, r13, r23});
}

}  // namespace

NormalizedP3P normalize(const P3PProblem& pr) {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(pr.d12) || !positive(pr.d13) || !positive(pr.d23)) {
    throw Error(ErrorCode::InvalidProblem, "inter-LED distances must be positive");
  }
  const double slack = 1e-12 * (pr.d12 + pr.d13 + pr.d23);
  if (pr.d12 + pr.d13 < pr.d23 - slack || pr.d12 + pr.d23 < pr.d13 - slack || pr.d13 + pr.d23 < pr.d12 - slack) {
    throw Error(ErrorCode::InvalidProblem, "inter-LED distances violate the triangle inequality");
  }
  const auto open_angle = [](double v) { return std::isfinite(v) && v > 0.0 && v < std::numbers::pi; };
  if (!open_angle(pr.alpha12) || !open_angle(pr.alpha13) || !open_angle(pr.alpha23)) {
    throw Error(ErrorCode::InvalidProblem, "inter-bearing angles must lie in (0, pi)");
  }
  NormalizedP3P n;
  n.r = 2.0 * std::cos(pr.alpha12);
  n.q = 2.0 * std::cos(pr.alpha13);
  n.p = 2.0 * std::cos(pr.alpha23);
  n.a = (pr.d23 * pr.d23) / (pr.d12 * pr.d12);
  n.b = (pr.d13 * pr.d13) / (pr.d12 * pr.d12);
  return n;
}

std::array<double, 5> elimination_quartic(const NormalizedP3P& n) {
  const Conics c = conics(n);
  // Resultant of the two quadratics in x:
  //   (A1 C2 - A2 C1)^2 - (A1 B2 - A2 B1)(B1 C2 - B2 C1)
  const Poly P = scaled(c.C2, c.A1) - scaled(c.C1, c.A2);
  const Poly S = scaled(c.B2, c.A1) - scaled(c.B1, c.A2);
  const Poly T = c.B1 * c.C2 - c.B2 * c.C1;
  return P * P - S * T;
}

DistanceCandidateSet solve_candidates(const NormalizedP3P& n, double d12) {
  if (!(d12 > 0.0) || !(n.a > 0.0) || !(n.b > 0.0)) {
    throw Error(ErrorCode::InvalidProblem, "normalized problem needs a, b, d12 > 0");
  }
  const double cos_min = std::cos(kMinBearingAngle);
  if (n.r / 2.0 > cos_min || n.q / 2.0 > cos_min || n.p / 2.0 > cos_min) {
    throw Error(ErrorCode::DegenerateGeometry, "LED bearings are nearly collinear");
  }

  const Conics c = conics(n);
  const Poly P = scaled(c.C2, c.A1) - scaled(c.C1, c.A2);

  DistanceCandidateSet out;
  const auto accept = [&](double x, double y) {
    newton_polish(n, x, y);
    if (!(x > 0.0) || !(y > 0.0)) return;
    const double v = x * x + y * y - x * y * n.r;
    if (!(v > 0.0)) return;
    for (const auto& prev : out) {
      if (std::abs(prev.x - x) < 1e-8 && std::abs(prev.y - y) < 1e-8) return;
    }
    DistanceCandidate cand;
    const double d3 = d12 / std::sqrt(v);
    cand.d = {x * d3, y * d3, d3};
    cand.x = x;
    cand.y = y;
    cand.v = v;
    if (!(relative_residual(cand.d, n, d12) <= 1e-6)) return;
    out.push_back(cand);
  };

  for (const auto& root : polynomial_roots(elimination_quartic(n))) {
    const double y = root.real();
    // A double root comes back from the eigen solver as a pair with an
    // imaginary part near sqrt(eps); polish and the residual check decide.
    if (std::abs(root.imag()) >= 1e-5 * (1.0 + std::abs(y))) continue;
    if (!(y > 0.0)) continue;
    // A2 E1 - A1 E2 is linear in x with slope a (r y - q).
    const double slope = n.a * (n.r * y - n.q);
    const double scale = n.a * (std::abs(n.r * y) + std::abs(n.q));
    if (std::abs(slope) > 1e-10 * scale) accept(eval(P, y) / slope, y);
    if (std::abs(slope) <= 1e-6 * scale) {
      // Both conics share the x^2 elimination direction; take x from E1.
      const double b1 = eval(c.B1, y);
      const double c1 = eval(c.C1, y);
      const double disc = b1 * b1 - 4.0 * c.A1 * c1;
      const double sq = std::sqrt(std::max(disc, 0.0));
      if (disc < -1e-8 * b1 * b1) continue;
      accept((-b1 + sq) / (2.0 * c.A1), y);
      accept((-b1 - sq) / (2.0 * c.A1), y);
    }
  }

  if (out.empty()) {
    throw Error(ErrorCode::NoCandidates, "no positive real solution of the distance system");
  }
  std::sort(out.begin(), out.end(), [](const DistanceCandidate& l, const DistanceCandidate& r) {
    return l.d[0] != r.d[0] ? l.d[0] < r.d[0] : l.d[1] < r.d[1];
  });
  return out;
}

DistanceCandidateSet solve_p3p(const P3PProblem& problem) { return solve_candidates(normalize(problem), problem.d12); }

double law_of_cosines_residual(const std::array<double, 3>& d, const P3PProblem& pr) {
  const auto term = [](double di, double dj, double alpha, double dij) {
    return std::abs(di * di + dj * dj - 2.0 * di * dj * std::cos(alpha) - dij * dij);
  };
  return std::max({term(d[0], d[1], pr.alpha12, pr.d12), term(d[0], d[2], pr.alpha13, pr.d13),
                   term(d[1], d[2], pr.alpha23, pr.d23)});
}

}  // namespace rp3p
