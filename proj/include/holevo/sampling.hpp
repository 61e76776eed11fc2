#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "holevo/types.hpp"
#include "holevo/weight.hpp"

namespace holevo::sampling {

using Rng = std::mt19937_64;

inline Vec3 gaussian3(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng), n(rng)};
}

/// Uniform in the ball of the given radius.
inline Vec3 uniform_ball(Rng& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec3 dir = gaussian3(rng);
  while (dir.norm() < 1e-12) dir = gaussian3(rng);
  return radius * std::cbrt(u(rng)) * dir.normalized();
}

/// Derivative pair whose angle has sine at least `min_sine`.
inline std::array<Vec3, 2> derivative_pair(Rng& rng, double min_sine = 0.05) {
  for (;;) {
    const Vec3 a = gaussian3(rng), b = gaussian3(rng);
    if (a.cross(b).norm() >= min_sine * a.norm() * b.norm()) return {a, b};
  }
}

inline BlochModelPoint random_mixed_point(Rng& rng, double radius = 0.95) {
  const auto d = derivative_pair(rng);
  return {uniform_ball(rng, radius), d[0], d[1]};
}

/// Derivatives orthogonal to s: gamma = 0.
inline BlochModelPoint random_d_invariant_point(Rng& rng, double radius = 0.95) {
  for (;;) {
    const Vec3 s = uniform_ball(rng, radius);
    if (s.norm() < 1e-3) continue;
    const Vec3 u = s.normalized();
    auto d = derivative_pair(rng);
    for (auto& v : d) v -= v.dot(u) * u;
    if (d[0].cross(d[1]).norm() >= 0.05 * d[0].norm() * d[1].norm()) return {s, d[0], d[1]};
  }
}

/// s in the span of the derivatives: classical at this point.
inline BlochModelPoint random_planar_point(Rng& rng, double radius = 0.95) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), r(0.0, 1.0);
  const auto d = derivative_pair(rng);
  Vec3 s = u(rng) * d[0] + u(rng) * d[1];
  s *= radius * std::cbrt(r(rng)) / std::max(s.norm(), 1e-12);
  return {s, d[0], d[1]};
}

inline ThreeParamPoint random_three_param_point(Rng& rng, double radius = 0.95) {
  for (;;) {
    ThreeParamPoint m;
    m.s = uniform_ball(rng, radius);
    for (auto& d : m.ds) d = gaussian3(rng);
    const double t = m.ds[0].dot(m.ds[1].cross(m.ds[2]));
    if (std::abs(t) >= 0.05 * m.ds[0].norm() * m.ds[1].norm() * m.ds[2].norm()) return m;
  }
}

/// Random rotation of diag(l1, l2) with eigenvalues log-uniform in [0.1, 10].
inline WeightMatrix random_weight(Rng& rng) {
  std::uniform_real_distribution<double> le(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  const double l1 = std::exp(le(rng)), l2 = std::exp(le(rng)), t = ang(rng);
  const double c = std::cos(t), s = std::sin(t);
  Mat2 r;
  r << c, -s, s, c;
  return WeightMatrix::from_matrix(r * Vec2(l1, l2).asDiagonal() * r.transpose());
}

inline Mat3 random_weight3(Rng& rng) {
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i) a.col(i) = gaussian3(rng);
  return a * a.transpose() + 0.1 * Mat3::Identity();
}

}  // namespace holevo::sampling
