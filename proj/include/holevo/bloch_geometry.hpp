#pragma once

// Bloch-vector algebra for qubit models.
//
// A qubit state is rho = (I + s.sigma)/2 with |s| < 1. Logarithmic
// derivatives, Fisher metrics and their inverses all reduce to 3x3 real or
// complex linear algebra built from three matrices:
//
//   Q       = 1 + |s><s| / (1 - s^2)        Q^-1      = 1 - |s><s|
//   Q~      = (1 - iF) / (1 - s^2)          Q~^-1     = Q^-1 + iF
//
// where F a = s x a. The SLD Bloch vector is l_i = Q d_i s, the RLD Bloch
// vector is l~_i = Q~ d_i s.

#include <array>
#include <cmath>
#include <string>

#include "holevo/errors.hpp"
#include "holevo/types.hpp"

namespace holevo {

/// |s| >= 1 - kPureGuard is treated as pure by every mixed-state operation.
inline constexpr double kPureGuard = 1e-12;
/// |d1s x d2s| < kDegenerateTol |d1s||d2s| means the derivatives are parallel.
inline constexpr double kDegenerateTol = 1e-10;

/// <a|b> = sum conj(a_i) b_i.
inline cplx inner(const CVec3& a, const CVec3& b) { return a.dot(b); }
inline double inner(const Vec3& a, const Vec3& b) { return a.dot(b); }

/// 1 - |s|^2.
inline double purity_gap(const Vec3& s) { return 1.0 - s.squaredNorm(); }

inline void require_finite(const BlochModelPoint& m) {
  if (!m.all_finite()) throw DomainError("model point has non-finite components");
}

inline void require_mixed(const Vec3& s) {
  if (!s.allFinite()) throw DomainError("Bloch vector has non-finite components");
  const double r = s.norm();
  if (r >= 1.0 - kPureGuard) {
    throw PureStateError("|s| = " + std::to_string(r) + " is not inside the Bloch ball");
  }
}

/// Throws DegenerateModelError unless d1s and d2s are linearly independent.
inline void require_regular(const BlochModelPoint& m) {
  require_finite(m);
  const double cross = m.d1s.cross(m.d2s).norm();
  if (!(cross >= kDegenerateTol * m.d1s.norm() * m.d2s.norm()) || cross == 0.0) {
    throw DegenerateModelError("partial derivatives of the Bloch vector are parallel");
  }
}

/// Q^-1 = 1 - |s><s| with no purity check; defined on the closed ball.
inline Mat3 q_inverse_closed(const Vec3& s) { return Mat3::Identity() - s * s.transpose(); }

inline Mat3 q_matrix(const Vec3& s) {
  require_mixed(s);
  return Mat3::Identity() + s * s.transpose() / purity_gap(s);
}
inline Mat3 q_matrix(const BlochModelPoint& m) { return q_matrix(m.s); }

inline Mat3 q_inverse(const Vec3& s) {
  require_mixed(s);
  return q_inverse_closed(s);
}
inline Mat3 q_inverse(const BlochModelPoint& m) { return q_inverse(m.s); }

/// F_ij = sum_k eps_ikj s_k, so that F a = s x a.
inline Mat3 f_matrix(const Vec3& s) {
  Mat3 f;
  f << 0.0, -s(2), s(1),
       s(2), 0.0, -s(0),
       -s(1), s(0), 0.0;
  return f;
}
inline Mat3 f_matrix(const BlochModelPoint& m) { return f_matrix(m.s); }

inline CMat3 q_tilde(const Vec3& s) {
  require_mixed(s);
  const cplx i(0.0, 1.0);
  return (CMat3::Identity() - i * f_matrix(s).cast<cplx>()) / purity_gap(s);
}
inline CMat3 q_tilde(const BlochModelPoint& m) { return q_tilde(m.s); }

/// Q~^-1 = Q^-1 + iF, on the closed ball.
inline CMat3 q_tilde_inverse_closed(const Vec3& s) {
  const cplx i(0.0, 1.0);
  return q_inverse_closed(s).cast<cplx>() + i * f_matrix(s).cast<cplx>();
}

inline CMat3 q_tilde_inverse(const Vec3& s) {
  require_mixed(s);
  return q_tilde_inverse_closed(s);
}
inline CMat3 q_tilde_inverse(const BlochModelPoint& m) { return q_tilde_inverse(m.s); }

/// SLD Bloch vectors l_i = Q d_i s.
inline std::array<Vec3, 2> sld_bloch_vectors(const BlochModelPoint& m) {
  require_finite(m);
  const Mat3 q = q_matrix(m.s);
  return {q * m.d1s, q * m.d2s};
}

/// RLD Bloch vectors l~_i = Q~ d_i s; complex in general.
inline std::array<CVec3, 2> rld_bloch_vectors(const BlochModelPoint& m) {
  require_finite(m);
  const CMat3 qt = q_tilde(m.s);
  return {qt * m.d1s.cast<cplx>(), qt * m.d2s.cast<cplx>()};
}

/// gamma_i = <s, l_i> = <s, d_i s> / (1 - s^2). Vanishes iff the model is
/// D-invariant at this point.
inline Vec2 gamma_vector(const BlochModelPoint& m) {
  require_finite(m);
  require_mixed(m.s);
  const double gap = purity_gap(m.s);
  return Vec2(m.s.dot(m.d1s) / gap, m.s.dot(m.d2s) / gap);
}

/// Scale-relative threshold for the exact model conditions below.
inline constexpr double kClassifyTol = 1e-10;

/// <s, d_i s> = 0 for both derivatives (equivalently gamma = 0).
inline bool is_d_invariant_point(const BlochModelPoint& m) {
  const double r = m.s.norm();
  return std::abs(m.s.dot(m.d1s)) <= kClassifyTol * r * m.d1s.norm() &&
         std::abs(m.s.dot(m.d2s)) <= kClassifyTol * r * m.d2s.norm();
}

/// <s, d1s x d2s> = 0: the Bloch vector lies in the tangent plane.
inline bool is_classical_point(const BlochModelPoint& m) {
  const Vec3 c = m.d1s.cross(m.d2s);
  return std::abs(m.s.dot(c)) <= kClassifyTol * m.s.norm() * c.norm();
}

/// l_perp = d1s x d2s, orthogonal to both derivatives.
inline Vec3 ell_perp(const BlochModelPoint& m) {
  require_regular(m);
  return m.d1s.cross(m.d2s);
}

}  // namespace holevo
