#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

#include "holevo/bloch_geometry.hpp"
#include "holevo/errors.hpp"
#include "holevo/quantum_fisher.hpp"
#include "holevo/types.hpp"
#include "holevo/weight.hpp"

namespace holevo {

/// Tr(W G^-1).
inline double bound_sld(const FisherBundle& fb, const WeightMatrix& w) {
  return (w.matrix() * fb.Ginv).trace();
}

/// Tr(W Re G~^-1) + TrAbs(W Im G~^-1).
inline double bound_rld(const FisherBundle& fb, const WeightMatrix& w) {
  return (w.matrix() * fb.Gtilde_inv.real()).trace() + trabs(w, fb.Gtilde_inv.imag());
}

/// Tr(W Re Z) + TrAbs(W Im Z).
inline double bound_z(const FisherBundle& fb, const WeightMatrix& w) {
  return (w.matrix() * fb.Z.real()).trace() + trabs(w, fb.im_z());
}

/// Bound attainable with separable measurements.
inline double bound_nagaoka(const FisherBundle& fb, const WeightMatrix& w) {
  return bound_sld(fb, w) + 2.0 * std::sqrt(w.det() * fb.Ginv.determinant());
}

/// Relative size of C^Z - C^R below which the correction is taken in its limit.
inline constexpr double kCorrectionUnderflow = 1e-13;

/// S = (C^R - (C^Z + C^S)/2)^2 / (C^Z - C^R).
inline double s_correction(double c_s, double c_r, double c_z) {
  const double denom = c_z - c_r;
  if (!(denom > kCorrectionUnderflow * std::abs(c_z))) {
    throw BranchError("correction undefined when C^Z <= C^R");
  }
  const double num = 0.5 * (c_z + c_s) - c_r;
  return num * num / denom;
}

/// H(x) = 2|x| - 1 for |x| >= 1, x^2 otherwise. C^1 across |x| = 1.
inline double h_of_x(double x) {
  const double ax = std::abs(x);
  return ax >= 1.0 ? 2.0 * ax - 1.0 : x * x;
}

/// C^S + (C^Z - C^R) H((C^Z - C^S) / (2 (C^Z - C^R))), with a H(b/a) -> 2|b|
/// as a -> 0.
inline double holevo_unified(double c_s, double c_r, double c_z) {
  const double a = c_z - c_r;
  const double b = 0.5 * (c_z - c_s);
  if (a < kCorrectionUnderflow * std::abs(c_z)) return c_s + 2.0 * std::abs(b);
  return c_s + a * h_of_x(b / a);
}

/// Correction-branch value written with TrAbs and the rank-one gap:
/// C^S + TrAbs(W Im Z)^2 / (4 Tr(W (G^-1 - Re G~^-1))).
inline double holevo_correction_form(const FisherBundle& fb, const WeightMatrix& w) {
  const double t = trabs(w, fb.im_z());
  const double d = (w.matrix() * fb.rank_one_gap()).trace();
  if (!(d > 0.0)) throw BranchError("rank-one gap vanishes; model is D-invariant");
  return bound_sld(fb, w) + 0.25 * t * t / d;
}

/// Result of minimizing (xi|A xi) + 2|(b|xi) + c| over the plane.
struct QuadAbsMin {
  double value = 0.0;
  Vec2 argmin = Vec2::Zero();
};

inline QuadAbsMin quadratic_abs_min(const Mat2& a, const Vec2& b, double c) {
  const double scale = a.cwiseAbs().maxCoeff();
  const double det = a.determinant();
  if (!a.allFinite() || !b.allFinite() || !std::isfinite(c)) {
    throw DomainError("non-finite quadratic data");
  }
  if (std::abs(a(0, 1) - a(1, 0)) > 1e-12 * scale || !(a(0, 0) > 0.0) ||
      !(det > 1e-14 * scale * scale)) {
    throw SingularMatrixError("quadratic form is not positive definite");
  }
  QuadAbsMin r;
  if (b.squaredNorm() == 0.0) {
    r.value = 2.0 * std::abs(c);
    return r;
  }
  const Vec2 ainv_b = a.ldlt().solve(b);
  const double alpha = b.dot(ainv_b);
  if (std::abs(c) >= alpha) {
    r.value = 2.0 * std::abs(c) - alpha;
    r.argmin = -(c >= 0.0 ? 1.0 : -1.0) * ainv_b;
  } else {
    r.value = c * c / alpha;
    r.argmin = -(c / alpha) * ainv_b;
  }
  return r;
}

/// Coefficients (A, b, c) of the reduced two-dimensional problem.
struct ReducedProblem {
  Mat2 a;
  Vec2 b;
  double c;
};

inline ReducedProblem reduced_problem(const FisherBundle& fb, const WeightMatrix& w) {
  const double root = std::sqrt(w.det());
  return {fb.perp_norm * w.matrix(), fb.gap * root * fb.gamma, root * fb.cross};
}

/// h(xi) = C^S + <l_perp,Q^-1 l_perp>(xi|W xi) + 2 sqrt(det W)|<l^1,F l^2> + gap (gamma|xi)|.
/// The observables x^i = l^i + xi_i l_perp sweep the whole feasible set.
inline double reduced_holevo_function(const FisherBundle& fb, const WeightMatrix& w, const Vec2& xi) {
  const double root = std::sqrt(w.det());
  return bound_sld(fb, w) + fb.perp_norm * xi.dot(w.matrix() * xi) +
         2.0 * root * std::abs(fb.cross + fb.gap * fb.gamma.dot(xi));
}

inline Vec2 minimizer_xi(const FisherBundle& fb, const WeightMatrix& w) {
  const auto p = reduced_problem(fb, w);
  return quadratic_abs_min(p.a, p.b, p.c).argmin;
}

/// Bloch parts of an optimal pair of observables, x^i = l^i + xi*_i l_perp.
inline std::array<Vec3, 2> optimal_bloch_observables(const FisherBundle& fb, const WeightMatrix& w) {
  const Vec2 xi = minimizer_xi(fb, w);
  return {fb.dual[0] + xi(0) * fb.perp, fb.dual[1] + xi(1) * fb.perp};
}

enum class Branch { RldBranch, CorrectionBranch, Boundary };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::RldBranch: return "RldBranch";
    case Branch::CorrectionBranch: return "CorrectionBranch";
    case Branch::Boundary: return "Boundary";
  }
  return "?";
}

struct BoundsReport {
  double c_s = 0, c_r = 0, c_z = 0, c_h = 0, c_n = 0;
  double s_correction = 0;
  Branch branch = Branch::RldBranch;
  Vec2 xi_star = Vec2::Zero();
  double b_value = 0;    ///< C^R - (C^Z + C^S)/2
  double c_h_unified = 0;
  std::optional<double> c_h_trabs_form;  ///< only on the correction branch
};

/// Half-width of the band around B = 0 treated as the region boundary.
inline double boundary_tolerance(double c_s, double c_z) {
  return 1e-9 * (std::abs(c_z) + std::abs(c_s));
}

inline double b_theta(const FisherBundle& fb, const WeightMatrix& w) {
  return bound_rld(fb, w) - 0.5 * (bound_z(fb, w) + bound_sld(fb, w));
}

inline BoundsReport holevo_bound(const FisherBundle& fb, const WeightMatrix& w) {
  BoundsReport r;
  r.c_s = bound_sld(fb, w);
  r.c_r = bound_rld(fb, w);
  r.c_z = bound_z(fb, w);
  r.c_n = bound_nagaoka(fb, w);
  r.b_value = r.c_r - 0.5 * (r.c_z + r.c_s);
  const double tau = boundary_tolerance(r.c_s, r.c_z);

  if (r.b_value > tau) {
    r.branch = Branch::RldBranch;
  } else if (r.b_value < -tau) {
    r.branch = Branch::CorrectionBranch;
  } else {
    r.branch = Branch::Boundary;
  }

  if (r.branch == Branch::CorrectionBranch) {
    if (r.c_z - r.c_r < kCorrectionUnderflow * std::abs(r.c_z)) {
      r.c_h = holevo_unified(r.c_s, r.c_r, r.c_z);
      r.s_correction = r.c_h - r.c_r;
    } else {
      r.s_correction = s_correction(r.c_s, r.c_r, r.c_z);
      r.c_h = r.c_r + r.s_correction;
      r.c_h_trabs_form = holevo_correction_form(fb, w);
    }
  } else {
    r.c_h = r.c_r;
  }
  r.c_h_unified = holevo_unified(r.c_s, r.c_r, r.c_z);
  r.xi_star = minimizer_xi(fb, w);
  return r;
}

inline BoundsReport holevo_bound(const BlochModelPoint& m, const WeightMatrix& w) {
  return holevo_bound(fisher_bundle(m), w);
}

enum class WeightRegion { WPlus, WMinus, WBoundary };

inline const char* to_string(WeightRegion r) {
  switch (r) {
    case WeightRegion::WPlus: return "WPlus";
    case WeightRegion::WMinus: return "WMinus";
    case WeightRegion::WBoundary: return "WBoundary";
  }
  return "?";
}

struct WeightRegionLabel {
  WeightRegion label = WeightRegion::WPlus;
  double b_value = 0;
};

inline WeightRegionLabel classify_weight(const FisherBundle& fb, const WeightMatrix& w) {
  const double cs = bound_sld(fb, w);
  const double cz = bound_z(fb, w);
  const double b = bound_rld(fb, w) - 0.5 * (cz + cs);
  const double tau = boundary_tolerance(cs, cz);
  WeightRegionLabel out;
  out.b_value = b;
  out.label = b > tau ? WeightRegion::WPlus : (b < -tau ? WeightRegion::WMinus : WeightRegion::WBoundary);
  return out;
}

/// |<l^1,F l^2>| / Tr(G^-1 - Re G~^-1).
inline double alpha_theta(const FisherBundle& fb) {
  if (is_d_invariant_point(fb.point)) throw SpecialModelError("model is D-invariant at this point");
  if (is_classical_point(fb.point)) throw SpecialModelError("model is asymptotically classical at this point");
  return std::abs(fb.cross) / fb.rank_one_gap().trace();
}

/// c U [[1, a w w2], [a w w2, a^2 w2^2]] U^T with U the rotation aligned to
/// gamma and a = alpha_theta. B vanishes exactly on w^2 + w2^2 = 1.
inline WeightMatrix weight_family_42(const FisherBundle& fb, double w, double w2, double c) {
  if (!(std::abs(w) < 1.0) || !(w2 > 0.0) || !(c > 0.0)) {
    throw DomainError("family requires |w| < 1, w2 > 0, c > 0");
  }
  const double a = alpha_theta(fb);
  const Vec2 g = fb.gamma / fb.gamma.norm();
  Mat2 u;
  u << g(0), -g(1), g(1), g(0);
  Mat2 core;
  core << 1.0, a * w * w2, a * w * w2, a * a * w2 * w2;
  return WeightMatrix::from_matrix(c * u * core * u.transpose());
}

/// Trace-one family R(omega) diag((1+w)/2, (1-w)/2) R(omega)^T.
inline WeightMatrix weight_family_53(double w, double omega) {
  if (!std::isfinite(w) || !std::isfinite(omega) || !(std::abs(w) < 1.0)) {
    throw DomainError("family requires |w| < 1");
  }
  const double co = std::cos(omega), si = std::sin(omega);
  Mat2 rot;
  rot << co, -si, si, co;
  const Mat2 d = Eigen::Vector2d(0.5 * (1.0 + w), 0.5 * (1.0 - w)).asDiagonal();
  return WeightMatrix::from_matrix(rot * d * rot.transpose());
}

/// Three-parameter models are D-invariant, so the bound is the RLD bound.
inline double holevo_bound_3param(const ThreeParamPoint& m, const Mat3& w) {
  if (!m.s.allFinite() || !w.allFinite()) throw DomainError("non-finite input");
  for (const auto& d : m.ds) {
    if (!d.allFinite()) throw DomainError("non-finite derivative");
  }
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-12 * w.cwiseAbs().maxCoeff()) {
    throw DomainError("weight matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> wes(w, Eigen::EigenvaluesOnly);
  if (!(wes.eigenvalues().minCoeff() > 0.0)) throw DomainError("weight matrix must be positive definite");

  const double triple = m.ds[0].dot(m.ds[1].cross(m.ds[2]));
  if (!(std::abs(triple) >= kDegenerateTol * m.ds[0].norm() * m.ds[1].norm() * m.ds[2].norm())) {
    throw DegenerateModelError("derivatives are linearly dependent");
  }
  const CMat3 qt = q_tilde(m.s);
  CMat3 g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      g(i, j) = inner(CVec3(m.ds[i].cast<cplx>()), CVec3(qt * m.ds[j].cast<cplx>()));
    }
  }
  const CMat3 ginv = g.inverse();
  return (w * ginv.real()).trace() + trabs_spectral(w, Mat3(ginv.imag()));
}

/// Bound for n independent copies.
inline double n_copy_bound(double single_copy, int n) {
  if (n < 1) throw DomainError("copy count must be positive");
  return single_copy / static_cast<double>(n);
}

}  // namespace holevo
