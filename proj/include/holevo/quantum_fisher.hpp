#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "holevo/bloch_geometry.hpp"
#include "holevo/errors.hpp"
#include "holevo/types.hpp"
#include "holevo/weight.hpp"

namespace holevo {

namespace detail {

template <typename M>
double max_abs_entry(const M& m) {
  return m.cwiseAbs().maxCoeff();
}

/// Adjugate inverse of a 2x2 matrix (real or complex).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> invert2(const Eigen::Matrix<Scalar, 2, 2>& m) {
  const Scalar det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double scale = max_abs_entry(m);
  if (!(std::abs(det) >= 1e-14 * scale * scale) || scale == 0.0) {
    throw DegenerateModelError("2x2 matrix is singular to working precision");
  }
  Eigen::Matrix<Scalar, 2, 2> adj;
  adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return adj / det;
}

}  // namespace detail

/// Everything the bounds need at one model point. Built once by
/// fisher_bundle() and then treated as an immutable value.
struct FisherBundle {
  BlochModelPoint point;
  double gap = 1.0;  ///< 1 - |s|^2

  Mat2 G;            ///< SLD Fisher information
  Mat2 Ginv;
  CMat2 Gtilde;      ///< RLD Fisher information
  CMat2 Gtilde_inv;
  CMat2 Z;           ///< z^{ij} = <l^i, Q~^-1 l^j>

  std::array<Vec3, 2> sld;     ///< l_i
  std::array<Vec3, 2> dual;    ///< l^i
  std::array<CVec3, 2> rld;    ///< l~_i
  std::array<CVec3, 2> rdual;  ///< l~^i

  Vec2 gamma;
  Vec3 perp;            ///< d1s x d2s
  double perp_norm = 0; ///< <l_perp, Q^-1 l_perp>
  double cross = 0;     ///< <l^1, F l^2> = Im z^{12}

  /// Im Z as a real antisymmetric matrix.
  [[nodiscard]] Mat2 im_z() const { return Z.imag(); }
  /// G^-1 - Re G~^-1, positive semidefinite of rank <= 1.
  [[nodiscard]] Mat2 rank_one_gap() const { return Ginv - Gtilde_inv.real(); }
};

inline Mat2 sld_fisher(const BlochModelPoint& m) {
  require_finite(m);
  const Mat3 q = q_matrix(m.s);
  Mat2 g;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) g(i, j) = m.d(i).dot(q * m.d(j));
  }
  g(0, 1) = g(1, 0) = 0.5 * (g(0, 1) + g(1, 0));
  return g;
}

inline CMat2 rld_fisher(const BlochModelPoint& m) {
  require_finite(m);
  const CMat3 qt = q_tilde(m.s);
  CMat2 g;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      g(i, j) = inner(CVec3(m.d(i).cast<cplx>()), CVec3(qt * m.d(j).cast<cplx>()));
    }
  }
  return 0.5 * (g + g.adjoint());
}

inline std::array<Vec3, 2> dual_vectors(const BlochModelPoint& m) {
  const auto l = sld_bloch_vectors(m);
  const Mat2 ginv = detail::invert2(sld_fisher(m));
  return {ginv(0, 0) * l[0] + ginv(1, 0) * l[1], ginv(0, 1) * l[0] + ginv(1, 1) * l[1]};
}

inline std::array<CVec3, 2> rld_dual_vectors(const BlochModelPoint& m) {
  const auto l = rld_bloch_vectors(m);
  const CMat2 ginv = detail::invert2(rld_fisher(m));
  return {ginv(0, 0) * l[0] + ginv(1, 0) * l[1], ginv(0, 1) * l[0] + ginv(1, 1) * l[1]};
}

namespace detail {

inline CMat2 z_from_duals(const std::array<Vec3, 2>& dual, const Vec3& s) {
  const CMat3 qti = q_tilde_inverse_closed(s);
  CMat2 z;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      z(i, j) = inner(CVec3(dual[i].cast<cplx>()), CVec3(qti * dual[j].cast<cplx>()));
    }
  }
  return z;
}

}  // namespace detail

inline CMat2 z_matrix(const BlochModelPoint& m) {
  require_mixed(m.s);
  return detail::z_from_duals(dual_vectors(m), m.s);
}

inline FisherBundle fisher_bundle(const BlochModelPoint& m) {
  require_finite(m);
  require_mixed(m.s);
  require_regular(m);

  FisherBundle fb;
  fb.point = m;
  fb.gap = purity_gap(m.s);
  fb.G = sld_fisher(m);
  fb.Ginv = detail::invert2(fb.G);
  fb.Gtilde = rld_fisher(m);
  fb.Gtilde_inv = detail::invert2(fb.Gtilde);

  fb.sld = sld_bloch_vectors(m);
  fb.rld = rld_bloch_vectors(m);
  for (int i = 0; i < 2; ++i) {
    fb.dual[i] = fb.Ginv(0, i) * fb.sld[0] + fb.Ginv(1, i) * fb.sld[1];
    fb.rdual[i] = fb.Gtilde_inv(0, i) * fb.rld[0] + fb.Gtilde_inv(1, i) * fb.rld[1];
  }
  fb.Z = detail::z_from_duals(fb.dual, m.s);

  fb.gamma = gamma_vector(m);
  fb.perp = ell_perp(m);
  fb.perp_norm = fb.perp.dot(q_inverse_closed(m.s) * fb.perp);
  fb.cross = fb.dual[0].dot(f_matrix(m.s) * fb.dual[1]);
  return fb;
}

/// Residuals of the three closed-form relations tying the Fisher data to
/// the bounds. Each entry is |lhs - rhs|, already divided by a natural scale.
struct Lemma7Residuals {
  double perp_det = 0;   ///< <l_perp,Q^-1 l_perp> = gap det G = gap^2 det G~
  double trabs = 0;      ///< 2 sqrt(det W)|<l^1,F l^2>| = TrAbs(W Im G~^-1) = TrAbs(W Im Z)
  double gamma_gap = 0;  ///< (gamma|W^-1 gamma) = det(W^-1 G)/gap (C^Z - C^R)

  [[nodiscard]] double max() const { return std::max({perp_det, trabs, gamma_gap}); }
};

inline Lemma7Residuals lemma7_identities(const FisherBundle& fb, const WeightMatrix& w) {
  Lemma7Residuals r;

  const double det_g = fb.G.determinant();
  const double det_gt = (fb.Gtilde(0, 0) * fb.Gtilde(1, 1) - fb.Gtilde(0, 1) * fb.Gtilde(1, 0)).real();
  const double a = fb.perp_norm;
  const double b = fb.gap * det_g;
  const double c = fb.gap * fb.gap * det_gt;
  r.perp_det = std::max(std::abs(a - b), std::abs(a - c)) / std::max({std::abs(a), std::abs(b), 1e-300});

  const double t0 = 2.0 * std::sqrt(w.det()) * std::abs(fb.cross);
  const double t1 = trabs(w, fb.Gtilde_inv.imag());
  const double t2 = trabs(w, fb.im_z());
  r.trabs = std::max(std::abs(t0 - t1), std::abs(t0 - t2)) / std::max(1.0, t0);

  const double lhs = fb.gamma.dot(w.inverse() * fb.gamma);
  const double cz_minus_cr = (w.matrix() * fb.rank_one_gap()).trace();
  const double rhs = det_g / w.det() / fb.gap * cz_minus_cr;
  r.gamma_gap = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
  return r;
}

/// Holevo bound of a one-parameter model: the inverse SLD Fisher information.
inline double one_param_bound(const OneParamPoint& m) {
  if (!m.s.allFinite() || !m.ds.allFinite()) throw DomainError("non-finite one-parameter point");
  if (m.ds.squaredNorm() == 0.0) throw DegenerateModelError("derivative vanishes");
  return 1.0 / m.ds.dot(q_matrix(m.s) * m.ds);
}

}  // namespace holevo
