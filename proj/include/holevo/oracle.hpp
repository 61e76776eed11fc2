#pragma once

// Brute-force reference computations on 2x2 density matrices. Nothing here
// reuses the Bloch-vector closed forms except where noted; the point is to
// have a second road to every number.

#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "holevo/bloch_geometry.hpp"
#include "holevo/errors.hpp"
#include "holevo/holevo_bounds.hpp"
#include "holevo/nelder_mead.hpp"
#include "holevo/quantum_fisher.hpp"
#include "holevo/types.hpp"
#include "holevo/weight.hpp"

namespace holevo::oracle {

/// {I, sigma_x, sigma_y, sigma_z}.
inline const std::array<CMat2, 4>& pauli() {
  static const std::array<CMat2, 4> p = [] {
    const cplx i(0.0, 1.0);
    std::array<CMat2, 4> m;
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, -i, i, 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return p;
}

inline CMat2 from_pauli(double c0, const Vec3& v) {
  const auto& p = pauli();
  return c0 * p[0] + v(0) * p[1] + v(1) * p[2] + v(2) * p[3];
}

/// Real Pauli coordinates (tr(sigma_a X)/2) of a Hermitian matrix.
inline Eigen::Vector4d pauli_coords(const CMat2& x) {
  Eigen::Vector4d c;
  for (int a = 0; a < 4; ++a) c(a) = 0.5 * (pauli()[a] * x).trace().real();
  return c;
}

inline CMat2 dagger(const CMat2& x) { return x.adjoint(); }
inline cplx tr(const CMat2& x) { return x.trace(); }

struct DensityPoint {
  CMat2 rho;
  std::array<CMat2, 2> drho;

  static DensityPoint from_bloch(const BlochModelPoint& m) {
    require_finite(m);
    DensityPoint dp;
    dp.rho = 0.5 * from_pauli(1.0, m.s);
    dp.drho[0] = 0.5 * from_pauli(0.0, m.d1s);
    dp.drho[1] = 0.5 * from_pauli(0.0, m.d2s);
    return dp;
  }

  [[nodiscard]] double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMat2> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  void require_positive() const {
    if (!(min_eigenvalue() >= 1e-12)) throw PureStateError("density matrix is not positive definite");
  }
};

struct HermitianPair {
  std::array<CMat2, 2> x;
};

/// SLD operators from the eigenbasis Lyapunov solution L_jk = 2 d_jk / (p_j + p_k).
inline std::array<CMat2, 2> sld_operators_matrix(const DensityPoint& dp) {
  dp.require_positive();
  Eigen::SelfAdjointEigenSolver<CMat2> es(dp.rho);
  const CMat2& v = es.eigenvectors();
  const Eigen::Vector2d p = es.eigenvalues();
  std::array<CMat2, 2> out;
  for (int i = 0; i < 2; ++i) {
    CMat2 d = v.adjoint() * dp.drho[i] * v;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) d(a, b) *= 2.0 / (p(a) + p(b));
    }
    out[i] = v * d * v.adjoint();
  }
  return out;
}

/// RLD operators rho^-1 d_i rho.
inline std::array<CMat2, 2> rld_operators_matrix(const DensityPoint& dp) {
  dp.require_positive();
  const CMat2 inv = dp.rho.inverse();
  return {inv * dp.drho[0], inv * dp.drho[1]};
}

/// Matrix-level Fisher data: G, G~, their inverses, the dual operators and Z.
struct MatrixFisher {
  std::array<CMat2, 2> sld, rld, sld_dual, rld_dual;
  Mat2 G, Ginv;
  CMat2 Gtilde, Gtilde_inv, Z;
};

inline MatrixFisher matrix_fisher(const DensityPoint& dp) {
  MatrixFisher mf;
  mf.sld = sld_operators_matrix(dp);
  mf.rld = rld_operators_matrix(dp);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      mf.G(i, j) = 0.5 * tr(dp.rho * (mf.sld[i] * mf.sld[j] + mf.sld[j] * mf.sld[i])).real();
      mf.Gtilde(i, j) = tr(dp.rho * mf.rld[j] * dagger(mf.rld[i]));
    }
  }
  mf.Ginv = mf.G.inverse();
  mf.Gtilde_inv = mf.Gtilde.inverse();
  for (int i = 0; i < 2; ++i) {
    mf.sld_dual[i] = mf.Ginv(0, i) * mf.sld[0] + mf.Ginv(1, i) * mf.sld[1];
    mf.rld_dual[i] = mf.Gtilde_inv(0, i) * mf.rld[0] + mf.Gtilde_inv(1, i) * mf.rld[1];
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) mf.Z(i, j) = tr(dp.rho * mf.sld_dual[j] * mf.sld_dual[i]);
  }
  return mf;
}

/// SLD inner product extended sesquilinearly: (tr(rho (Y X^+ + X^+ Y)))/2.
inline cplx sld_inner(const DensityPoint& dp, const CMat2& x, const CMat2& y) {
  return 0.5 * tr(dp.rho * (y * dagger(x) + dagger(x) * y));
}

namespace detail {

inline CMat2 commutation_hermitian(const DensityPoint& dp, const CMat2& x) {
  const auto& p = pauli();
  const cplx two_i(0.0, 2.0);
  Eigen::Matrix4d m;
  Eigen::Vector4d k;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) m(a, b) = tr(dp.rho * p[a] * p[b]).real();
    k(a) = (tr(dp.rho * (x * p[a] - p[a] * x)) / two_i).real();
  }
  Eigen::FullPivLU<Eigen::Matrix4d> lu(m);
  if (!lu.isInvertible() || std::abs(m.determinant()) < 1e-14) {
    throw SingularMatrixError("Pauli Gram matrix of rho is singular");
  }
  const Eigen::Vector4d d = lu.solve(k);
  return from_pauli(d(0), d.tail<3>());
}

}  // namespace detail

/// D(X) defined by <Y, D(X)> = tr(rho [X, Y]) / 2i for Hermitian Y, where
/// <.,.> is the SLD inner product; extended complex-linearly.
inline CMat2 commutation_operator(const DensityPoint& dp, const CMat2& x) {
  dp.require_positive();
  const cplx i(0.0, 1.0);
  const CMat2 h1 = 0.5 * (x + dagger(x));
  const CMat2 h2 = (x - dagger(x)) / (2.0 * i);
  return detail::commutation_hermitian(dp, h1) + i * detail::commutation_hermitian(dp, h2);
}

/// Maximum residuals of the relations linking D to the SLD/RLD operators.
struct CommutationResiduals {
  double sld_from_rld = 0;   ///< (I + iD) L~_i = L_i
  double im_z = 0;           ///< <L^i, D(L^j)> = Im z^{ij}
  double rld_gap = 0;        ///< <L~^i, D(L^j)> = -i (g~^{ij} - g^{ij})
};

inline CommutationResiduals commutation_residuals(const DensityPoint& dp) {
  const MatrixFisher mf = matrix_fisher(dp);
  const cplx i(0.0, 1.0);
  CommutationResiduals r;
  for (int a = 0; a < 2; ++a) {
    const CMat2 lhs = mf.rld[a] + i * commutation_operator(dp, mf.rld[a]);
    r.sld_from_rld = std::max(r.sld_from_rld, (lhs - mf.sld[a]).cwiseAbs().maxCoeff());
  }
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const CMat2 dl = commutation_operator(dp, mf.sld_dual[b]);
      const cplx v1 = sld_inner(dp, mf.sld_dual[a], dl);
      r.im_z = std::max(r.im_z, std::abs(v1 - mf.Z(a, b).imag()));
      const cplx v2 = sld_inner(dp, mf.rld_dual[a], dl);
      r.rld_gap = std::max(r.rld_gap, std::abs(v2 + i * (mf.Gtilde_inv(a, b) - mf.Ginv(a, b))));
    }
  }
  return r;
}

/// Distance of D(L_i) from span{L_1, L_2} in the SLD norm, maximized over i.
/// Vanishes exactly for D-invariant points.
inline double d_invariance_residual(const DensityPoint& dp) {
  const MatrixFisher mf = matrix_fisher(dp);
  double worst = 0.0;
  for (int a = 0; a < 2; ++a) {
    const CMat2 d = commutation_operator(dp, mf.sld[a]);
    Vec2 proj;
    for (int j = 0; j < 2; ++j) proj(j) = sld_inner(dp, mf.sld[j], d).real();
    const Vec2 coef = mf.Ginv * proj;
    const CMat2 rem = d - coef(0) * mf.sld[0] - coef(1) * mf.sld[1];
    worst = std::max(worst, std::sqrt(std::max(0.0, sld_inner(dp, rem, rem).real())));
  }
  return worst;
}

/// Tr(W Re Z[X]) + TrAbs(W Im Z[X]) with Z[X]_ij = tr(rho X^j X^i).
inline double holevo_function(const DensityPoint& dp, const HermitianPair& pair, const WeightMatrix& w,
                              double feasibility_tol = 1e-8) {
  for (int a = 0; a < 2; ++a) {
    if (std::abs(tr(dp.rho * pair.x[a])) > feasibility_tol) {
      throw FeasibilityError("observable is not centered");
    }
    for (int b = 0; b < 2; ++b) {
      const double target = a == b ? 1.0 : 0.0;
      if (std::abs(tr(dp.drho[b] * pair.x[a]) - target) > feasibility_tol) {
        throw FeasibilityError("local unbiasedness violated");
      }
    }
  }
  CMat2 z;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) z(a, b) = tr(dp.rho * pair.x[b] * pair.x[a]);
  }
  return (w.matrix() * z.real()).trace() + trabs_spectral(w.matrix(), Mat2(z.imag()));
}

/// Hermitian operator -<s,x> I + x.sigma, i.e. the centered observable with Bloch part x.
inline CMat2 observable_from_bloch(const DensityPoint& dp, const Vec3& x) {
  const CMat2 xs = from_pauli(0.0, x);
  return xs - tr(dp.rho * xs) * pauli()[0];
}

struct Minimum2 {
  double value = 0.0;
  Vec2 argmin = Vec2::Zero();
};

namespace detail {

/// Coarse grid over [c - R, c + R]^2 followed by simplex refinement.
template <typename Fn>
Minimum2 grid_then_simplex(const Fn& f, const Vec2& center, double radius, int n = 81) {
  Minimum2 best;
  best.value = std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Vec2 xi = center + radius * Vec2(-1.0 + 2.0 * a / (n - 1), -1.0 + 2.0 * b / (n - 1));
      const double v = f(xi);
      if (v < best.value || (v == best.value && (xi(0) < best.argmin(0) ||
                                                 (xi(0) == best.argmin(0) && xi(1) < best.argmin(1))))) {
        best.value = v;
        best.argmin = xi;
      }
    }
  }
  opt::SimplexOptions o;
  o.initial_step = 2.0 * radius / (n - 1);
  auto fx = [&](const Eigen::VectorXd& x) { return f(Vec2(x(0), x(1))); };
  const auto r = opt::nelder_mead(fx, Eigen::VectorXd(best.argmin), o);
  if (r.value < best.value) {
    best.value = r.value;
    best.argmin = Vec2(r.x(0), r.x(1));
  }
  return best;
}

}  // namespace detail

/// Minimizes the Holevo function over the feasible line family
/// x^i = l^i + xi_i l_perp, evaluating Z through the Q~^-1 bilinear form.
inline Minimum2 minimize_holevo_2d(const BlochModelPoint& m, const WeightMatrix& w) {
  const FisherBundle fb = fisher_bundle(m);
  const CMat3 qti = q_tilde_inverse(m.s);
  auto h = [&](const Vec2& xi) {
    std::array<CVec3, 2> x;
    for (int i = 0; i < 2; ++i) x[i] = (fb.dual[i] + xi(i) * fb.perp).cast<cplx>();
    CMat2 z;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) z(a, b) = inner(x[a], CVec3(qti * x[b]));
    }
    return (w.matrix() * z.real()).trace() + trabs_spectral(w.matrix(), Mat2(z.imag()));
  };
  const auto p = reduced_problem(fb, w);
  Eigen::SelfAdjointEigenSolver<Mat2> es(p.a, Eigen::EigenvaluesOnly);
  const double alpha = p.b.dot(p.a.ldlt().solve(p.b));
  const double r0 = 10.0 * (alpha + std::abs(p.c) + 1.0) / es.eigenvalues().minCoeff();
  return detail::grid_then_simplex(h, Vec2::Zero(), r0);
}

/// Minimizes over the full affine set of Bloch parts (x^1, x^2) in R^6 that
/// satisfy tr(d_j rho X^i) = delta. The constraint system and its null space
/// come from matrix traces and an SVD; no model-specific vectors are used.
inline double minimize_holevo_6d(const DensityPoint& dp, const WeightMatrix& w) {
  dp.require_positive();
  const auto& p = pauli();
  Eigen::Matrix<double, 4, 6> c = Eigen::Matrix<double, 4, 6>::Zero();
  Eigen::Vector4d rhs;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const int row = 2 * i + j;
      for (int k = 0; k < 3; ++k) {
        // tr(d_j rho X) is unaffected by the identity part of X.
        c(row, 3 * i + k) = tr(dp.drho[j] * p[k + 1]).real();
      }
      rhs(row) = i == j ? 1.0 : 0.0;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(c), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(3) > 1e-10 * sv(0))) throw DegenerateModelError("constraint system is rank deficient");
  const Eigen::VectorXd particular = svd.solve(rhs);
  const Eigen::MatrixXd null = svd.matrixV().rightCols(2);

  auto build = [&](const Vec2& eta) {
    const Eigen::VectorXd v = particular + null * eta;
    HermitianPair pair;
    for (int i = 0; i < 2; ++i) pair.x[i] = observable_from_bloch(dp, v.segment<3>(3 * i));
    return pair;
  };
  auto h = [&](const Vec2& eta) { return holevo_function(dp, build(eta), w); };

  // Expand the search box until the grid minimum is interior.
  double radius = 1.0;
  Minimum2 best;
  for (int attempt = 0; attempt < 40; ++attempt) {
    best = detail::grid_then_simplex(h, Vec2::Zero(), radius);
    if (best.argmin.lpNorm<Eigen::Infinity>() < 0.5 * radius) break;
    radius *= 4.0;
  }
  return best.value;
}

/// Dense grid plus simplex polish for (xi|A xi) + 2|(b|xi) + c|.
inline double grid_min_quadratic_abs(const Mat2& a, const Vec2& b, double c) {
  auto f = [&](const Vec2& xi) { return xi.dot(a * xi) + 2.0 * std::abs(b.dot(xi) + c); };
  Eigen::SelfAdjointEigenSolver<Mat2> es(a, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  const double alpha = b.dot(a.inverse() * b);
  const double radius = 10.0 * (alpha + std::abs(c) + 1.0) / std::min(1.0, lmin);
  Minimum2 best = detail::grid_then_simplex(f, Vec2::Zero(), radius, 201);
  // Second pass on a box around the first estimate.
  const Minimum2 fine = detail::grid_then_simplex(f, best.argmin, radius / 50.0, 101);
  return std::min(best.value, fine.value);
}

/// 3-parameter RLD Fisher information straight from rho^-1 d_i rho.
inline CMat3 rld_fisher_3param(const CMat2& rho, const std::array<CMat2, 3>& drho) {
  const CMat2 inv = rho.inverse();
  std::array<CMat2, 3> l;
  for (int i = 0; i < 3; ++i) l[i] = inv * drho[i];
  CMat3 g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) g(i, j) = tr(rho * l[j] * dagger(l[i]));
  }
  return g;
}

inline double rld_bound_3param(const ThreeParamPoint& m, const Mat3& w) {
  const CMat2 rho = 0.5 * from_pauli(1.0, m.s);
  std::array<CMat2, 3> d;
  for (int i = 0; i < 3; ++i) d[i] = 0.5 * from_pauli(0.0, m.ds[i]);
  const CMat3 ginv = rld_fisher_3param(rho, d).inverse();
  return (w * ginv.real()).trace() + trabs_spectral(w, Mat3(ginv.imag()));
}

}  // namespace holevo::oracle
