#pragma once

#include <cassert>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "holevo/errors.hpp"
#include "holevo/types.hpp"

namespace holevo {

/// Real symmetric positive-definite 2x2 cost weight.
class WeightMatrix {
 public:
  WeightMatrix() : WeightMatrix(1.0, 0.0, 1.0) {}

  WeightMatrix(double w11, double w12, double w22) {
    if (!std::isfinite(w11) || !std::isfinite(w12) || !std::isfinite(w22)) {
      throw DomainError("weight matrix entries must be finite");
    }
    const double det = w11 * w22 - w12 * w12;
    if (!(w11 > 0.0) || !(det > 0.0)) {
      throw DomainError("weight matrix must be positive definite");
    }
    m_ << w11, w12, w12, w22;
  }

  /// Symmetrizes `m` before validating it.
  static WeightMatrix from_matrix(const Mat2& m) {
    return WeightMatrix(m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1));
  }

  static WeightMatrix identity() { return WeightMatrix(); }

  [[nodiscard]] const Mat2& matrix() const { return m_; }
  [[nodiscard]] double w11() const { return m_(0, 0); }
  [[nodiscard]] double w12() const { return m_(0, 1); }
  [[nodiscard]] double w22() const { return m_(1, 1); }
  [[nodiscard]] double det() const { return m_(0, 0) * m_(1, 1) - m_(0, 1) * m_(0, 1); }
  [[nodiscard]] double trace() const { return m_(0, 0) + m_(1, 1); }

  [[nodiscard]] Mat2 inverse() const {
    Mat2 inv;
    inv << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
    return inv / det();
  }

  [[nodiscard]] WeightMatrix scaled(double c) const {
    if (!(c > 0.0)) throw DomainError("weight scale must be positive");
    return WeightMatrix(c * w11(), c * w12(), c * w22());
  }

 private:
  Mat2 m_;
};

/// TrAbs{W X} via the spectrum of W^{1/2} X W^{1/2}. For real antisymmetric X
/// the eigenvalues of this matrix are purely imaginary; the sum of their
/// moduli equals the trace norm. Works for any dimension.
template <typename Derived1, typename Derived2>
double trabs_spectral(const Eigen::MatrixBase<Derived1>& w, const Eigen::MatrixBase<Derived2>& x) {
  using Mat = Eigen::MatrixXd;
  const Mat wm = w;
  const Mat xm = x;
  Eigen::SelfAdjointEigenSolver<Mat> es(wm);
  const Mat root = es.operatorSqrt();
  const Mat sandwich = root * xm * root;
  // i * (antisymmetric) is Hermitian; its real eigenvalues have the moduli we need.
  const Eigen::MatrixXcd herm = cplx(0.0, 1.0) * sandwich.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(herm, Eigen::EigenvaluesOnly);
  return hs.eigenvalues().cwiseAbs().sum();
}

/// TrAbs{W X} for 2x2 W and antisymmetric X: 2 sqrt(det W) |x_12|.
inline double trabs(const WeightMatrix& w, const Mat2& x) {
  const double closed = 2.0 * std::sqrt(w.det()) * std::abs(0.5 * (x(0, 1) - x(1, 0)));
#ifndef NDEBUG
  const double spectral = trabs_spectral(w.matrix(), x);
  assert(std::abs(closed - spectral) <= 1e-9 * (1.0 + closed));
#endif
  return closed;
}

}  // namespace holevo
