#pragma once

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace holevo {

using cplx = std::complex<double>;

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat2 = Eigen::Matrix2d;
using CMat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3d;
using CMat3 = Eigen::Matrix3cd;

/// A two-parameter qubit model evaluated at one parameter point: the Bloch
/// vector and its two partial derivatives. This is all the local information
/// any bound depends on.
struct BlochModelPoint {
  Vec3 s = Vec3::Zero();
  Vec3 d1s = Vec3::UnitX();
  Vec3 d2s = Vec3::UnitY();

  [[nodiscard]] const Vec3& d(int i) const { return i == 0 ? d1s : d2s; }
  [[nodiscard]] bool all_finite() const {
    return s.allFinite() && d1s.allFinite() && d2s.allFinite();
  }
};

/// One-parameter counterpart of BlochModelPoint.
struct OneParamPoint {
  Vec3 s = Vec3::Zero();
  Vec3 ds = Vec3::UnitX();
};

/// Three-parameter model point; such models are always D-invariant.
struct ThreeParamPoint {
  Vec3 s = Vec3::Zero();
  std::array<Vec3, 3> ds{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
};

}  // namespace holevo
