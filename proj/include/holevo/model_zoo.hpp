#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "holevo/bloch_geometry.hpp"
#include "holevo/errors.hpp"
#include "holevo/types.hpp"

namespace holevo::zoo {

/// Bivariate polynomial sum_ij c[i][j] t1^i t2^j.
struct Poly2 {
  std::vector<std::vector<double>> c;

  [[nodiscard]] double operator()(double t1, double t2) const {
    double acc = 0.0, p1 = 1.0;
    for (const auto& row : c) {
      double p2 = 1.0;
      for (double cij : row) {
        acc += cij * p1 * p2;
        p2 *= t2;
      }
      p1 *= t1;
    }
    return acc;
  }

  [[nodiscard]] double d1(double t1, double t2) const {
    double acc = 0.0, p1 = 1.0;
    for (std::size_t i = 1; i < c.size(); ++i) {
      double p2 = 1.0;
      for (double cij : c[i]) {
        acc += static_cast<double>(i) * cij * p1 * p2;
        p2 *= t2;
      }
      p1 *= t1;
    }
    return acc;
  }

  [[nodiscard]] double d2(double t1, double t2) const {
    double acc = 0.0, p1 = 1.0;
    for (const auto& row : c) {
      double p2 = 1.0;
      for (std::size_t j = 1; j < row.size(); ++j) {
        acc += static_cast<double>(j) * row[j] * p1 * p2;
        p2 *= t2;
      }
      p1 *= t1;
    }
    return acc;
  }

  static Poly2 theta1() { return Poly2{{{0.0}, {1.0}}}; }
  static Poly2 theta2() { return Poly2{{{0.0, 1.0}}}; }
  static Poly2 constant(double v) { return Poly2{{{v}}}; }

  bool operator==(const Poly2&) const = default;
};

/// s = (t1, t2, z0) with fixed 0 < |z0| < 1.
struct GenericZ {
  double theta0 = 0.2;
};

/// s = f1(t) u1 + f2(t) u2.
struct Planar {
  Vec3 u1 = Vec3::UnitX();
  Vec3 u2 = Vec3::UnitY();
  Poly2 f1 = Poly2::theta1();
  Poly2 f2 = Poly2::theta2();
};

/// Fixed-length family s = r (sin t1 cos t2 a + sin t1 sin t2 b + cos t1 a x b),
/// with (a, b) orthonormalized on construction.
struct Unitary {
  double radius = 0.5;
  Vec3 axis_a = Vec3::UnitX();
  Vec3 axis_b = Vec3::UnitY();
};

/// Arbitrary s(t); derivatives by central differences with step `h`.
/// `components` is set when s is polynomial, which makes it serializable.
struct Explicit {
  std::function<Vec3(double, double)> fn;
  std::optional<std::array<Poly2, 3>> components;
  double h = 1e-5;
};

/// Closed parameter rectangle.
struct Domain {
  double lo1 = -1.0, hi1 = 1.0, lo2 = -1.0, hi2 = 1.0;

  [[nodiscard]] bool contains(double t1, double t2) const {
    return t1 >= lo1 && t1 <= hi1 && t2 >= lo2 && t2 <= hi2;
  }
  bool operator==(const Domain&) const = default;
};

using FamilyKind = std::variant<GenericZ, Planar, Unitary, Explicit>;

struct ModelFamily {
  FamilyKind kind;
  Domain domain;
};

inline ModelFamily make_generic_z(double theta0, Domain d = {}) {
  if (!(std::abs(theta0) > 0.0 && std::abs(theta0) < 1.0)) {
    throw DomainError("GenericZ needs 0 < |theta0| < 1");
  }
  return {GenericZ{theta0}, d};
}

inline ModelFamily make_planar(const Vec3& u1, const Vec3& u2, Poly2 f1, Poly2 f2, Domain d = {}) {
  if (!u1.allFinite() || !u2.allFinite() || u1.cross(u2).norm() < kDegenerateTol * u1.norm() * u2.norm()) {
    throw DomainError("planar axes must be finite and independent");
  }
  return {Planar{u1, u2, std::move(f1), std::move(f2)}, d};
}

inline ModelFamily make_unitary(double radius, Vec3 a = Vec3::UnitX(), Vec3 b = Vec3::UnitY(),
                                Domain d = {0.0, std::numbers::pi, 0.0, 2.0 * std::numbers::pi}) {
  if (!(radius > 0.0 && radius < 1.0)) throw DomainError("unitary radius must lie in (0, 1)");
  if (!a.allFinite() || !b.allFinite() || a.cross(b).norm() < kDegenerateTol * a.norm() * b.norm()) {
    throw DomainError("unitary axes must be finite and independent");
  }
  a.normalize();
  b = (b - b.dot(a) * a).normalized();
  return {Unitary{radius, a, b}, d};
}

inline ModelFamily make_explicit(std::function<Vec3(double, double)> fn, double h = 1e-5, Domain d = {}) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  return {Explicit{std::move(fn), std::nullopt, h}, d};
}

inline ModelFamily make_explicit_poly(std::array<Poly2, 3> comps, double h = 1e-5, Domain d = {}) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  auto fn = [comps](double t1, double t2) {
    return Vec3(comps[0](t1, t2), comps[1](t1, t2), comps[2](t1, t2));
  };
  return {Explicit{fn, comps, h}, d};
}

/// Central-difference model point from a Bloch-vector map.
template <typename Fn>
BlochModelPoint finite_difference_point(const Fn& fn, double t1, double t2, double h) {
  BlochModelPoint m;
  m.s = fn(t1, t2);
  m.d1s = (fn(t1 + h, t2) - fn(t1 - h, t2)) / (2.0 * h);
  m.d2s = (fn(t1, t2 + h) - fn(t1, t2 - h)) / (2.0 * h);
  return m;
}

/// Bloch vector only.
inline Vec3 bloch_vector(const ModelFamily& f, double t1, double t2) {
  return std::visit(
      [&](const auto& k) -> Vec3 {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GenericZ>) {
          return Vec3(t1, t2, k.theta0);
        } else if constexpr (std::is_same_v<K, Planar>) {
          return k.f1(t1, t2) * k.u1 + k.f2(t1, t2) * k.u2;
        } else if constexpr (std::is_same_v<K, Unitary>) {
          const Vec3 c = k.axis_a.cross(k.axis_b);
          return k.radius * (std::sin(t1) * std::cos(t2) * k.axis_a +
                             std::sin(t1) * std::sin(t2) * k.axis_b + std::cos(t1) * c);
        } else {
          if (!k.fn) throw DomainError("explicit family has no map");
          return k.fn(t1, t2);
        }
      },
      f.kind);
}

/// Evaluates s and its derivatives, allowing |s| = 1. Use for pure-limit work.
inline BlochModelPoint evaluate_closed(const ModelFamily& f, double t1, double t2) {
  if (!std::isfinite(t1) || !std::isfinite(t2)) throw DomainError("parameter is not finite");
  if (!f.domain.contains(t1, t2)) throw DomainError("parameter outside family domain");
  BlochModelPoint m = std::visit(
      [&](const auto& k) -> BlochModelPoint {
        using K = std::decay_t<decltype(k)>;
        BlochModelPoint p;
        if constexpr (std::is_same_v<K, GenericZ>) {
          p.s = Vec3(t1, t2, k.theta0);
          p.d1s = Vec3::UnitX();
          p.d2s = Vec3::UnitY();
        } else if constexpr (std::is_same_v<K, Planar>) {
          p.s = k.f1(t1, t2) * k.u1 + k.f2(t1, t2) * k.u2;
          p.d1s = k.f1.d1(t1, t2) * k.u1 + k.f2.d1(t1, t2) * k.u2;
          p.d2s = k.f1.d2(t1, t2) * k.u1 + k.f2.d2(t1, t2) * k.u2;
        } else if constexpr (std::is_same_v<K, Unitary>) {
          const Vec3& a = k.axis_a;
          const Vec3& b = k.axis_b;
          const Vec3 c = a.cross(b);
          const double s1 = std::sin(t1), c1 = std::cos(t1), s2 = std::sin(t2), c2 = std::cos(t2);
          p.s = k.radius * (s1 * c2 * a + s1 * s2 * b + c1 * c);
          p.d1s = k.radius * (c1 * c2 * a + c1 * s2 * b - s1 * c);
          p.d2s = k.radius * (-s1 * s2 * a + s1 * c2 * b);
        } else {
          if (!k.fn) throw DomainError("explicit family has no map");
          p = finite_difference_point(k.fn, t1, t2, k.h);
        }
        return p;
      },
      f.kind);
  if (!m.all_finite()) throw DomainError("family produced non-finite values");
  if (m.s.norm() > 1.0 + kPureGuard) throw PureStateError("Bloch vector leaves the Bloch ball");
  return m;
}

/// Evaluates a mixed-state model point; rejects |s| >= 1.
inline BlochModelPoint evaluate(const ModelFamily& f, double t1, double t2) {
  BlochModelPoint m = evaluate_closed(f, t1, t2);
  require_mixed(m.s);
  return m;
}

inline BlochModelPoint evaluate(const ModelFamily& f, const Vec2& t) { return evaluate(f, t(0), t(1)); }

inline std::string kind_name(const ModelFamily& f) {
  switch (f.kind.index()) {
    case 0: return "generic_z";
    case 1: return "planar";
    case 2: return "unitary";
    default: return "explicit";
  }
}

}  // namespace holevo::zoo
