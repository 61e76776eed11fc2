#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "holevo/bloch_geometry.hpp"
#include "holevo/errors.hpp"
#include "holevo/model_zoo.hpp"
#include "holevo/quantum_fisher.hpp"
#include "holevo/types.hpp"
#include "holevo/weight.hpp"

namespace holevo {

enum class ModelLabel { DInvariant, AsymptoticallyClassical, Generic };

inline const char* to_string(ModelLabel l) {
  switch (l) {
    case ModelLabel::DInvariant: return "DInvariant";
    case ModelLabel::AsymptoticallyClassical: return "AsymptoticallyClassical";
    case ModelLabel::Generic: return "Generic";
  }
  return "?";
}

struct ModelClass {
  ModelLabel label = ModelLabel::Generic;
  bool d_invariant = false;
  bool classical = false;
  Vec2 gamma = Vec2::Zero();
  double triple = 0.0;         ///< <s, d1s x d2s>
  double re_residual = 0.0;    ///< max |Re G~^-1 - G^-1|, relative to max |G^-1|
  bool re_test = false;        ///< Re G~^-1 = G^-1 within the threshold
  /// The gamma test and the Re G~^-1 = G^-1 test agree.
  [[nodiscard]] bool consistent() const { return re_test == d_invariant; }
};

inline ModelClass classify_point(const BlochModelPoint& m) {
  const FisherBundle fb = fisher_bundle(m);
  ModelClass c;
  c.gamma = fb.gamma;
  c.triple = m.s.dot(fb.perp);
  c.d_invariant = is_d_invariant_point(m);
  c.classical = is_classical_point(m);
  c.re_residual = fb.rank_one_gap().cwiseAbs().maxCoeff() / fb.Ginv.cwiseAbs().maxCoeff();
  c.re_test = c.re_residual <= kClassifyTol;
  c.label = c.d_invariant ? ModelLabel::DInvariant
                          : (c.classical ? ModelLabel::AsymptoticallyClassical : ModelLabel::Generic);
  return c;
}

/// Uniform grid over a rectangle, row-major with the first parameter slowest.
struct ParamGrid {
  double lo1 = -1, hi1 = 1;
  int n1 = 2;
  double lo2 = -1, hi2 = 1;
  int n2 = 2;

  [[nodiscard]] Vec2 at(int i, int j) const {
    const double t1 = n1 == 1 ? lo1 : lo1 + (hi1 - lo1) * i / (n1 - 1);
    const double t2 = n2 == 1 ? lo2 : lo2 + (hi2 - lo2) * j / (n2 - 1);
    return {t1, t2};
  }
};

struct FamilyReport {
  bool globally_d_invariant = false;
  int skipped = 0;  ///< pure or degenerate cells left out when skip_invalid is set
  double radius_min = 0, radius_max = 0;
  std::vector<Vec2> thetas;
  std::vector<ModelClass> points;
};

/// Classifies every grid point; a family whose Bloch-vector length does not
/// vary is D-invariant everywhere. With skip_invalid, cells where the state is
/// pure or the derivatives are dependent are counted and left out.
inline FamilyReport classify_family(const zoo::ModelFamily& family, const ParamGrid& grid,
                                    bool skip_invalid = false) {
  if (grid.n1 < 1 || grid.n2 < 1) throw DomainError("grid needs at least one point per axis");
  FamilyReport r;
  r.radius_min = 1e300;
  r.radius_max = 0.0;
  for (int i = 0; i < grid.n1; ++i) {
    for (int j = 0; j < grid.n2; ++j) {
      const Vec2 t = grid.at(i, j);
      ModelClass c;
      BlochModelPoint m;
      try {
        m = zoo::evaluate(family, t);
        c = classify_point(m);
      } catch (const PureStateError&) {
        if (!skip_invalid) throw;
        ++r.skipped;
        continue;
      } catch (const DegenerateModelError&) {
        if (!skip_invalid) throw;
        ++r.skipped;
        continue;
      }
      const double rad = m.s.norm();
      r.radius_min = std::min(r.radius_min, rad);
      r.radius_max = std::max(r.radius_max, rad);
      r.thetas.push_back(t);
      r.points.push_back(c);
    }
  }
  if (r.points.empty()) throw DomainError("no admissible grid point");
  r.globally_d_invariant = (r.radius_max - r.radius_min) <= 1e-10 * r.radius_max;
  return r;
}

/// SLD and RLD dual vectors from cross products; finite on the closed ball
/// as long as the model is not classical in the limit.
struct PureLimitDuals {
  std::array<Vec3, 2> dual;
  std::array<CVec3, 2> rdual;
};

inline PureLimitDuals pure_limit_duals(const BlochModelPoint& m) {
  require_regular(m);
  if (m.s.norm() > 1.0 + kPureGuard) throw DomainError("Bloch vector outside the closed ball");
  const Vec3 perp = m.d1s.cross(m.d2s);
  const Mat3 qi = q_inverse_closed(m.s);
  const double denom = perp.dot(qi * perp);
  if (!(denom > 1e-12 * perp.squaredNorm())) {
    throw AsymptoticallyClassicalLimitError("<l_perp, Q^-1 l_perp> vanishes");
  }
  const Vec3 qp = qi * perp;
  PureLimitDuals out;
  out.dual[0] = -qp.cross(m.d2s) / denom;
  out.dual[1] = qp.cross(m.d1s) / denom;

  const cplx i(0.0, 1.0);
  const CMat3 left = CMat3::Identity() - i * f_matrix(m.s).cast<cplx>();
  const double sp = m.s.dot(perp);
  const CVec3 v1 = perp.cross(m.d2s).cast<cplx>() - i * sp * m.d2s.cast<cplx>();
  const CVec3 v0 = perp.cross(m.d1s).cast<cplx>() - i * sp * m.d1s.cast<cplx>();
  out.rdual[0] = -(left * v1) / denom;
  out.rdual[1] = (left * v0) / denom;
  return out;
}

/// G~^-1 on the closed ball from <l~^i, Q~^-1 l~^j>.
inline CMat2 pure_limit_rld_inverse(const BlochModelPoint& m) {
  const PureLimitDuals d = pure_limit_duals(m);
  const CMat3 qti = q_tilde_inverse_closed(m.s);
  CMat2 g;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) g(a, b) = inner(d.rdual[a], CVec3(qti * d.rdual[b]));
  }
  return g;
}

/// The RLD bound evaluated through the limit-safe G~^-1. At |s| = 1 the
/// Holevo bound reduces to this value.
inline double pure_limit_holevo(const BlochModelPoint& m, const WeightMatrix& w) {
  const CMat2 g = pure_limit_rld_inverse(m);
  return (w.matrix() * g.real()).trace() + trabs(w, g.imag());
}

}  // namespace holevo
