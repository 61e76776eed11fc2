#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holevo/holevo_bounds.hpp"
#include "holevo/io.hpp"
#include "holevo/oracle.hpp"
#include "holevo/quantum_fisher.hpp"
#include "holevo/sampling.hpp"

namespace holevo::verify {

using json = nlohmann::json;

struct Check {
  std::string name;
  double threshold = 0;
  double worst = 0;
  json worst_instance;  ///< model data of the instance with the largest residual

  [[nodiscard]] bool ok() const { return worst <= threshold; }
};

struct Report {
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<Check> checks;

  [[nodiscard]] bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok(); });
  }
};

namespace detail {

template <typename M>
double entry_scale(const M& m) {
  return std::max(1.0, static_cast<double>(m.cwiseAbs().maxCoeff()));
}

template <typename A, typename B>
double rel_diff(const A& a, const B& b) {
  return (a - b).cwiseAbs().maxCoeff() / entry_scale(b);
}

inline json instance_json(const BlochModelPoint& m, const WeightMatrix& w) {
  auto v = [](const Vec3& x) { return json::array({x(0), x(1), x(2)}); };
  return {{"s", v(m.s)}, {"d1s", v(m.d1s)}, {"d2s", v(m.d2s)}, {"weight", {w.w11(), w.w12(), w.w22()}}};
}

/// Residuals of one random instance, in the order of `check_names()`.
inline std::vector<double> residuals(const BlochModelPoint& m, const WeightMatrix& w) {
  const FisherBundle fb = fisher_bundle(m);
  const BoundsReport r = holevo_bound(fb, w);
  const auto dp = oracle::DensityPoint::from_bloch(m);
  const auto mf = oracle::matrix_fisher(dp);

  double defining = 0.0;
  for (int i = 0; i < 2; ++i) {
    const CMat2 sld_res = dp.drho[i] - 0.5 * (dp.rho * mf.sld[i] + mf.sld[i] * dp.rho);
    const CMat2 rld_res = dp.drho[i] - dp.rho * mf.rld[i];
    defining = std::max({defining, sld_res.cwiseAbs().maxCoeff() / entry_scale(dp.drho[i]),
                         rld_res.cwiseAbs().maxCoeff() / entry_scale(dp.drho[i])});
  }
  const double fisher = std::max({rel_diff(mf.G, fb.G), rel_diff(mf.Gtilde, fb.Gtilde), rel_diff(mf.Z, fb.Z)});

  const auto cr = oracle::commutation_residuals(dp);
  const double comm_scale =
      std::max({entry_scale(mf.sld[0]), entry_scale(mf.sld[1]), entry_scale(fb.Ginv), entry_scale(fb.Gtilde_inv)});
  const double comm = std::max({cr.sld_from_rld, cr.im_z, cr.rld_gap}) / comm_scale;

  const double lemma7 = lemma7_identities(fb, w).max();

  const double m2 = oracle::minimize_holevo_2d(m, w).value;
  const double m6 = oracle::minimize_holevo_6d(dp, w);

  double forms = std::abs(r.c_h_unified - r.c_h) / r.c_h;
  if (r.c_h_trabs_form) forms = std::max(forms, std::abs(*r.c_h_trabs_form - r.c_h) / r.c_h);

  const double chain = std::max({0.0, r.c_h - r.c_z, std::max(r.c_s, r.c_r) - r.c_h}) / r.c_z;
  const double xi = std::abs(reduced_holevo_function(fb, w, r.xi_star) - r.c_h) / r.c_h;

  return {defining, fisher, comm, lemma7, std::abs(m2 - r.c_h) / r.c_h, std::abs(m6 - r.c_h) / r.c_h,
          forms, chain, xi};
}

}  // namespace detail

struct CheckSpec {
  const char* name;
  double threshold;
};

inline const std::vector<CheckSpec>& check_specs() {
  static const std::vector<CheckSpec> specs = {
      {"defining_equations", 1e-12}, {"fisher_oracle", 1e-10},  {"commutation_relations", 1e-10},
      {"closed_form_identities", 1e-10}, {"minimize_2d", 1e-8}, {"minimize_6d", 1e-8},
      {"bound_forms_agree", 1e-10},  {"inequality_chain", 1e-10}, {"minimizer_value", 1e-9},
  };
  return specs;
}

/// Runs every oracle comparison on `count` seeded random instances. All
/// thresholds are multiplied by `tolerance_scale`.
inline Report run(std::uint64_t seed, int count, double tolerance_scale = 1.0, int jobs = 1) {
  if (count <= 0) throw DomainError("verification count must be positive");
  if (!(tolerance_scale >= 0.0)) throw DomainError("tolerance scale must be non-negative");
  sampling::Rng rng(seed);
  std::vector<BlochModelPoint> models;
  std::vector<WeightMatrix> weights;
  for (int k = 0; k < count; ++k) {
    models.push_back(sampling::random_mixed_point(rng));
    weights.push_back(sampling::random_weight(rng));
  }
  std::vector<std::vector<double>> res(static_cast<std::size_t>(count));
  io::parallel_for(res.size(), jobs, [&](std::size_t k) { res[k] = detail::residuals(models[k], weights[k]); });

  Report rep;
  rep.seed = seed;
  rep.count = count;
  const auto& specs = check_specs();
  for (std::size_t c = 0; c < specs.size(); ++c) {
    Check ch;
    ch.name = specs[c].name;
    ch.threshold = specs[c].threshold * tolerance_scale;
    std::size_t worst = 0;
    for (std::size_t k = 0; k < res.size(); ++k) {
      if (res[k][c] > res[worst][c]) worst = k;
    }
    ch.worst = res[worst][c];
    ch.worst_instance = detail::instance_json(models[worst], weights[worst]);
    rep.checks.push_back(std::move(ch));
  }
  return rep;
}

}  // namespace holevo::verify
