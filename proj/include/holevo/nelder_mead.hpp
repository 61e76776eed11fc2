#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace holevo::opt {

struct SimplexOptions {
  double initial_step = 0.1;
  double diameter_tol = 1e-10;
  long max_evaluations = 100000;
  int max_restarts = 20;
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  long evaluations = 0;
  int restarts = 0;
};

namespace detail {

inline double simplex_diameter(const std::vector<Eigen::VectorXd>& pts) {
  double d = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) d = std::max(d, (pts[i] - pts[0]).lpNorm<Eigen::Infinity>());
  return d;
}

}  // namespace detail

/// Downhill simplex with standard coefficients (1, 2, 1/2, 1/2). After
/// convergence the simplex is rebuilt around the best vertex; restarts stop
/// once a restart no longer improves the value.
template <typename Fn>
SimplexResult nelder_mead(const Fn& f, Eigen::VectorXd x0, const SimplexOptions& opt = {}) {
  const auto n = x0.size();
  SimplexResult res;
  res.x = x0;
  res.value = f(x0);
  res.evaluations = 1;
  double step = opt.initial_step;

  for (int round = 0; round <= opt.max_restarts; ++round) {
    std::vector<Eigen::VectorXd> pts(n + 1, res.x);
    std::vector<double> vals(n + 1, res.value);
    for (Eigen::Index i = 0; i < n; ++i) {
      pts[i + 1](i) += step;
      vals[i + 1] = f(pts[i + 1]);
      ++res.evaluations;
    }
    std::vector<std::size_t> order(n + 1);

    while (res.evaluations < opt.max_evaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
      {
        std::vector<Eigen::VectorXd> p2;
        std::vector<double> v2;
        for (auto k : order) {
          p2.push_back(pts[k]);
          v2.push_back(vals[k]);
        }
        pts.swap(p2);
        vals.swap(v2);
      }
      if (detail::simplex_diameter(pts) < opt.diameter_tol) break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (Eigen::Index i = 0; i < n; ++i) centroid += pts[i];
      centroid /= static_cast<double>(n);
      const Eigen::VectorXd& worst = pts[n];

      const Eigen::VectorXd xr = centroid + (centroid - worst);
      const double fr = f(xr);
      ++res.evaluations;
      if (fr < vals[0]) {
        const Eigen::VectorXd xe = centroid + 2.0 * (centroid - worst);
        const double fe = f(xe);
        ++res.evaluations;
        if (fe < fr) {
          pts[n] = xe;
          vals[n] = fe;
        } else {
          pts[n] = xr;
          vals[n] = fr;
        }
        continue;
      }
      if (fr < vals[n - 1]) {
        pts[n] = xr;
        vals[n] = fr;
        continue;
      }
      const bool outside = fr < vals[n];
      const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                         : Eigen::VectorXd(centroid + 0.5 * (worst - centroid));
      const double fc = f(xc);
      ++res.evaluations;
      if (fc < (outside ? fr : vals[n])) {
        pts[n] = xc;
        vals[n] = fc;
        continue;
      }
      for (Eigen::Index i = 1; i <= n; ++i) {
        pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
        vals[i] = f(pts[i]);
        ++res.evaluations;
      }
    }

    const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    const bool improved = vals[best] < res.value;
    const double gain = res.value - vals[best];
    if (vals[best] <= res.value) {
      res.x = pts[best];
      res.value = vals[best];
    }
    res.restarts = round;
    if (res.evaluations >= opt.max_evaluations) break;
    if (round > 0 && (!improved || gain <= 1e-16 * std::abs(res.value))) break;
    step = std::max(10.0 * detail::simplex_diameter(pts), 1e3 * opt.diameter_tol);
  }
  return res;
}

}  // namespace holevo::opt
