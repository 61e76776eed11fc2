#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "holevo/holevo_bounds.hpp"
#include "holevo/oracle.hpp"
#include "holevo/sampling.hpp"

using namespace holevo;

namespace {

BlochModelPoint generic_z(double z0, double t1, double t2) { return {Vec3(t1, t2, z0), Vec3::UnitX(), Vec3::UnitY()}; }

Mat2 antisym(double x) {
  Mat2 m;
  m << 0, x, -x, 0;
  return m;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("weight matrices must be positive definite", "[bounds][weight]") {
  CHECK_NOTHROW(WeightMatrix(1, 0, 1));
  CHECK_THROWS_AS(WeightMatrix(1, 1, 1), DomainError);
  CHECK_THROWS_AS(WeightMatrix(-1, 0, -1), DomainError);
  CHECK_THROWS_AS(WeightMatrix(1, 0, std::nan("")), DomainError);
  CHECK_THROWS_AS(WeightMatrix(1, 0, 1).scaled(0.0), DomainError);
  const WeightMatrix w(2, 0.5, 1);
  CHECK(std::abs(w.det() - 1.75) < 1e-15);
  CHECK((w.matrix() * w.inverse() - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("TrAbs closed form and spectral form", "[bounds][trabs]") {
  CHECK(std::abs(trabs(WeightMatrix::identity(), antisym(1.0)) - 2.0) < 1e-15);
  CHECK(std::abs(trabs(WeightMatrix(2, 0, 0.5), antisym(3.0)) - 6.0) < 1e-14);
  CHECK(std::abs(trabs_spectral(Vec2(2, 0.5).asDiagonal().toDenseMatrix(), antisym(3.0)) - 6.0) < 1e-13);
  CHECK(trabs(WeightMatrix(3, 1, 2), Mat2::Zero()) == 0.0);

  sampling::Rng rng(301);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int k = 0; k < 500; ++k) {
    const WeightMatrix w = sampling::random_weight(rng);
    const Mat2 x = antisym(u(rng));
    const double closed = trabs(w, x);
    CHECK(std::abs(closed - trabs_spectral(w.matrix(), x)) <= 1e-12 * std::max(1.0, closed));
  }
}

TEST_CASE("SLD, RLD, D-invariant and Nagaoka bounds on simple models", "[bounds]") {
  const FisherBundle dinv = fisher_bundle(generic_z(0.5, 0.0, 0.0));
  const WeightMatrix id = WeightMatrix::identity();
  CHECK(std::abs(bound_sld(dinv, id) - 2.0) < 1e-15);
  CHECK(std::abs(bound_rld(dinv, id) - 3.0) < 1e-14);
  CHECK(std::abs(bound_z(dinv, id) - 3.0) < 1e-14);
  CHECK(std::abs(bound_nagaoka(dinv, id) - 4.0) < 1e-14);

  const FisherBundle planar = fisher_bundle({Vec3(0.6, 0, 0), Vec3::UnitX(), Vec3::UnitY()});
  CHECK(std::abs(bound_sld(planar, id) - 1.64) < 1e-14);
  CHECK(std::abs(bound_nagaoka(planar, id) - 3.24) < 1e-14);
  CHECK(std::abs(bound_rld(planar, id) - (planar.Gtilde_inv.real()).trace()) < 1e-15);
}

TEST_CASE("bounds of the z-offset model match their closed expressions for any weight", "[bounds][published]") {
  sampling::Rng rng(302);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), rad(0, 1);
  for (double z0 : {0.2, 0.275, 0.35, -0.5}) {
    for (int k = 0; k < 50; ++k) {
      const double r = std::sqrt(1 - z0 * z0) * 0.98 * std::sqrt(rad(rng)), a = ang(rng);
      const Vec2 t(r * std::cos(a), r * std::sin(a));
      const FisherBundle fb = fisher_bundle(generic_z(z0, t(0), t(1)));
      const WeightMatrix w = k == 0 ? WeightMatrix::identity() : sampling::random_weight(rng);
      const double gap = 1 - t.squaredNorm() - z0 * z0, a0 = 1 - z0 * z0;
      const double cs = w.trace() - t.dot(w.matrix() * t) / a0;
      // TrAbs term taken from the closed-form RLD inverse (1-s^2)/(1-z0^2) [[1,-i z0],[i z0,1]].
      const double extra = 2 * (gap / a0) * std::abs(z0) * std::sqrt(w.det());
      CHECK(rel(bound_sld(fb, w), cs) < 1e-12);
      CHECK(rel(bound_rld(fb, w), gap / a0 * w.trace() + extra) < 1e-12);
      CHECK(rel(bound_z(fb, w), cs + extra) < 1e-12);
    }
  }
}

TEST_CASE("every bound is homogeneous of degree one in the weight", "[bounds][property]") {
  sampling::Rng rng(303);
  std::uniform_real_distribution<double> cdist(0.01, 100);
  for (int k = 0; k < 200; ++k) {
    const FisherBundle fb = fisher_bundle(sampling::random_mixed_point(rng));
    const WeightMatrix w = sampling::random_weight(rng);
    const double c = cdist(rng);
    const WeightMatrix cw = w.scaled(c);
    CHECK(rel(bound_sld(fb, cw), c * bound_sld(fb, w)) < 1e-12);
    CHECK(rel(bound_rld(fb, cw), c * bound_rld(fb, w)) < 1e-12);
    CHECK(rel(bound_z(fb, cw), c * bound_z(fb, w)) < 1e-12);
    CHECK(rel(bound_nagaoka(fb, cw), c * bound_nagaoka(fb, w)) < 1e-12);
    CHECK(rel(holevo_bound(fb, cw).c_h, c * holevo_bound(fb, w).c_h) < 1e-12);
  }
}

TEST_CASE("correction term", "[bounds]") {
  CHECK(std::abs(s_correction(2.0, 2.2, 3.0) - 0.1125) < 1e-15);
  CHECK(s_correction(2.0, 2.5, 3.0) == 0.0);
  // C^S = C^Z collapses the bound onto C^S.
  CHECK(std::abs(2.2 + s_correction(3.0, 2.2, 3.0) - 3.0) < 1e-15);
  CHECK_THROWS_AS(s_correction(2.0, 3.0, 3.0), BranchError);
  CHECK_THROWS_AS(s_correction(2.0, 3.1, 3.0), BranchError);
}

TEST_CASE("H is continuous with a continuous slope", "[bounds]") {
  CHECK(h_of_x(1.0) == 1.0);
  CHECK(h_of_x(0.5) == 0.25);
  CHECK(h_of_x(-2.0) == 3.0);
  const double e = 1e-7;
  for (double x : {1.0, -1.0}) {
    CHECK(std::abs(h_of_x(x + e) - h_of_x(x - e)) < 5 * e);
    const double left = (h_of_x(x - e) - h_of_x(x - 2 * e)) / e;
    const double right = (h_of_x(x + 2 * e) - h_of_x(x + e)) / e;
    CHECK(std::abs(left - right) < 1e-5);
  }
  // a H(b/a) -> 2|b| as a -> 0
  CHECK(std::abs(holevo_unified(1.0, 2.0, 2.0) - 2.0) < 1e-15);
}

TEST_CASE("quadratic-plus-absolute-value minimization", "[bounds][lemma]") {
  auto r = quadratic_abs_min(Mat2::Identity(), Vec2::Zero(), 5.0);
  CHECK(r.value == 10.0);
  CHECK(r.argmin.norm() == 0.0);

  r = quadratic_abs_min(Mat2::Identity(), Vec2(1, 0), 2.0);
  CHECK(std::abs(r.value - 3.0) < 1e-15);
  CHECK((r.argmin - Vec2(-1, 0)).norm() < 1e-15);

  r = quadratic_abs_min(2.0 * Mat2::Identity(), Vec2(0, 1), 0.25);
  CHECK(std::abs(r.value - 0.125) < 1e-15);
  CHECK((r.argmin - Vec2(0, -0.25)).norm() < 1e-15);

  // |c| = alpha: both expressions give alpha; the |c| >= alpha argmin is used.
  r = quadratic_abs_min(Mat2::Identity(), Vec2(1, 0), -1.0);
  CHECK(std::abs(r.value - 1.0) < 1e-15);
  CHECK((r.argmin - Vec2(1, 0)).norm() < 1e-15);

  Mat2 singular;
  singular << 1, 1, 1, 1;
  CHECK_THROWS_AS(quadratic_abs_min(singular, Vec2(1, 0), 1.0), SingularMatrixError);
  CHECK_THROWS_AS(quadratic_abs_min(-Mat2::Identity(), Vec2(1, 0), 1.0), SingularMatrixError);

  for (auto [b, c] : {std::pair{Vec2(0, 0), 5.0}, std::pair{Vec2(1, 0), 2.0}, std::pair{Vec2(0, 1), 0.25}}) {
    const Mat2 a = c == 0.25 ? Mat2(2.0 * Mat2::Identity()) : Mat2(Mat2::Identity());
    CHECK(std::abs(oracle::grid_min_quadratic_abs(a, b, c) - quadratic_abs_min(a, b, c).value) <= 1e-6);
  }
}

TEST_CASE("closed-form minimum agrees with a grid search on random data", "[bounds][lemma][oracle]") {
  sampling::Rng rng(304);
  std::normal_distribution<double> n(0, 1);
  for (int k = 0; k < 100; ++k) {
    const Mat2 a = sampling::random_weight(rng).matrix();
    const Vec2 b(n(rng), n(rng));
    const double alpha = b.dot(a.inverse() * b);
    double c = n(rng);
    if (k % 4 == 0) c = (k % 8 == 0 ? 1.0 : -1.0) * alpha * (1.0 + 1e-9 * n(rng));
    const auto closed = quadratic_abs_min(a, b, c);
    const auto f = [&](const Vec2& x) { return x.dot(a * x) + 2 * std::abs(b.dot(x) + c); };
    CHECK(std::abs(f(closed.argmin) - closed.value) <= 1e-12 * std::max(1.0, closed.value));
    CHECK(std::abs(oracle::grid_min_quadratic_abs(a, b, c) - closed.value) <= 1e-6);
  }
}

TEST_CASE("minimizer reproduces the bound inside the reduced function", "[bounds][property]") {
  const FisherBundle dinv = fisher_bundle(generic_z(0.5, 0.0, 0.0));
  CHECK(minimizer_xi(dinv, WeightMatrix(1.5, 0.2, 0.7)).norm() == 0.0);

  // |c| < alpha branch written out explicitly
  const FisherBundle fb = fisher_bundle(generic_z(0.275, 0.476 / std::sqrt(2.0), 0.476 / std::sqrt(2.0)));
  const WeightMatrix w = weight_family_53(0.8, 0.3);
  const auto p = reduced_problem(fb, w);
  const Vec2 ainv_b = p.a.inverse() * p.b;
  const double alpha = p.b.dot(ainv_b);
  if (std::abs(p.c) < alpha) {
    CHECK((minimizer_xi(fb, w) + (p.c / alpha) * ainv_b).norm() < 1e-12);
  }

  sampling::Rng rng(305);
  for (int k = 0; k < 500; ++k) {
    const FisherBundle f = fisher_bundle(sampling::random_mixed_point(rng));
    const WeightMatrix wk = sampling::random_weight(rng);
    const BoundsReport r = holevo_bound(f, wk);
    CHECK(std::abs(reduced_holevo_function(f, wk, r.xi_star) - r.c_h) <= 1e-9 * r.c_h);
  }
}

TEST_CASE("optimal observables built from the minimizer attain the bound", "[bounds][oracle]") {
  sampling::Rng rng(306);
  for (int k = 0; k < 200; ++k) {
    const BlochModelPoint m = sampling::random_mixed_point(rng);
    const FisherBundle fb = fisher_bundle(m);
    const WeightMatrix w = sampling::random_weight(rng);
    const auto x = optimal_bloch_observables(fb, w);
    const auto dp = oracle::DensityPoint::from_bloch(m);
    oracle::HermitianPair pair{{oracle::observable_from_bloch(dp, x[0]), oracle::observable_from_bloch(dp, x[1])}};
    const double h = oracle::holevo_function(dp, pair, w);
    CHECK(std::abs(h - holevo_bound(fb, w).c_h) <= 1e-9 * h);
  }
}

TEST_CASE("Holevo bound: point examples", "[bounds]") {
  const BlochModelPoint dinv = generic_z(0.5, 0.0, 0.0);
  const BoundsReport r = holevo_bound(dinv, WeightMatrix::identity());
  CHECK(std::abs(r.c_h - 3.0) < 1e-14);
  CHECK(r.branch == Branch::RldBranch);
  CHECK(r.s_correction == 0.0);
  CHECK(std::abs(oracle::minimize_holevo_2d(dinv, WeightMatrix::identity()).value - 3.0) < 1e-10);

  sampling::Rng rng(307);
  for (int k = 0; k < 20; ++k) {
    const BlochModelPoint planar{Vec3(0.3, -0.2, 0), Vec3::UnitX(), Vec3::UnitY()};
    const WeightMatrix w = sampling::random_weight(rng);
    const BoundsReport p = holevo_bound(planar, w);
    CHECK(p.branch == Branch::CorrectionBranch);
    CHECK(std::abs(p.c_h - p.c_s) <= 1e-12 * p.c_s);
    CHECK(std::abs(oracle::minimize_holevo_2d(planar, w).value - p.c_h) <= 1e-8 * p.c_h);
  }
}

TEST_CASE("both branches occur across the trace-one weight family", "[bounds][published]") {
  const double t = 0.346 / std::sqrt(2.0);
  const FisherBundle fb = fisher_bundle(generic_z(0.2, t, t));
  int rld = 0, corr = 0;
  for (int i = 0; i < 41; ++i) {
    for (int j = 0; j < 40; ++j) {
      const WeightMatrix w = weight_family_53(-1 + (2 * i + 1) / 41.0, 2 * std::numbers::pi * j / 40);
      const BoundsReport r = holevo_bound(fb, w);
      (r.branch == Branch::RldBranch ? rld : corr) += 1;
    }
  }
  CHECK(rld > 0);
  CHECK(corr > 0);
  CHECK(holevo_bound(fb, WeightMatrix::identity()).branch == Branch::RldBranch);
}

TEST_CASE("ordering C^Z >= C^H >= max(C^S, C^R) and agreement of the three bound forms", "[bounds][property]") {
  sampling::Rng rng(308);
  int rld = 0, corr = 0;
  for (int k = 0; k < 1000; ++k) {
    const FisherBundle fb = fisher_bundle(sampling::random_mixed_point(rng));
    const WeightMatrix w = sampling::random_weight(rng);
    const BoundsReport r = holevo_bound(fb, w);
    const double slack = 1e-10 * r.c_z;
    CHECK(r.c_z >= r.c_h - slack);
    CHECK(r.c_h >= std::max(r.c_s, r.c_r) - slack);
    CHECK(r.c_n >= r.c_s);
    CHECK(r.s_correction >= 0.0);
    CHECK(std::abs(r.c_h - (r.c_r + r.s_correction)) <= 1e-15 * r.c_h);
    CHECK(std::abs(r.c_h_unified - r.c_h) <= 1e-10 * r.c_h);
    if (r.branch == Branch::CorrectionBranch) {
      ++corr;
      REQUIRE(r.c_h_trabs_form.has_value());
      CHECK(std::abs(*r.c_h_trabs_form - r.c_h) <= 1e-10 * r.c_h);
    } else {
      ++rld;
      CHECK(r.s_correction == 0.0);
    }
    CHECK(std::abs(r.b_value - b_theta(fb, w)) <= 1e-15 * r.c_z);
  }
  CHECK(rld > 50);
  CHECK(corr > 50);
}

TEST_CASE("D-invariant points give the RLD bound, classical points the SLD bound", "[bounds][property]") {
  sampling::Rng rng(309);
  for (int k = 0; k < 100; ++k) {
    const FisherBundle fb = fisher_bundle(sampling::random_d_invariant_point(rng));
    const WeightMatrix w = sampling::random_weight(rng);
    const BoundsReport r = holevo_bound(fb, w);
    CHECK(std::abs(r.c_h - r.c_r) <= 1e-10 * r.c_r);
    CHECK(classify_weight(fb, w).label != WeightRegion::WMinus);
  }
  for (int k = 0; k < 100; ++k) {
    const FisherBundle fb = fisher_bundle(sampling::random_planar_point(rng));
    const WeightMatrix w = sampling::random_weight(rng);
    CHECK(fb.im_z().cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, fb.Ginv.cwiseAbs().maxCoeff()));
    const BoundsReport r = holevo_bound(fb, w);
    CHECK(std::abs(r.c_h - r.c_s) <= 1e-10 * r.c_s);
    CHECK(classify_weight(fb, w).label != WeightRegion::WPlus);
  }
  // Converse direction: Im Z != 0 keeps C^H strictly above C^S.
  for (int k = 0; k < 100; ++k) {
    const FisherBundle fb = fisher_bundle(sampling::random_mixed_point(rng));
    const WeightMatrix w = sampling::random_weight(rng);
    if (std::abs(fb.cross) > 1e-6) CHECK(holevo_bound(fb, w).c_h > bound_sld(fb, w) * (1 + 1e-12));
  }
}

TEST_CASE("branch reported by the bound agrees with the weight-region label", "[bounds][property]") {
  sampling::Rng rng(310);
  for (int k = 0; k < 500; ++k) {
    const FisherBundle fb = fisher_bundle(sampling::random_mixed_point(rng));
    const WeightMatrix w = sampling::random_weight(rng);
    const auto r = holevo_bound(fb, w);
    const auto label = classify_weight(fb, w).label;
    switch (r.branch) {
      case Branch::RldBranch: CHECK(label == WeightRegion::WPlus); break;
      case Branch::CorrectionBranch: CHECK(label == WeightRegion::WMinus); break;
      case Branch::Boundary: CHECK(label == WeightRegion::WBoundary); break;
    }
  }
}

TEST_CASE("gamma-aligned weight family splits weight space along the unit circle", "[bounds][region]") {
  const double t = 0.346 / std::sqrt(2.0);
  const FisherBundle fb = fisher_bundle(generic_z(0.2, t * 1.1, t * 0.7));
  const double alpha = alpha_theta(fb);
  CHECK(alpha > 0.0);

  sampling::Rng rng(311);
  std::uniform_real_distribution<double> ang(0.01, std::numbers::pi - 0.01), cdist(0.1, 10);
  for (int k = 0; k < 100; ++k) {
    const double phi = ang(rng), c = cdist(rng);
    const double w = std::cos(phi), w2 = std::sin(phi);
    const WeightMatrix on = weight_family_42(fb, w, w2, c);
    const double tol = 1e-9 * (bound_z(fb, on) + bound_sld(fb, on));
    CHECK(std::abs(b_theta(fb, on)) <= tol);
    CHECK(classify_weight(fb, on).label == WeightRegion::WBoundary);
    CHECK(classify_weight(fb, weight_family_42(fb, w, 0.8 * w2, c)).label == WeightRegion::WPlus);
    CHECK(classify_weight(fb, weight_family_42(fb, w, 1.25 * w2, c)).label == WeightRegion::WMinus);
    Eigen::SelfAdjointEigenSolver<Mat2> es(on.matrix());
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }

  CHECK_THROWS_AS(weight_family_42(fb, 1.0, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(weight_family_42(fb, 0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(weight_family_42(fb, 0.0, 0.5, -1.0), DomainError);
  CHECK_THROWS_AS(alpha_theta(fisher_bundle(generic_z(0.2, 0.0, 0.0))), SpecialModelError);
  CHECK_THROWS_AS(alpha_theta(fisher_bundle({Vec3(0.3, 0.2, 0), Vec3::UnitX(), Vec3::UnitY()})), SpecialModelError);
}

TEST_CASE("trace-one weight family", "[bounds][weight]") {
  CHECK((weight_family_53(0, 0).matrix() - 0.5 * Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-16);
  Mat2 expected;
  expected << 0.5, 0.25, 0.25, 0.5;
  CHECK((weight_family_53(0.5, std::numbers::pi / 4).matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);

  sampling::Rng rng(312);
  std::uniform_real_distribution<double> wd(-0.999, 0.999), od(0, 2 * std::numbers::pi);
  for (int k = 0; k < 200; ++k) {
    const double w = wd(rng);
    const WeightMatrix m = weight_family_53(w, od(rng));
    CHECK(std::abs(m.det() - (1 - w * w) / 4) < 1e-14);
    CHECK(std::abs(m.trace() - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(weight_family_53(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(weight_family_53(-1.5, 0.0), DomainError);
}

TEST_CASE("three-parameter bound", "[bounds][three]") {
  const ThreeParamPoint origin;
  CHECK(std::abs(holevo_bound_3param(origin, Mat3::Identity()) - 3.0) < 1e-14);

  ThreeParamPoint z;
  z.s = Vec3(0, 0, 0.5);
  CHECK(std::abs(holevo_bound_3param(z, Mat3::Identity()) - oracle::rld_bound_3param(z, Mat3::Identity())) < 1e-12);

  sampling::Rng rng(313);
  for (int k = 0; k < 200; ++k) {
    const ThreeParamPoint m = sampling::random_three_param_point(rng);
    const Mat3 w = sampling::random_weight3(rng);
    const double v = holevo_bound_3param(m, w);
    CHECK(std::abs(v - oracle::rld_bound_3param(m, w)) <= 1e-10 * v);
    CHECK(std::abs(holevo_bound_3param(m, 2.5 * w) - 2.5 * v) <= 1e-12 * v);
  }

  ThreeParamPoint bad;
  bad.ds[2] = bad.ds[0] + bad.ds[1];
  CHECK_THROWS_AS(holevo_bound_3param(bad, Mat3::Identity()), DegenerateModelError);
  ThreeParamPoint pure;
  pure.s = Vec3(0, 0, 1);
  CHECK_THROWS_AS(holevo_bound_3param(pure, Mat3::Identity()), PureStateError);
  CHECK_THROWS_AS(holevo_bound_3param(origin, -Mat3::Identity()), DomainError);
}

TEST_CASE("bound per copy scales as 1/n", "[bounds]") {
  CHECK(n_copy_bound(3.0, 4) == 0.75);
  CHECK_THROWS_AS(n_copy_bound(3.0, 0), DomainError);
}
