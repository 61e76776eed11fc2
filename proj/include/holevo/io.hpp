#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "holevo/bloch_geometry.hpp"
#include "holevo/classification.hpp"
#include "holevo/errors.hpp"
#include "holevo/holevo_bounds.hpp"
#include "holevo/model_zoo.hpp"
#include "holevo/quantum_fisher.hpp"

namespace holevo::io {

using json = nlohmann::json;

// ---------------------------------------------------------------- descriptors

namespace detail {

inline json vec_to_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

inline Vec3 vec_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw DomainError(std::string(what) + " must be a 3-element array");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw DomainError(std::string(what) + " must contain numbers");
    v(i) = j[i].get<double>();
  }
  return v;
}

inline json poly_to_json(const zoo::Poly2& p) { return json(p.c); }

inline zoo::Poly2 poly_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw DomainError(std::string(what) + " must be a nested coefficient array");
  zoo::Poly2 p;
  for (const auto& row : j) {
    if (!row.is_array()) throw DomainError(std::string(what) + " rows must be arrays");
    std::vector<double> r;
    for (const auto& c : row) {
      if (!c.is_number()) throw DomainError(std::string(what) + " coefficients must be numbers");
      r.push_back(c.get<double>());
    }
    p.c.push_back(std::move(r));
  }
  return p;
}

inline double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw DomainError(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

inline zoo::Domain domain_from_json(const json& j, zoo::Domain fallback) {
  if (!j.contains("domain")) return fallback;
  const json& d = j.at("domain");
  auto range = [&](const char* key, double& lo, double& hi) {
    if (!d.contains(key)) return;
    const json& r = d.at(key);
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
      throw DomainError(std::string("domain.") + key + " must be [lo, hi]");
    }
    lo = r[0].get<double>();
    hi = r[1].get<double>();
    if (!(lo <= hi)) throw DomainError(std::string("domain.") + key + " has lo > hi");
  };
  range("theta1", fallback.lo1, fallback.hi1);
  range("theta2", fallback.lo2, fallback.hi2);
  return fallback;
}

inline json domain_to_json(const zoo::Domain& d) {
  return {{"theta1", {d.lo1, d.hi1}}, {"theta2", {d.lo2, d.hi2}}};
}

}  // namespace detail

inline zoo::ModelFamily family_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw DomainError("model descriptor needs a string 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "generic_z") {
    return zoo::make_generic_z(detail::number(j, "theta0"), detail::domain_from_json(j, {}));
  }
  if (kind == "planar") {
    const Vec3 u1 = j.contains("u1") ? detail::vec_from_json(j.at("u1"), "u1") : Vec3::UnitX();
    const Vec3 u2 = j.contains("u2") ? detail::vec_from_json(j.at("u2"), "u2") : Vec3::UnitY();
    zoo::Poly2 f1 = j.contains("f1") ? detail::poly_from_json(j.at("f1"), "f1") : zoo::Poly2::theta1();
    zoo::Poly2 f2 = j.contains("f2") ? detail::poly_from_json(j.at("f2"), "f2") : zoo::Poly2::theta2();
    return zoo::make_planar(u1, u2, std::move(f1), std::move(f2), detail::domain_from_json(j, {}));
  }
  if (kind == "unitary") {
    const Vec3 a = j.contains("axis_a") ? detail::vec_from_json(j.at("axis_a"), "axis_a") : Vec3::UnitX();
    const Vec3 b = j.contains("axis_b") ? detail::vec_from_json(j.at("axis_b"), "axis_b") : Vec3::UnitY();
    const zoo::Domain def{0.0, std::numbers::pi, 0.0, 2.0 * std::numbers::pi};
    return zoo::make_unitary(detail::number(j, "radius"), a, b, detail::domain_from_json(j, def));
  }
  if (kind == "explicit") {
    if (!j.contains("components") || !j.at("components").is_array() || j.at("components").size() != 3) {
      throw DomainError("explicit model needs three polynomial 'components'");
    }
    std::array<zoo::Poly2, 3> comps;
    for (int i = 0; i < 3; ++i) comps[i] = detail::poly_from_json(j.at("components")[i], "components");
    const double h = j.contains("h") ? detail::number(j, "h") : 1e-5;
    return zoo::make_explicit_poly(std::move(comps), h, detail::domain_from_json(j, {}));
  }
  throw DomainError("unknown model kind '" + kind + "'");
}

inline json family_to_json(const zoo::ModelFamily& f) {
  json j = std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, zoo::GenericZ>) {
          return {{"kind", "generic_z"}, {"theta0", k.theta0}};
        } else if constexpr (std::is_same_v<K, zoo::Planar>) {
          return {{"kind", "planar"},
                  {"u1", detail::vec_to_json(k.u1)},
                  {"u2", detail::vec_to_json(k.u2)},
                  {"f1", detail::poly_to_json(k.f1)},
                  {"f2", detail::poly_to_json(k.f2)}};
        } else if constexpr (std::is_same_v<K, zoo::Unitary>) {
          return {{"kind", "unitary"},
                  {"radius", k.radius},
                  {"axis_a", detail::vec_to_json(k.axis_a)},
                  {"axis_b", detail::vec_to_json(k.axis_b)}};
        } else {
          if (!k.components) throw DomainError("explicit family without polynomial components cannot be serialized");
          json comps = json::array();
          for (const auto& p : *k.components) comps.push_back(detail::poly_to_json(p));
          return {{"kind", "explicit"}, {"components", comps}, {"h", k.h}};
        }
      },
      f.kind);
  j["domain"] = detail::domain_to_json(f.domain);
  return j;
}

inline zoo::ModelFamily load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open model file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DomainError(std::string("model file is not valid JSON: ") + e.what());
  }
  return family_from_json(j);
}

// ------------------------------------------------------------ small parsers

inline std::vector<double> parse_numbers(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != count) {
    throw DomainError(std::string(what) + " expects " + std::to_string(count) + " comma-separated values");
  }
  return out;
}

inline Vec2 parse_theta(const std::string& s) {
  const auto v = parse_numbers(s, 2, "--theta");
  return {v[0], v[1]};
}

inline WeightMatrix parse_weight(const std::string& s) {
  const auto v = parse_numbers(s, 3, "--weight");
  return WeightMatrix(v[0], v[1], v[2]);
}

// ------------------------------------------------------------------- records

/// One output row: the grid coordinates plus every bound at that cell.
struct BoundsRecord {
  double x = 0, y = 0;
  BoundsReport bounds;
  Vec2 gamma = Vec2::Zero();
  bool d_invariant = false;
  bool classical = false;
};

inline BoundsRecord make_record(const BlochModelPoint& m, const WeightMatrix& w, double x, double y) {
  const FisherBundle fb = fisher_bundle(m);
  BoundsRecord r;
  r.x = x;
  r.y = y;
  r.bounds = holevo_bound(fb, w);
  r.gamma = fb.gamma;
  r.d_invariant = is_d_invariant_point(m);
  r.classical = is_classical_point(m);
  return r;
}

inline json record_to_json(const BoundsRecord& r) {
  const auto& b = r.bounds;
  json j = {{"c_s", b.c_s},
            {"c_r", b.c_r},
            {"c_z", b.c_z},
            {"c_n", b.c_n},
            {"c_h", b.c_h},
            {"c_h_unified", b.c_h_unified},
            {"s_correction", b.s_correction},
            {"branch", to_string(b.branch)},
            {"b_theta", b.b_value},
            {"xi_star", {b.xi_star(0), b.xi_star(1)}},
            {"gamma", {r.gamma(0), r.gamma(1)}},
            {"d_invariant", r.d_invariant},
            {"asymptotically_classical", r.classical}};
  if (b.c_h_trabs_form) j["c_h_trabs_form"] = *b.c_h_trabs_form;
  return j;
}

inline constexpr const char* kCsvSchema = "# holevo sweep schema v1";

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Header line, then one line per record in the given order. Blank lines
/// separate blocks of constant x for gnuplot's pm3d.
inline void write_csv(std::ostream& out, const std::vector<BoundsRecord>& rows, const std::string& xname,
                      const std::string& yname, int block = 0) {
  out << kCsvSchema << '\n';
  out << xname << ',' << yname
      << ",c_s,c_r,c_z,c_n,c_h,s_correction,branch,b_theta,gamma1,gamma2,d_invariant,classical,xi1,xi2\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    const auto& b = r.bounds;
    out << fmt17(r.x) << ',' << fmt17(r.y) << ',' << fmt17(b.c_s) << ',' << fmt17(b.c_r) << ','
        << fmt17(b.c_z) << ',' << fmt17(b.c_n) << ',' << fmt17(b.c_h) << ',' << fmt17(b.s_correction)
        << ',' << to_string(b.branch) << ',' << fmt17(b.b_value) << ',' << fmt17(r.gamma(0)) << ','
        << fmt17(r.gamma(1)) << ',' << (r.d_invariant ? 1 : 0) << ',' << (r.classical ? 1 : 0) << ','
        << fmt17(b.xi_star(0)) << ',' << fmt17(b.xi_star(1)) << '\n';
    if (block > 0 && (k + 1) % static_cast<std::size_t>(block) == 0 && k + 1 < rows.size()) out << '\n';
  }
}

// ------------------------------------------------------------------- sweeps

/// Runs fn(i) for i in [0, n) on `jobs` threads. fn must write only to its own slot.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, const Fn& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

enum class WeightSource { Family53, Family42 };

struct WeightSweepSpec {
  Vec2 theta = Vec2::Zero();
  int grid = 101;
  WeightSource source = WeightSource::Family53;
  double w2_max = 2.0;  ///< upper end of the w2 axis for the gamma-aligned family
  int jobs = 1;
};

/// Axis values are cell centres, so |w| < 1 and w2 > 0 hold at every cell;
/// omega runs over [0, 2 pi) with step 2 pi / N.
inline std::vector<BoundsRecord> sweep_weight(const zoo::ModelFamily& family, const WeightSweepSpec& spec) {
  if (spec.grid < 2) throw DomainError("grid count must be at least 2");
  const BlochModelPoint m = zoo::evaluate(family, spec.theta);
  const FisherBundle fb = fisher_bundle(m);
  const int n = spec.grid;
  std::vector<BoundsRecord> rows(static_cast<std::size_t>(n) * n);
  const bool d_inv = is_d_invariant_point(m);
  const bool classical = is_classical_point(m);
  if (spec.source == WeightSource::Family42) alpha_theta(fb);  // rejects special models up front
  parallel_for(rows.size(), spec.jobs, [&](std::size_t k) {
    const int i = static_cast<int>(k) / n, j = static_cast<int>(k) % n;
    const double w = -1.0 + (2.0 * i + 1.0) / n;
    double y;
    WeightMatrix wm;
    if (spec.source == WeightSource::Family53) {
      y = 2.0 * std::numbers::pi * j / n;
      wm = weight_family_53(w, y);
    } else {
      y = spec.w2_max * (j + 0.5) / n;
      wm = weight_family_42(fb, w, y, 1.0);
    }
    BoundsRecord r;
    r.x = w;
    r.y = y;
    r.bounds = holevo_bound(fb, wm);
    r.gamma = fb.gamma;
    r.d_invariant = d_inv;
    r.classical = classical;
    rows[k] = r;
  });
  return rows;
}

struct ThetaSweepSpec {
  WeightMatrix weight;
  int grid = 101;
  /// Rectangle to sample; defaults to the family domain, clipped for
  /// GenericZ to the disk where the state stays mixed.
  std::optional<zoo::Domain> box;
  int jobs = 1;
};

inline zoo::Domain default_theta_box(const zoo::ModelFamily& f) {
  if (const auto* g = std::get_if<zoo::GenericZ>(&f.kind)) {
    const double r = std::sqrt(1.0 - g->theta0 * g->theta0);
    return {std::max(f.domain.lo1, -r), std::min(f.domain.hi1, r), std::max(f.domain.lo2, -r),
            std::min(f.domain.hi2, r)};
  }
  return f.domain;
}

/// Row-major over (theta1, theta2) with both ends included. Cells where the
/// state is pure or the model degenerates are skipped.
inline std::vector<BoundsRecord> sweep_theta(const zoo::ModelFamily& family, const ThetaSweepSpec& spec) {
  if (spec.grid < 2) throw DomainError("grid count must be at least 2");
  const zoo::Domain box = spec.box.value_or(default_theta_box(family));
  const int n = spec.grid;
  std::vector<std::optional<BoundsRecord>> slots(static_cast<std::size_t>(n) * n);
  parallel_for(slots.size(), spec.jobs, [&](std::size_t k) {
    const int i = static_cast<int>(k) / n, j = static_cast<int>(k) % n;
    const double t1 = box.lo1 + (box.hi1 - box.lo1) * i / (n - 1);
    const double t2 = box.lo2 + (box.hi2 - box.lo2) * j / (n - 1);
    try {
      const BlochModelPoint m = zoo::evaluate(family, t1, t2);
      slots[k] = make_record(m, spec.weight, t1, t2);
    } catch (const PureStateError&) {
    } catch (const DegenerateModelError&) {
    }
  });
  std::vector<BoundsRecord> rows;
  for (auto& s : slots) {
    if (s) rows.push_back(*s);
  }
  return rows;
}

}  // namespace holevo::io
