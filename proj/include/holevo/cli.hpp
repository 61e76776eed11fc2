#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "holevo/classification.hpp"
#include "holevo/errors.hpp"
#include "holevo/io.hpp"
#include "holevo/model_zoo.hpp"
#include "holevo/verify.hpp"

namespace holevo::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kInvalidInput = 2 };

using json = nlohmann::json;

namespace detail {

/// Writes to --out if given, otherwise to `out`.
template <typename Fn>
void with_output(const std::string& path, std::ostream& out, const Fn& fn) {
  if (path.empty() || path == "-") {
    fn(out);
    return;
  }
  std::ofstream f(path);
  if (!f) throw DomainError("cannot open output file '" + path + "'");
  fn(f);
}

inline json vec_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

/// Largest square inside the mixed-state disk for GenericZ, the domain otherwise.
inline zoo::Domain classify_box(const zoo::ModelFamily& f) {
  if (const auto* g = std::get_if<zoo::GenericZ>(&f.kind)) {
    const double r = 0.99 * std::sqrt((1.0 - g->theta0 * g->theta0) / 2.0);
    return {std::max(f.domain.lo1, -r), std::min(f.domain.hi1, r), std::max(f.domain.lo2, -r),
            std::min(f.domain.hi2, r)};
  }
  return f.domain;
}

inline json class_json(const ModelClass& c) {
  return {{"label", to_string(c.label)},
          {"d_invariant", c.d_invariant},
          {"asymptotically_classical", c.classical},
          {"gamma", {c.gamma(0), c.gamma(1)}},
          {"triple_product", c.triple},
          {"re_residual", c.re_residual},
          {"consistent", c.consistent()}};
}

}  // namespace detail

/// Parses `args` (without the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Holevo bound and related quantum Cramer-Rao bounds for two-parameter qubit models"};
  app.require_subcommand(1);

  std::string model_path, theta_text, weight_text = "1,0,1", out_path, box_text;
  int grid = 101, jobs = 1, count = 200, family = 53;
  std::uint64_t seed = 42;
  double tol_scale = 1.0, w2_max = 2.0;

  auto* bounds = app.add_subcommand("bounds", "All bounds at one parameter point, as JSON");
  bounds->add_option("--model", model_path, "Model descriptor (JSON)")->required();
  bounds->add_option("--theta", theta_text, "Parameter point A,B")->required();
  bounds->add_option("--weight", weight_text, "Weight matrix w11,w12,w22");

  auto* sweep_w = app.add_subcommand("sweep-weight", "Bounds over a grid of weight matrices, as CSV");
  sweep_w->add_option("--model", model_path, "Model descriptor (JSON)")->required();
  sweep_w->add_option("--theta", theta_text, "Parameter point A,B")->required();
  sweep_w->add_option("--grid", grid, "Cells per axis");
  sweep_w->add_option("--family", family, "53: trace-one (w, omega) family; 42: gamma-aligned (w, w2) family");
  sweep_w->add_option("--w2-max", w2_max, "Upper end of the w2 axis for --family 42");
  sweep_w->add_option("--out", out_path, "Output CSV file (default stdout)");
  sweep_w->add_option("--jobs", jobs, "Worker threads");

  auto* sweep_t = app.add_subcommand("sweep-theta", "Bounds over a parameter grid at fixed weight, as CSV");
  sweep_t->add_option("--model", model_path, "Model descriptor (JSON)")->required();
  sweep_t->add_option("--weight", weight_text, "Weight matrix w11,w12,w22");
  sweep_t->add_option("--grid", grid, "Points per axis");
  sweep_t->add_option("--box", box_text, "Parameter rectangle lo1,hi1,lo2,hi2");
  sweep_t->add_option("--out", out_path, "Output CSV file (default stdout)");
  sweep_t->add_option("--jobs", jobs, "Worker threads");

  auto* classify = app.add_subcommand("classify", "Classify a model at a point or over a grid");
  classify->add_option("--model", model_path, "Model descriptor (JSON)")->required();
  classify->add_option("--theta", theta_text, "Parameter point A,B (omit for a grid)");
  classify->add_option("--grid", grid, "Points per axis for the grid report");

  auto* verify_cmd = app.add_subcommand("verify", "Compare closed forms against brute-force oracles");
  verify_cmd->add_option("--seed", seed, "Random seed");
  verify_cmd->add_option("--count", count, "Number of random instances");
  verify_cmd->add_option("--tolerance-scale", tol_scale, "Multiplier applied to every threshold");
  verify_cmd->add_option("--jobs", jobs, "Worker threads");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    if (*bounds) {
      const auto fam = io::load_family(model_path);
      const Vec2 t = io::parse_theta(theta_text);
      const WeightMatrix w = io::parse_weight(weight_text);
      const BlochModelPoint m = zoo::evaluate(fam, t);
      const io::BoundsRecord rec = io::make_record(m, w, t(0), t(1));
      json j = io::record_to_json(rec);
      j["model"] = io::family_to_json(fam);
      j["theta"] = {t(0), t(1)};
      j["weight"] = {w.w11(), w.w12(), w.w22()};
      j["s"] = detail::vec_json(m.s);
      j["classification"] = to_string(classify_point(m).label);
      out << std::setprecision(17) << j.dump(2) << '\n';
      return kOk;
    }
    if (*sweep_w) {
      const auto fam = io::load_family(model_path);
      io::WeightSweepSpec spec;
      spec.theta = io::parse_theta(theta_text);
      spec.grid = grid;
      spec.jobs = jobs;
      spec.w2_max = w2_max;
      if (family == 53) {
        spec.source = io::WeightSource::Family53;
      } else if (family == 42) {
        spec.source = io::WeightSource::Family42;
      } else {
        throw DomainError("--family must be 53 or 42");
      }
      const auto rows = io::sweep_weight(fam, spec);
      detail::with_output(out_path, out, [&](std::ostream& o) {
        io::write_csv(o, rows, "w", family == 53 ? "omega" : "w2", grid);
      });
      return kOk;
    }
    if (*sweep_t) {
      const auto fam = io::load_family(model_path);
      io::ThetaSweepSpec spec;
      spec.weight = io::parse_weight(weight_text);
      spec.grid = grid;
      spec.jobs = jobs;
      if (!box_text.empty()) {
        const auto b = io::parse_numbers(box_text, 4, "--box");
        if (!(b[0] < b[1]) || !(b[2] < b[3])) throw DomainError("--box needs lo < hi on both axes");
        spec.box = zoo::Domain{b[0], b[1], b[2], b[3]};
      }
      const auto rows = io::sweep_theta(fam, spec);
      detail::with_output(out_path, out, [&](std::ostream& o) { io::write_csv(o, rows, "theta1", "theta2"); });
      return kOk;
    }
    if (*classify) {
      const auto fam = io::load_family(model_path);
      json j;
      if (!theta_text.empty()) {
        const Vec2 t = io::parse_theta(theta_text);
        j = detail::class_json(classify_point(zoo::evaluate(fam, t)));
        j["theta"] = {t(0), t(1)};
      } else {
        if (grid < 2) throw DomainError("grid count must be at least 2");
        const zoo::Domain box = detail::classify_box(fam);
        const ParamGrid pg{box.lo1, box.hi1, grid, box.lo2, box.hi2, grid};
        const FamilyReport rep = classify_family(fam, pg, true);
        int counts[3] = {0, 0, 0};
        for (const auto& c : rep.points) ++counts[static_cast<int>(c.label)];
        j = {{"globally_d_invariant", rep.globally_d_invariant},
             {"radius_range", {rep.radius_min, rep.radius_max}},
             {"points", rep.points.size()},
             {"skipped", rep.skipped},
             {"counts", {{"DInvariant", counts[0]}, {"AsymptoticallyClassical", counts[1]}, {"Generic", counts[2]}}}};
      }
      out << std::setprecision(17) << j.dump(2) << '\n';
      return kOk;
    }
    if (*verify_cmd) {
      const verify::Report rep = verify::run(seed, count, tol_scale, jobs);
      out << "seed " << rep.seed << ", " << rep.count << " instances\n";
      for (const auto& c : rep.checks) {
        out << std::left << std::setw(24) << c.name << " max " << std::scientific << std::setprecision(3)
            << c.worst << "  limit " << c.threshold << "  " << (c.ok() ? "ok" : "FAIL") << '\n';
      }
      out << std::defaultfloat;
      if (!rep.ok()) {
        for (const auto& c : rep.checks) {
          if (!c.ok()) err << "failing instance for " << c.name << ": " << c.worst_instance.dump() << '\n';
        }
        return kVerifyFailed;
      }
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kInvalidInput;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace holevo::cli
