#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gasteer/errors.hpp"
#include "gasteer/steer.hpp"

using namespace gasteer;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInfeasible = 2, kDegenerate = 3, kInput = 4 };

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ParseError("failed writing '" + path + "'");
}

std::optional<Model> model_option(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_model(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steer the (3,6) and (4,7) Carnot groups to a target point via rotor flag alignment"};
  app.require_subcommand(1);

  std::string model_str, target_spec, out_path, format = "json", plot_prefix, report_path;
  SteerOptions opts;

  auto* inv = app.add_subcommand("invariants", "Print the invariant tuple of a target point");
  inv->add_option("--target", target_spec, "Target JSON, inline or a file path")->required();
  inv->add_option("--model", model_str, "36 or 47 (overrides a missing \"model\" field)");

  auto* st = app.add_subcommand("steer", "Compute a steering trajectory to a target point");
  st->add_option("--target", target_spec, "Target JSON, inline or a file path")->required();
  st->add_option("--model", model_str, "36 or 47");
  st->add_option("--samples", opts.samples, "Trajectory samples")->check(CLI::Range(2, 1000000));
  st->add_option("--kmax", opts.k_max, "Upper bound for K")->check(CLI::PositiveNumber);
  st->add_option("--tmax", opts.t_max, "Upper bound for arc time")->check(CLI::PositiveNumber);
  st->add_option("--tol", opts.tolerance, "Solver residual tolerance")->check(CLI::PositiveNumber);
  st->add_option("--starts", opts.starts, "Number of solver starts")->check(CLI::Range(1, 1000000));
  st->add_option("--seed", opts.seed, "Seed for the start sequence");
  st->add_option("--out", out_path, "Output file (default stdout)");
  st->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  st->add_option("--emit-plot-data", plot_prefix, "Write <prefix>_<group>.csv per coordinate group");

  auto* ve = app.add_subcommand("verify", "Re-check a steering report");
  ve->add_option("report", report_path, "Report JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*inv) {
      const TargetPoint target = parse_target(load_json(target_spec), model_option(model_str));
      json j = {{"model", model_name(target.model)},
                {"names", invariant_names(target.model)},
                {"invariants", point_invariants(target)}};
      std::cout << j.dump(2) << '\n';
      return kOk;
    }
    if (*st) {
      const TargetPoint target = parse_target(load_json(target_spec), model_option(model_str));
      const SteerReport report = steer(target, opts);
      write_text(out_path, format == "csv" ? trajectory_csv(report) : report_to_json(report).dump(2) + "\n");
      if (!plot_prefix.empty()) {
        for (const auto& f : plot_data(report)) write_text(plot_prefix + "_" + f.suffix + ".csv", f.csv);
      }
      return kOk;
    }
    const auto checks = verify_report(load_json(report_path));
    bool ok = true;
    for (const auto& c : checks) {
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
      ok = ok && c.pass;
    }
    return ok ? kOk : kFailure;
  } catch (const InfeasibleTarget& e) {
    std::cerr << "infeasible target: " << e.what() << '\n';
    return kInfeasible;
  } catch (const DegenerateConfiguration& e) {
    std::cerr << "degenerate configuration: " << e.what() << '\n';
    return kDegenerate;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
