#include "gasteer/steer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gasteer/errors.hpp"

namespace gasteer {

using nlohmann::json;

namespace {

unsigned parse_blade_name(const std::string& name, int dim) {
  if (name == "1") return 0;
  if (name.size() < 2 || name[0] != 'e') throw ParseError("bad blade name '" + name + "'");
  unsigned mask = 0;
  int last = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    const char ch = name[i];
    if (ch < '1' || ch > '9') throw ParseError("bad blade name '" + name + "'");
    const int idx = ch - '0';
    if (idx > dim) throw ParseError("blade '" + name + "' is not in G_" + std::to_string(dim));
    if (idx <= last) throw ParseError("blade '" + name + "' must list indices in ascending order");
    last = idx;
    mask |= 1u << (idx - 1);
  }
  return mask;
}

Multivector point_from(Model model, const Multivector& q) {
  if (model == Model::M36) return Model36Point::from_multivector(q).mv();
  return Model47Point::from_multivector(q).mv();
}

std::string csv_row(double t, const std::vector<double>& values, std::size_t first, std::size_t count) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  for (std::size_t i = first; i < first + count; ++i) os << ',' << values[i];
  os << '\n';
  return os.str();
}

json params_to_json(const GeodesicParams& params) {
  if (const auto* p = std::get_if<GeodesicParams36>(&params)) {
    return {{"K", p->K}, {"D", p->D}, {"C3", p->C3}, {"t_final", p->t_final}};
  }
  const auto& p = std::get<GeodesicParams47>(params);
  return {{"K", p.K}, {"C1", p.C1}, {"C2", p.C2}, {"C", p.C}, {"t_final", p.t_final}};
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("report is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("report field '") + key + "': " + e.what());
  }
}

GeodesicParams params_from_json(Model model, const json& j) {
  if (model == Model::M36) {
    return GeodesicParams36{field<double>(j, "K"), field<double>(j, "D"), field<double>(j, "C3"),
                            field<double>(j, "t_final")};
  }
  return GeodesicParams47{field<double>(j, "K"), field<double>(j, "C1"), field<double>(j, "C2"),
                          field<double>(j, "C"), field<double>(j, "t_final")};
}

Multivector geodesic_point(const GeodesicParams& params, double t) {
  if (const auto* p = std::get_if<GeodesicParams36>(&params)) return representative_geodesic_36(*p, t).mv();
  return representative_geodesic_47(std::get<GeodesicParams47>(params), t).mv();
}

Flag model_flag(Model model, const Multivector& q) {
  return model == Model::M36 ? frame_flag_36(q) : frame_flag_47(q);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

Multivector parse_blade_map(const json& j, int dim) {
  if (!j.is_object()) throw ParseError("point must be an object of blade coefficients");
  Multivector q(dim);
  for (const auto& [name, value] : j.items()) {
    if (!value.is_number()) throw ParseError("coefficient of '" + name + "' must be a number");
    const unsigned mask = parse_blade_name(name, dim);
    q[mask] += value.get<double>();
  }
  if (!q.is_finite()) throw ParseError("point has non-finite coefficients");
  return q;
}

json to_blade_map(const Multivector& a) {
  json j = json::object();
  for (unsigned i = 0; i < a.size(); ++i) {
    if (a[i] != 0.0) j[blade_name(i)] = a[i];
  }
  return j;
}

TargetPoint parse_target(const json& j, std::optional<Model> model_hint) {
  if (!j.is_object()) throw ParseError("target must be a JSON object");
  std::optional<Model> model;
  if (j.contains("model")) {
    const auto& m = j.at("model");
    if (m.is_string()) model = parse_model(m.get<std::string>());
    else if (m.is_number_integer()) model = parse_model(std::to_string(m.get<int>()));
    else throw ParseError("'model' must be \"36\" or \"47\"");
  }
  if (model && model_hint && *model != *model_hint) {
    throw ParseError("--model " + model_name(*model_hint) + " disagrees with target model " + model_name(*model));
  }
  if (!model) model = model_hint;
  if (!model) throw ParseError("target has no 'model' and none was given");
  if (!j.contains("point")) throw ParseError("target is missing 'point'");
  const Multivector q = parse_blade_map(j.at("point"), algebra_dim(*model));
  try {
    return {*model, point_from(*model, q)};
  } catch (const ModelDomain& e) {
    throw ParseError(e.what());
  }
}

json load_json(const std::string& spec) {
  const auto first = spec.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && spec[first] == '{') return json::parse(spec);
    std::ifstream in(spec);
    if (!in) throw ParseError("cannot open '" + spec + "'");
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

std::vector<double> point_invariants(const TargetPoint& target) {
  if (target.model == Model::M36) return invariants_of(Model36Point::from_multivector(target.q));
  return invariants_of(Model47Point::from_multivector(target.q));
}

std::vector<std::string> invariant_names(Model model) {
  if (model == Model::M36) return {"x.x", "z.z", "(x^z)*"};
  return {"x", "l.l", "(l.y)e1", "y.y"};
}

std::vector<std::string> coordinate_names(Model model) {
  if (model == Model::M36) return {"x1", "x2", "x3", "z1", "z2", "z3"};
  return {"x", "l1", "l2", "l3", "y1", "y2", "y3"};
}

std::vector<double> point_coordinates(Model model, const Multivector& q) {
  if (model == Model::M36) {
    const auto c = Model36Point::from_multivector(q).coordinates();
    return {c.begin(), c.end()};
  }
  const auto c = Model47Point::from_multivector(q).coordinates();
  return {c.begin(), c.end()};
}

SteerReport steer(const TargetPoint& target, const SteerOptions& options) {
  if (options.samples < 2) throw ModelDomain("need at least 2 trajectory samples");
  const Model model = target.model;
  const Multivector qt = point_from(model, target.q);
  const std::vector<double> invariants = point_invariants({model, qt});

  // The target flag is checked before solving so a degenerate target fails fast.
  const Flag target_flag = model_flag(model, qt);

  SolveRequest req;
  req.model = model;
  req.target = invariants;
  req.k_max = options.k_max;
  req.t_max = options.t_max;
  req.tolerance = options.tolerance;
  req.max_starts = options.starts;
  req.seed = options.seed;
  const SolveResult solved = solve(req);
  const GeodesicParams params = solved.solutions.front().params;
  const double t_final = arc_time(params);

  const Multivector qo = geodesic_point(params, t_final);
  const Alignment alignment = align_flags_traced(model_flag(model, qo), target_flag);

  SteerReport report{model,
                     qt,
                     invariants,
                     params,
                     qo,
                     alignment.rotor,
                     alignment.steps,
                     {},
                     {},
                     0.0,
                     options.acceptance_bound,
                     options.tolerance,
                     solved.diagnostics,
                     solved.solutions.size()};
  report.times.reserve(static_cast<std::size_t>(options.samples));
  for (int k = 0; k < options.samples; ++k) {
    const double t = k == options.samples - 1 ? t_final : t_final * k / (options.samples - 1);
    report.times.push_back(t);
    report.trajectory.push_back(point_from(model, sandwich(alignment.rotor, geodesic_point(params, t))));
  }
  report.endpoint_error = max_abs_diff(report.trajectory.back(), qt);
  if (!(report.endpoint_error <= options.acceptance_bound)) {
    throw AcceptanceFailure("endpoint error " + fmt(report.endpoint_error) + " exceeds bound " +
                            fmt(options.acceptance_bound));
  }
  return report;
}

json report_to_json(const SteerReport& r) {
  json steps = json::array();
  for (const auto& s : r.steps) {
    const auto c = s.rotor.mv().coeffs();
    steps.push_back({{"index", s.index}, {"rotor", std::vector<double>(c.begin(), c.end())},
                     {"antipodal_path", s.antipodal_path}});
  }
  json samples = json::array();
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    std::vector<double> row{r.times[k]};
    const auto c = point_coordinates(r.model, r.trajectory[k]);
    row.insert(row.end(), c.begin(), c.end());
    samples.push_back(row);
  }
  std::vector<std::string> columns{"t"};
  const auto names = coordinate_names(r.model);
  columns.insert(columns.end(), names.begin(), names.end());

  const auto rotor = r.rotor.mv().coeffs();
  return {
      {"model", model_name(r.model)},
      {"target", to_blade_map(r.target)},
      {"invariants", r.invariants},
      {"invariant_names", invariant_names(r.model)},
      {"params", params_to_json(r.params)},
      {"representative_endpoint", to_blade_map(r.representative_endpoint)},
      {"rotor", std::vector<double>(rotor.begin(), rotor.end())},
      {"rotor_steps", steps},
      {"trajectory", {{"columns", columns}, {"samples", samples}}},
      {"endpoint_error", r.endpoint_error},
      {"acceptance_bound", r.acceptance_bound},
      {"solver",
       {{"starts", r.diagnostics.starts},
        {"converged", r.diagnostics.converged},
        {"solutions", r.solutions_found},
        {"tolerance", r.solver_tolerance}}},
  };
}

std::string trajectory_csv(const SteerReport& r) {
  std::string out = "t";
  for (const auto& n : coordinate_names(r.model)) out += "," + n;
  out += '\n';
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const auto c = point_coordinates(r.model, r.trajectory[k]);
    out += csv_row(r.times[k], c, 0, c.size());
  }
  return out;
}

std::vector<PlotFile> plot_data(const SteerReport& r) {
  struct Group {
    std::string suffix;
    std::size_t first, count;
  };
  const std::vector<Group> groups = r.model == Model::M36
                                        ? std::vector<Group>{{"x", 0, 3}, {"z", 3, 3}}
                                        : std::vector<Group>{{"x", 0, 1}, {"l", 1, 3}, {"y", 4, 3}};
  const auto names = coordinate_names(r.model);
  std::vector<PlotFile> files;
  for (const auto& g : groups) {
    std::string csv = "t";
    for (std::size_t i = g.first; i < g.first + g.count; ++i) csv += "," + names[i];
    csv += '\n';
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      csv += csv_row(r.times[k], point_coordinates(r.model, r.trajectory[k]), g.first, g.count);
    }
    files.push_back({g.suffix, std::move(csv)});
  }
  return files;
}

std::vector<VerifyCheck> verify_report(const json& j) {
  const Model model = [&] {
    try {
      return parse_model(field<std::string>(j, "model"));
    } catch (const ParseError&) {
      throw;
    }
  }();
  const int dim = algebra_dim(model);
  const TargetPoint target = parse_target({{"model", model_name(model)}, {"point", field<json>(j, "target")}});
  const GeodesicParams params = params_from_json(model, field<json>(j, "params"));
  const double bound = field<double>(j, "acceptance_bound");
  const auto rotor_coeffs = field<std::vector<double>>(j, "rotor");
  if (rotor_coeffs.size() != (std::size_t{1} << dim)) {
    throw ParseError("rotor needs " + std::to_string(1 << dim) + " coefficients");
  }
  const json traj = field<json>(j, "trajectory");
  const auto samples = field<std::vector<std::vector<double>>>(traj, "samples");

  std::vector<VerifyCheck> checks;
  auto add = [&](std::string name, bool pass, std::string detail) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  };

  const double level = std::visit([](const auto& p) { return p.level_residual(); }, params);
  add("level_condition", std::abs(level) <= 1e-8, "residual " + fmt(level));

  Multivector rotor_mv(dim);
  for (std::size_t i = 0; i < rotor_coeffs.size(); ++i) rotor_mv[static_cast<unsigned>(i)] = rotor_coeffs[i];
  std::optional<Rotor> rotor;
  try {
    rotor = Rotor::from_multivector(rotor_mv, 1e-10);
    add("rotor_unitality", true, "R R~ - 1 = " + fmt(unitality_error(rotor_mv)));
  } catch (const InvalidRotor& e) {
    add("rotor_unitality", false, e.what());
  }
  if (model == Model::M47) {
    add("rotor_fixes_e1", rotor && fixes_e1(*rotor), rotor ? "checked" : "no valid rotor");
  }

  const double t_final = arc_time(params);
  const auto target_inv = point_invariants(target);
  double inv_err = 0.0;
  try {
    const auto got = geodesic_invariants(params, t_final);
    for (std::size_t i = 0; i < got.size(); ++i) inv_err = std::max(inv_err, std::abs(got[i] - target_inv[i]));
    add("invariant_match", inv_err <= bound, "max deviation " + fmt(inv_err));
  } catch (const Error& e) {
    add("invariant_match", false, e.what());
  }

  if (rotor) {
    const double err = max_abs_diff(sandwich(*rotor, geodesic_point(params, t_final)), target.q);
    add("endpoint_recomputed", err <= bound, "error " + fmt(err) + ", bound " + fmt(bound));
  } else {
    add("endpoint_recomputed", false, "no valid rotor");
  }

  bool times_ok = samples.size() >= 2;
  const std::size_t width = 1 + coordinate_names(model).size();
  for (std::size_t k = 0; times_ok && k < samples.size(); ++k) {
    times_ok = samples[k].size() == width && (k == 0 ? samples[k][0] == 0.0 : samples[k][0] > samples[k - 1][0]);
  }
  times_ok = times_ok && std::abs(samples.back()[0] - t_final) <= 1e-12 * std::max(1.0, t_final);
  add("trajectory_times", times_ok, std::to_string(samples.size()) + " samples");

  if (times_ok) {
    const auto want = point_coordinates(model, target.q);
    double err = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) err = std::max(err, std::abs(samples.back()[i + 1] - want[i]));
    add("trajectory_endpoint", err <= bound, "error " + fmt(err) + ", bound " + fmt(bound));
  } else {
    add("trajectory_endpoint", false, "malformed trajectory");
  }
  return checks;
}

}  // namespace gasteer
