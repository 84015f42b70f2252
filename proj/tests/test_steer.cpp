#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gasteer/errors.hpp"
#include "gasteer/steer.hpp"
#include "test_support.hpp"

using namespace gasteer;
using gasteer::testing::Rng;
using nlohmann::json;

namespace {

const json kTarget36 = {{"model", "36"}, {"point", {{"e1", 2}, {"e2", -1}, {"e3", 3}, {"e12", 1}, {"e13", -2}, {"e23", -2}}}};
const json kTarget47 = {{"model", "47"},
                        {"point", {{"e1", 1}, {"e2", 2}, {"e3", 1}, {"e4", 3}, {"e12", -1}, {"e13", 2}, {"e14", 2}}}};

bool failed(const std::vector<VerifyCheck>& checks, const std::string& name) {
  for (const auto& c : checks) {
    if (c.name == name) return !c.pass;
  }
  FAIL("no check named " << name);
  return false;
}

bool all_pass(const std::vector<VerifyCheck>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("blade maps") {
  const Multivector q = parse_blade_map(kTarget36["point"], 3);
  CHECK(q[0b011] == 1.0);
  CHECK(q[0b110] == -2.0);
  CHECK(parse_blade_map(json::parse(R"({"1": 2.5})"), 3).scalar_part() == 2.5);
  CHECK(to_blade_map(q) == kTarget36["point"]);
  for (const char* bad : {R"({"e21": 1})", R"({"e4": 1})", R"({"x1": 1})", R"({"e11": 1})", R"({"e": 1})",
                          R"({"e1": "one"})", R"([1, 2])"}) {
    CHECK_THROWS_AS(parse_blade_map(json::parse(bad), 3), ParseError);
  }
}

TEST_CASE("targets") {
  CHECK(parse_target(kTarget36).model == Model::M36);
  const json bare = {{"point", kTarget47["point"]}};
  CHECK(parse_target(bare, Model::M47).model == Model::M47);
  CHECK_THROWS_AS(parse_target(bare), ParseError);
  CHECK_THROWS_AS(parse_target(kTarget36, Model::M47), ParseError);
  CHECK_THROWS_AS(parse_target(json::parse(R"({"model": "36", "point": {"1": 1}})")), ParseError);
  CHECK_THROWS_AS(parse_target(json::parse(R"({"model": "47", "point": {"e23": 1}})")), ParseError);
  CHECK_THROWS_AS(parse_target(json::parse(R"({"model": "58", "point": {}})")), ParseError);
  CHECK_THROWS_AS(parse_target(json::parse(R"({"model": "36"})")), ParseError);
  CHECK(parse_target(json::parse(R"({"model": 36, "point": {"e1": 1}})")).model == Model::M36);
}

TEST_CASE("json loading") {
  CHECK(load_json(R"(  {"a": 1})")["a"] == 1);
  CHECK_THROWS_AS(load_json("{not json"), ParseError);
  CHECK_THROWS_AS(load_json("/nonexistent/target.json"), ParseError);
  const std::string path = "steer_test_target.json";
  std::ofstream(path) << kTarget47.dump();
  CHECK(load_json(path) == kTarget47);
  std::remove(path.c_str());
}

TEST_CASE("invariant listing") {
  CHECK(point_invariants(parse_target(kTarget36)) == std::vector<double>{14.0, -9.0, 3.0});
  CHECK(point_invariants(parse_target(kTarget47)) == std::vector<double>{1.0, 14.0, -6.0, -9.0});
  CHECK(point_invariants({Model::M36, Multivector(3)}) == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(invariant_names(Model::M47).size() == 4);
}

TEST_CASE("steer the published (3,6) example") {
  const TargetPoint t = parse_target(kTarget36);
  const SteerReport r = steer(t, {});
  CHECK(r.endpoint_error < 5e-2);
  CHECK(r.times.size() == 200);
  CHECK(r.times.front() == 0.0);
  for (std::size_t i = 1; i < r.times.size(); ++i) CHECK(r.times[i] > r.times[i - 1]);
  CHECK(r.times.back() == doctest::Approx(5.0236).epsilon(1e-3));
  CHECK(norm(r.trajectory.front()) == 0.0);
  const std::array<double, 6> printed{0.5216, -0.6741, 3.643, -1.439, 2.082, 1.611};
  const std::array<unsigned, 6> masks{0b001, 0b010, 0b100, 0b011, 0b101, 0b110};
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(r.representative_endpoint[masks[i]] - printed[i]) < 5e-3);
}

TEST_CASE("steer the published (4,7) example") {
  const SteerReport r = steer(parse_target(kTarget47), {});
  CHECK(r.endpoint_error < 5e-2);
  CHECK(fixes_e1(r.rotor));
  REQUIRE(r.steps.size() == 3);
  CHECK(std::abs(std::abs(r.steps.back().rotor.mv().scalar_part()) - 1.0) < 1e-12);
  const auto& p = std::get<GeodesicParams47>(r.params);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    CHECK(std::abs(r.trajectory[i][0b0001] - representative_geodesic_47(p, r.times[i]).x()) < 1e-12);
  }
}

TEST_CASE("steer recovers generated targets tightly") {
  Rng rng(97);
  SteerOptions opts;
  opts.acceptance_bound = 1e-6;
  for (int trial = 0; trial < 10; ++trial) {
    const GeodesicParams36 p = testing::random_params_36(rng);
    const Multivector q36 = so3_action(testing::random_rotor(rng, 3), representative_geodesic_36(p, p.t_final)).mv();
    CHECK(steer({Model::M36, q36}, opts).endpoint_error < 1e-6);

    const GeodesicParams47 g = testing::random_params_47(rng);
    const Multivector q47 =
        so3_action(testing::random_e1_fixing_rotor(rng), representative_geodesic_47(g, g.t_final)).mv();
    CHECK(steer({Model::M47, q47}, opts).endpoint_error < 1e-6);
  }
}

TEST_CASE("steer failures") {
  CHECK_THROWS_AS(steer(parse_target(json::parse(R"({"model": "36", "point": {"e1": 1, "e23": 1}})")), {}),
                  DegenerateConfiguration);
  SteerOptions tight;
  tight.t_max = 3.0;
  CHECK_THROWS_AS(steer(parse_target(kTarget36), tight), InfeasibleTarget);
  SteerOptions strict;
  strict.acceptance_bound = 1e-300;
  CHECK_THROWS_AS(steer(parse_target(kTarget36), strict), AcceptanceFailure);
  SteerOptions few;
  few.samples = 1;
  CHECK_THROWS_AS(steer(parse_target(kTarget36), few), ModelDomain);
}

TEST_CASE("reports are deterministic and exportable") {
  SteerOptions opts;
  opts.samples = 5;
  const SteerReport a = steer(parse_target(kTarget47), opts);
  const json ja = report_to_json(a);
  CHECK(ja == report_to_json(steer(parse_target(kTarget47), opts)));
  CHECK(ja["trajectory"]["samples"].size() == 5);
  CHECK(ja["trajectory"]["columns"].size() == 8);
  CHECK(ja["rotor"].size() == 16);

  const std::string csv = trajectory_csv(a);
  CHECK(csv.rfind("t,x,l1,l2,l3,y1,y2,y3\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);

  const auto files = plot_data(a);
  REQUIRE(files.size() == 3);
  CHECK(files[0].suffix == "x");
  CHECK(files[1].csv.rfind("t,l1,l2,l3\n", 0) == 0);
  CHECK(files[2].suffix == "y");

  const auto files36 = plot_data(steer(parse_target(kTarget36), opts));
  REQUIRE(files36.size() == 2);
  CHECK(files36[1].csv.rfind("t,z1,z2,z3\n", 0) == 0);
}

TEST_CASE("verify") {
  SteerOptions opts;
  opts.samples = 20;
  for (const json& target : {kTarget36, kTarget47}) {
    const json report = report_to_json(steer(parse_target(target), opts));
    CHECK(all_pass(verify_report(report)));

    json bad_rotor = report;
    bad_rotor["rotor"][0] = bad_rotor["rotor"][0].get<double>() + 0.3;
    CHECK(failed(verify_report(bad_rotor), "rotor_unitality"));

    json moved_end = report;
    auto& last = moved_end["trajectory"]["samples"].back();
    last[1] = last[1].get<double>() + 1e-1;
    CHECK(failed(verify_report(moved_end), "trajectory_endpoint"));

    json moved_target = report;
    moved_target["target"]["e2"] = moved_target["target"]["e2"].get<double>() + 1e-1;
    CHECK(failed(verify_report(moved_target), "endpoint_recomputed"));

    json off_level = report;
    off_level["params"]["K"] = off_level["params"]["K"].get<double>() * 1.5;
    CHECK_FALSE(all_pass(verify_report(off_level)));

    json missing = report;
    missing.erase("rotor");
    CHECK_THROWS_AS(verify_report(missing), ParseError);
  }
}
