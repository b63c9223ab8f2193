#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rigged/errors.hpp"
#include "rigged/io.hpp"
#include "rigged/report.hpp"
#include "rigged/run.hpp"

using namespace rigged;

namespace {

const Json* find_section(const Json& report, const std::string& name) {
  for (const auto& s : report.at("sections"))
    if (s.at("name") == name) return &s;
  return nullptr;
}

std::string verdict_of(const Json& section, const std::string& name) {
  for (const auto& v : section.at("verdicts"))
    if (v.at("name") == name) return v.at("verdict").get<std::string>();
  return {};
}

RunConfig quiet(RunConfig c) {
  c.timing = false;
  return c;
}

std::string temp_dir() {
  const auto d = std::filesystem::temp_directory_path() / "rigged_report_test";
  std::filesystem::create_directories(d);
  return d.string();
}

} // namespace

TEST_CASE("verdicts need evidence") {
  Section s("x");
  CHECK_THROWS_AS(s.verdict("v", Verdict::pass, {}), ValidationError);
  s.verdict("v", Verdict::pass, {{"r", 0.5}});
  const Json j = s.to_json(false);
  CHECK(j.at("verdicts").at(0).at("evidence").at(0).at("value") == 0.5);
  CHECK_FALSE(j.contains("elapsed_ms"));
  s.set_elapsed_ms(2.0);
  CHECK(s.to_json(true).at("elapsed_ms") == 2.0);
  CHECK_FALSE(s.to_json(false).contains("elapsed_ms"));
}

TEST_CASE("non-finite numbers become null") {
  CHECK(number(std::numeric_limits<double>::infinity()).is_null());
  CHECK(number(1.5) == 1.5);
}

TEST_CASE("CSV rendering lists numeric leaves and verdicts") {
  DiagnosticsReport r;
  Section s("sec");
  s.set("vals", Json::array({1.0, 2.0})).set("flag", true);
  s.verdict("ok", Verdict::fail, {{"e", 3.0}});
  r.sections.push_back(s);
  const std::string csv = render_csv(r);
  CHECK(csv.rfind("section,series,index,value\n", 0) == 0);
  CHECK(csv.find("sec,vals,0,1\n") != std::string::npos);
  CHECK(csv.find("sec,vals,1,2\n") != std::string::npos);
  CHECK(csv.find("fail") != std::string::npos);
}

TEST_CASE("config parsing") {
  const Json j = Json::parse(R"({"command":"strictness","model":{"dim":4,"levels":2,"weight_rule":"linear"},
                                 "seed":9,"tolerances":{"rank":1e-10},"inputs":{"t":"t.csv"}})");
  const RunConfig c = parse_config(j, "/base");
  CHECK(c.command == Command::strictness);
  CHECK(*c.model.dim == 4);
  CHECK(c.model.levels == 2);
  CHECK(*c.seed == 9);
  CHECK(c.tolerances.rank == 1e-10);
  CHECK(std::filesystem::path(c.inputs.t) == std::filesystem::path("/base/t.csv"));
  CHECK_FALSE(c.pseudo_hermitian);

  CHECK_THROWS_AS(parse_config(Json::parse(R"({"bogus":1})")), ValidationError);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"model":{"dims":3}})")), ValidationError);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"command":"nope"})")), ValidationError);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"model":{"ladder":[8,4]}})")), ValidationError);
  CHECK(parse_config(Json::parse(R"({"psi_seed":3})")).pseudo_hermitian);
}

TEST_CASE("tolerance overrides and ladders") {
  Tolerances t;
  apply_tolerance_override(t, "biorthogonality=1e-6");
  CHECK(t.biorthogonality == 1e-6);
  CHECK_THROWS_AS(apply_tolerance_override(t, "nope=1"), ValidationError);
  CHECK_THROWS_AS(apply_tolerance_override(t, "rank=-1"), ValidationError);
  CHECK(parse_ladder("8,16, 32") == std::vector<std::size_t>{8, 16, 32});
  CHECK_THROWS_AS(parse_ladder("8,4"), ValidationError);
}

TEST_CASE("config hash depends on content only") {
  RunConfig a;
  a.example = "number-op";
  RunConfig b = a;
  b.output.path = "elsewhere.json";
  b.timing = false;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.seed = 1;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("load_config reports JSON errors with a location") {
  const std::string p = temp_dir() + "/broken.json";
  std::ofstream(p) << "{\n  \"command\": \"example\",\n  oops\n}\n";
  try {
    load_config(p);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("example number-op is strict with unit constants") {
  RunConfig c;
  c.command = Command::example;
  c.example = "number-op";
  c.model.dim = 4;
  const Json j = to_json(run(quiet(c)));
  const Json* s = find_section(j, "strictness");
  REQUIRE(s);
  CHECK(verdict_of(*s, "strictness") == "strict");
  for (const auto& v : s->at("data").at("lower")) CHECK(std::abs(v.get<double>() - 1.0) <= 1e-12);
  CHECK(j.at("meta").at("config_hash") == config_hash(c));
}

TEST_CASE("check-biorthogonal on identity CSVs") {
  const std::string d = temp_dir();
  save_matrix(d + "/xi.csv", CMatrix::Identity(3, 3));
  save_matrix(d + "/zeta.csv", CMatrix::Identity(3, 3));
  RunConfig c = parse_config(Json::parse(R"({"command":"check-biorthogonal","inputs":{"xi":"xi.csv","zeta":"zeta.csv"}})"), d);
  const Json j = to_json(run(quiet(c)));
  const Json* s = find_section(j, "biorthogonality");
  REQUIRE(s);
  CHECK(s->at("data").at("residual") == 0.0);
  CHECK(verdict_of(*s, "biorthogonal") == "pass");
}

TEST_CASE("mismatched input shapes name the file") {
  const std::string d = temp_dir();
  save_matrix(d + "/xi3.csv", CMatrix::Identity(3, 3));
  save_matrix(d + "/zeta2.csv", CMatrix::Identity(2, 2));
  RunConfig c = parse_config(Json::parse(R"({"command":"check-biorthogonal","inputs":{"xi":"xi3.csv","zeta":"zeta2.csv"}})"), d);
  try {
    run(c);
    FAIL("expected a dimension error");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("zeta2.csv") != std::string::npos);
  }
}

TEST_CASE("unknown example is an error") {
  RunConfig c;
  c.command = Command::example;
  c.example = "nope";
  CHECK_THROWS_AS(run(c), ValidationError);
}

TEST_CASE("sobolev full report carries the Gram residuals") {
  RunConfig c;
  c.command = Command::full_report;
  c.example = "sobolev";
  c.count = 10;
  c.seed = 5;
  const Json j = to_json(run(quiet(c)));
  const Json* s = find_section(j, "sobolev");
  REQUIRE(s);
  CHECK(s->at("data").at("hermite_gram_residual").get<double>() <= 1e-8);
  CHECK(s->at("data").at("modified_gram_residual").get<double>() <= 1e-8);
  for (const auto& v : collect_verdicts(j)) CHECK(v != "tainted");
}

TEST_CASE("reports are deterministic in process") {
  RunConfig c;
  c.command = Command::full_report;
  c.example = "number-op";
  c.model.dim = 4;
  c.seed = 11;
  c.psi_seed = 3;
  c.pseudo_hermitian = true;
  const std::string a = render_json(run(quiet(c)));
  const std::string b = render_json(run(quiet(c)));
  CHECK(a == b);
  CHECK(render_csv(run(quiet(c))) == render_csv(run(quiet(c))));
  CHECK(Json::parse(a).dump(2) + "\n" == a);
}

TEST_CASE("randomized sections require a seed") {
  RunConfig c;
  c.command = Command::bessel;
  c.example = "number-op";
  c.model.dim = 4;
  CHECK_THROWS_AS(run(c), ValidationError);
}
