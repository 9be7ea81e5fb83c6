#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "cli.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = entmeas::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(ENTMEAS_TEST_DATA) + "/" + name; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("measure logneg on the Bell state") {
  const auto r = run({"measure", "--state", data("bell.json"), "--measure", "logneg"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["value"].get<double>() == 1.0);
  CHECK(j["status"] == "exact");
  CHECK(r.out.find("\"value\":1.0") != std::string::npos);
}

TEST_CASE("measure ree on a separable state") {
  const auto r = run({"measure", "--state", data("sep.json"), "--measure", "ree"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(std::abs(j["value"].get<double>()) <= 1e-6);
  CHECK(j["status"] == "converged");
}

TEST_CASE("table and json report the same values") {
  const auto as_json = run({"measure", "--state", data("correlated.json"), "--measure", "ree"});
  const auto as_table = run({"measure", "--state", data("correlated.json"), "--measure", "ree", "--format", "table"});
  REQUIRE(as_json.code == 0);
  REQUIRE(as_table.code == 0);
  const auto j = json::parse(as_json.out);
  CHECK(as_table.out.find("value") != std::string::npos);
  CHECK(as_table.out.find(j["value"].dump()) != std::string::npos);
  CHECK(as_table.out.find(j["gap"].dump()) != std::string::npos);
}

TEST_CASE("identical configuration yields identical output") {
  const std::vector<std::string> args{"measure", "--state", data("w3.json"), "--measure", "geometric", "--seed", "4"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("numbers carry at most 12 significant digits") {
  const auto r = run({"measure", "--state", data("correlated.json"), "--measure", "hashing"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"value\":0.278071905113") != std::string::npos);
}

TEST_CASE("validation failures exit 2 and name the invariant") {
  auto r = run({"measure", "--state", data("bad_trace.json"), "--measure", "logneg"});
  CHECK(r.code == 2);
  CHECK(r.err.find("unit_trace") != std::string::npos);
  CHECK(r.err.find("residual") != std::string::npos);

  r = run({"measure", "--state", data("malformed.json"), "--measure", "logneg"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);

  r = run({"measure", "--state", data("bell.json"), "--measure", "entanglement-magic"});
  CHECK(r.code == 2);
  for (const auto& name : entmeas::cli::measure_names()) CHECK(r.err.find(name) != std::string::npos);

  r = run({"measure", "--state", data("nope.json"), "--measure", "logneg"});
  CHECK(r.code == 2);

  r = run({"measure", "--measure", "logneg"});
  CHECK(r.code == 2);
}

TEST_CASE("strict mode turns non-convergence into exit 3") {
  const auto relaxed = run({"measure", "--state", data("correlated.json"), "--measure", "ree", "--max-iterations", "1",
                            "--gap", "1e-14"});
  CHECK(relaxed.code == 0);
  CHECK(json::parse(relaxed.out)["status"] == "best_effort");
  const auto strict = run({"measure", "--state", data("correlated.json"), "--measure", "ree", "--max-iterations", "1",
                           "--gap", "1e-14", "--strict"});
  CHECK(strict.code == 3);
  CHECK(json::parse(strict.out)["status"] == "best_effort");
}

TEST_CASE("bounds command") {
  auto r = run({"bounds", "--state", data("bell.json")});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["lower"]["hashing"].get<double>() == doctest::Approx(1.0));
  CHECK(j["upper"].contains("rains"));
  r = run({"bounds", "--state", data("sep.json"), "--skip", "rains"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK_FALSE(j["upper"].contains("rains"));
  CHECK(j["ppt"] == true);
  CHECK(j["distillable"].get<double>() == 0.0);
}

TEST_CASE("convert command") {
  auto r = run({"convert", "--source", data("schmidt_even.json"), "--target", data("schmidt_0.64.json")});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["deterministic"] == true);
  CHECK(j["probability"].get<double>() == 1.0);

  r = run({"convert", "--source", data("bell.json"), "--target", data("schmidt_0.64.json")});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["deterministic"] == true);

  r = run({"convert", "--source", data("catalysis_source.json"), "--target", data("catalysis_target.json"),
           "--catalyst-rank", "2"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["deterministic"] == false);
  REQUIRE(j["catalyst"]["coefficients"].is_array());
  CHECK(j["catalyst"]["status"] == "exact");
}

TEST_CASE("gaussian command") {
  auto r = run({"gaussian", "--cov", data("tms_r05.json"), "--op", "logneg", "--cut", "1"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["value"].get<double>() == doctest::Approx(1.44270).epsilon(1e-5));

  r = run({"gaussian", "--cov", data("tms_r05_xxpp.json"), "--op", "spectrum"});
  REQUIRE(r.code == 0);
  for (const auto& v : json::parse(r.out)["symplectic_eigenvalues"]) CHECK(v.get<double>() == doctest::Approx(1.0));

  r = run({"gaussian", "--cov", data("tms_r05.json"), "--op", "ppt"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["separable"] == false);

  r = run({"gaussian", "--cov", data("tms_r05.json"), "--op", "entropy", "--cut", "1"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["value"].get<double>() > 0.0);

  r = run({"gaussian", "--cov", data("unphysical.json"), "--op", "validate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("uncertainty") != std::string::npos);
}

TEST_CASE("batch command") {
  auto r = run({"batch", "--manifest", data("manifest_geometric.json")});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  REQUIRE(j.size() == 3);
  CHECK(j[0]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j[1]["value"].get<double>() == doctest::Approx(1.16992500144).epsilon(1e-6));
  CHECK(j[2]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  for (int i = 0; i < 3; ++i) CHECK(j[static_cast<std::size_t>(i)]["index"] == i);

  r = run({"batch", "--manifest", data("manifest_empty.json")});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out) == json::array());

  r = run({"batch", "--manifest", data("manifest_broken.json")});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  REQUIRE(j.size() == 3);
  CHECK(j[0]["value"].get<double>() == 1.0);
  CHECK(j[1].contains("error"));
  CHECK_FALSE(j[2].contains("error"));
  CHECK(j[2]["status"] == "converged");
}

TEST_CASE("help lists every command") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  for (const char* command : {"measure", "bounds", "convert", "gaussian", "batch"})
    CHECK(r.out.find(command) != std::string::npos);
  const auto m = run({"measure", "--help"});
  CHECK(m.out.find("--strict") != std::string::npos);
  CHECK(m.out.find("--seed") != std::string::npos);
}

}  // TEST_SUITE
