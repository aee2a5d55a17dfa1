#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "owk/errors.hpp"
#include "owk/io.hpp"

using namespace owk;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(OWK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("owk_test_" + name)).string();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("csv writer") {
    CsvWriter w({"a", "b"});
    w.row({"1", "2"}).row({"3", "4"});
    CHECK(w.str() == "a,b\n1,2\n3,4\n");
    CHECK_THROWS_AS(w.row({"5"}), ValidationError);
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(std::stod(fmt17(1.0 / 3.0)) == 1.0 / 3.0);
  }

  TEST_CASE("points") {
    CHECK(parse_point("3,-2") == LatticePoint{3, -2});
    CHECK(parse_point("-10,0") == LatticePoint{-10, 0});
    CHECK_THROWS_AS(parse_point("3"), ValidationError);
    CHECK_THROWS_AS(parse_point("3,x"), ValidationError);
    CHECK_THROWS_AS(parse_point("3.5,1"), ValidationError);
  }

  TEST_CASE("config round trip") {
    RunConfig a;
    a.model = CfModel::half_plane_walk();
    a.orientation = Orientation::table({{0, 1}, {1, -1}});
    DriftProfile d;
    d.rows[2] = {0.25, 0.5};
    a.walk.drift = d;
    a.spec.rel_tol = 1e-7;
    a.seed = 99;
    a.format = "csv";
    RunConfig b;
    b.merge(json::parse(a.to_json().dump()));
    CHECK(b.to_json() == a.to_json());
    CHECK(b.walk.p == a.model.p);
    CHECK(b.orientation.epsilon(1) == -1);

    RunConfig c;
    CHECK_THROWS_AS(c.merge(json{{"seed", "nope"}}), ValidationError);
    CHECK_THROWS_AS(c.merge(json{{"orientation", {{"kind", "spiral"}}}}), ValidationError);
    CHECK_THROWS_AS(c.merge(json{{"zero_row", "loop"}}), ValidationError);
    RunConfig e;
    e.format = "xml";
    CHECK_THROWS_AS(e.validate(), ValidationError);
    RunConfig f;
    f.merge(json{{"p", 1.5}});
    CHECK_THROWS_AS(f.validate(), ValidationError);
  }

  TEST_CASE("orientation json") {
    for (const auto& o : {Orientation::half_plane(), Orientation::constant(-1), Orientation::alternating(),
                          Orientation::iid_random(0.25, 5), Orientation::table({{3, 1}, {-2, 0}})}) {
      const auto back = orientation_from_json(to_json(o));
      for (std::int64_t y = -6; y <= 6; ++y) CHECK(back.epsilon(y) == o.epsilon(y));
    }
  }

  TEST_CASE("emit writes output and manifest") {
    const std::string p = tmp_path("emit.csv");
    RunManifest m;
    m.command = "test";
    m.tool_version = kToolVersion;
    emit(p, "a\n1\n", m);
    CHECK(read_file(p) == "a\n1\n");
    const auto man = json::parse(read_file(p + ".manifest.json"));
    CHECK(man.at("command") == "test");
    CHECK(man.at("tool_version") == kToolVersion);
    std::filesystem::remove(p);
    std::filesystem::remove(p + ".manifest.json");
    CHECK_THROWS_AS(read_file(p), ValidationError);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("exit codes") {
    CHECK(run("phi --grid 8") == 0);
    CHECK(run("phi --p 1.5") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("gamma --x 1,2 --format xml") == 1);
    CHECK(run("mu --x 0,1 --y1 0") == 1);
    CHECK(run("green --y 10,2 --max-panels 8") == 2);
    CHECK(run("martin --sweep diagonal") == 1);
  }

  TEST_CASE("csv outputs") {
    const std::string p = tmp_path("gamma.csv");
    REQUIRE(run("gamma --x 0:3 --output " + p) == 0);
    const auto g = lines(read_file(p));
    REQUIRE(g.size() == 5);
    CHECK(g[0] == "x,gamma,sqrtx_gamma,green");
    CHECK(g[1].rfind("0,", 0) == 0);
    const auto man = json::parse(read_file(p + ".manifest.json"));
    CHECK(man.contains("config"));
    CHECK(man.contains("wall_seconds"));

    REQUIRE(run("nu --y 0,0 --output " + p) == 0);
    const auto n = lines(read_file(p));
    REQUIRE(n.size() == 2);
    CHECK(n[0] == "v,nu_mass");
    CHECK(n[1] == "0,1");

    REQUIRE(run("simulate --x 0,0 --episodes 5 --format csv --seed 3 --output " + p) == 0);
    const auto s = lines(read_file(p));
    REQUIRE(s.size() == 6);
    CHECK(s[0] == "episode_id,tau1,x_sigma1,truncated");

    const std::string q = tmp_path("sim2.csv");
    REQUIRE(run("simulate --x 0,0 --episodes 5 --format csv --seed 3 --output " + q) == 0);
    CHECK(read_file(p) == read_file(q));

    const std::string c = tmp_path("cfg.json");
    {
      RunManifest m;
      emit(c, R"({"seed": 3, "format": "csv"})", m);
    }
    REQUIRE(run("simulate --x 0,0 --episodes 5 --seed 8 --config " + c + " --output " + q) == 0);
    CHECK(read_file(p) == read_file(q));
    for (const auto& f : {p, q, c})
      for (const auto& suffix : {"", ".manifest.json"}) std::filesystem::remove(f + suffix);
  }
}
