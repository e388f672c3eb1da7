// Copyright 2026 The Poissonization Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace poisson;

TEST_CASE("elements and weights round-trip through JSON", "[io]") {
  Rng rng = make_rng(81);
  const Weight w = random_faithful_weight(rng, Algebra({2, 1}), 0.7);
  const Weight back = weight_from_json(json::parse(weight_to_json(w).dump()));
  CHECK(back.density().max_abs_diff(w.density()) == 0.0);
  const Element x = random_element(rng, w.algebra());
  CHECK(element_from_json(element_to_json(x)).max_abs_diff(x) == 0.0);
  CHECK(complex_from_json(complex_to_json(cplx(1.5, -2.0))) == cplx(1.5, -2.0));
  CHECK(complex_from_json(json(3.0)) == cplx(3.0, 0.0));
}

TEST_CASE("malformed JSON raises FormatError", "[io]") {
  CHECK_THROWS_AS(element_from_json(json::object()), FormatError);
  CHECK_THROWS_AS(element_from_json(json::parse(R"({"blocks": [{"dim": 2, "re": [[1]]}]})")),
                  FormatError);
  CHECK_THROWS_AS(weight_from_json(json::array()), FormatError);
  CHECK_THROWS_AS(complex_from_json(json("x")), FormatError);
  CHECK_THROWS_AS(map_from_json(json::parse(R"({"kind": "warp"})")), FormatError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), FormatError);
}

TEST_CASE("maps and words round-trip", "[io]") {
  Rng rng = make_rng(82);
  const LinearMap t = LinearMap::diagonal_expectation(Algebra({2, 1}));
  const LinearMap back = map_from_json(map_to_json(t));
  CHECK((back.action() - t.action()).norm() == 0.0);
  CHECK(back.flags().completely_positive);
  const LinearMap emb = map_from_json(
      json::parse(R"({"kind": "block_embedding", "src": [1], "dst": [1, 1], "target": [1]})"));
  CHECK(emb.dst().num_blocks() == 2);
  const Letters l{random_element(rng, Algebra::full(2)), random_element(rng, Algebra::full(2))};
  const auto words = words_from_json(words_to_json(WordKind::LambdaEmptyEmpty, {l, {}}));
  REQUIRE(words.size() == 2);
  CHECK(words[0].kind == WordKind::LambdaEmptyEmpty);
  CHECK(words[0].letters[1].max_abs_diff(l[1]) == 0.0);
  CHECK(words[1].letters.empty());
}

TEST_CASE("level ranges", "[io]") {
  const auto r = LevelRange::parse("5:30:5");
  CHECK(r.values() == std::vector<int>{5, 10, 15, 20, 25, 30});
  CHECK(r.str() == "5:30:5");
  CHECK(LevelRange::parse("3:3:1").values() == std::vector<int>{3});
  CHECK_THROWS_AS(LevelRange::parse("5:30"), FormatError);
  CHECK_THROWS_AS(LevelRange::parse("5:30:0"), FormatError);
  CHECK_THROWS_AS(LevelRange::parse("9:3:1"), FormatError);
}

TEST_CASE("config round-trips and validates", "[io]") {
  ExperimentConfig c;
  c.suite = "gram";
  c.seed = 17;
  c.instances = 3;
  c.algebras = {{2, 1}};
  const ExperimentConfig back = config_from_json(config_to_json(c));
  CHECK(back.suite == "gram");
  CHECK(back.seed == 17);
  CHECK(back.instances == 3);
  CHECK(back.algebras == c.algebras);
  c.suite = "nope";
  CHECK_THROWS_AS(c.validate(), FormatError);
}

TEST_CASE("generated instances are deterministic and checked", "[io]") {
  for (const auto &kind : instance_kinds()) {
    const json a = generate_instance(kind, 5, {2, 1}, 0.8);
    CHECK(a == generate_instance(kind, 5, {2, 1}, 0.8));
    CHECK(a != generate_instance(kind, 6, {2, 1}, 0.8));
  }
  const json p = generate_instance("dominated-weight-pair", 3, {3});
  CHECK(check_domination(weight_from_json(p["rho"]), weight_from_json(p["psi"])));
  CHECK_THROWS_AS(generate_instance("other", 1, {2}), FormatError);
}

TEST_CASE("classical suite passes with stable, reproducible output", "[io]") {
  ExperimentConfig c;
  c.suite = "classical";
  c.seed = 3;
  c.stable_output = true;
  c.threads = 1;
  const Report a = run_suite(c);
  CHECK(a.pass);
  // The thread count is echoed in the config and is the only allowed difference.
  auto body = [](const Report &r) {
    json j = report_to_json(r, true);
    j["config"].erase("threads");
    return j.dump(2);
  };
  const std::string ja = body(a);
  CHECK(ja == body(run_suite(c)));
  c.threads = 2;
  CHECK(ja == body(run_suite(c)));
  const json parsed = json::parse(ja);
  CHECK(parsed["schema_version"] == kReportSchemaVersion);
  CHECK_FALSE(parsed.contains("wall_time_seconds"));

  const auto dir = std::filesystem::temp_directory_path() / "poisson_io_test";
  std::filesystem::create_directories(dir);
  const auto files = write_csv_tables(a, (dir / "run").string());
  REQUIRE_FALSE(files.empty());
  std::ifstream in(files.front());
  std::string header;
  std::getline(in, header);
  CHECK_FALSE(header.empty());
  std::filesystem::remove_all(dir);
}
