#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "linealloc/experiment.hpp"

using namespace linealloc;
using nlohmann::json;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(std::move(cells));
  }
  return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  auto it = std::find(header.begin(), header.end(), name);
  REQUIRE(it != header.end());
  return int(it - header.begin());
}

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("law tokens and rescaling") {
  CHECK(law_token(DistanceLaw::Exponential(0.5)) == "exp(rate=0.5)");
  CHECK(law_token(DistanceLaw::Uniform(3.0)) == "unif(max=3)");

  auto laws = {DistanceLaw::Exponential(2.0), DistanceLaw::Deterministic(0.7),
               DistanceLaw::Uniform(1.4), DistanceLaw::HyperExp2(0.3, 4.0, 0.8)};
  for (const auto& law : laws) {
    auto scaled = law_scaled_to_mean(law, 2.5);
    CHECK(scaled.kind == law.kind);
    CHECK(scaled.mean() == Catch::Approx(2.5).margin(1e-12));
    // rescaling must not change the shape, only the scale
    CHECK(scaled.variance() / (scaled.mean() * scaled.mean()) ==
          Catch::Approx(law.variance() / (law.mean() * law.mean()))
              .margin(1e-10));
  }
  auto bad = [] { law_scaled_to_mean(DistanceLaw::Exponential(1.0), 0.0); };
  CHECK_THROWS_AS(bad(), std::invalid_argument);
}

TEST_CASE("config errors list every offending field") {
  json cfg = {{"scenario", "simulate"}, {"trials", 0}, {"warmup", 1.5}};
  try {
    run_simulate(cfg);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    CHECK(msg.find("user_law") != std::string::npos);
    CHECK(msg.find("server_law") != std::string::npos);
    CHECK(msg.find("trials") != std::string::npos);
    CHECK(msg.find("warmup") != std::string::npos);
  }
  auto unknown = [] { run_scenario(json{{"scenario", "frobnicate"}}); };
  CHECK_THROWS_AS(unknown(), std::invalid_argument);
  auto missing = [] { run_scenario(json::object()); };
  CHECK_THROWS_AS(missing(), std::invalid_argument);
}

TEST_CASE("same config runs to byte-identical CSV") {
  json cfg = {{"scenario", "simulate"},
              {"user_law", {{"kind", "exponential"}, {"rate", 0.5}}},
              {"server_law", {{"kind", "exponential"}, {"rate", 1.0}}},
              {"n_users", 500},
              {"trials", 6},
              {"workers", 3},
              {"seed", 11},
              {"policies", {"mtr", "nn", "opt"}}};
  std::string a = run_scenario(cfg).to_csv();
  std::string b = run_scenario(cfg).to_csv();
  REQUIRE(a == b);

  json sweep = {{"scenario", "sweep"},
                {"user_law", {{"kind", "exponential"}, {"rate", 1.0}}},
                {"server_law", {{"kind", "exponential"}, {"rate", 1.0}}},
                {"n_users", 400},
                {"trials", 3},
                {"workers", 4},
                {"seed", 2},
                {"grid", {{"rho", {0.5, 0.8}}}},
                {"policies", {"mtr", "opt"}}};
  REQUIRE(run_scenario(sweep).to_csv() == run_scenario(sweep).to_csv());
}

TEST_CASE("simulate rows are self-describing and seeded per trial") {
  json cfg = {{"scenario", "simulate"},
              {"user_law", {{"kind", "exponential"}, {"rate", 0.3}}},
              {"server_law", {{"kind", "exponential"}, {"rate", 1.0}}},
              {"n_users", 300},
              {"trials", 3},
              {"seed", 40},
              {"policies", {"mtr", "ugs"}}};
  auto table = parse_csv(run_scenario(cfg).to_csv());
  REQUIRE(table.size() == 1 + 3 * 2);
  const auto& h = table[0];
  int c_seed = column(h, "seed"), c_trial = column(h, "trial");
  int c_mean = column(h, "mean"), c_ver = column(h, "version");
  int c_law = column(h, "user_law"), c_err = column(h, "error");
  int c_matched = column(h, "matched");
  for (size_t r = 1; r < table.size(); ++r) {
    const auto& row = table[r];
    REQUIRE(row.size() == h.size());
    CHECK(std::stoull(row[c_seed]) == 40 + std::stoull(row[c_trial]));
    CHECK(row[c_law] == "exp(rate=0.3)");
    CHECK(row[c_ver] == kToolVersion);
    CHECK(row[c_err].empty());
    CHECK(std::stod(row[c_mean]) > 0);
  }
  // with every user served, the sweep policies serve the same users from the
  // same servers, so their means agree and only variances differ
  for (size_t r = 1; r + 1 < table.size(); r += 2) {
    REQUIRE(table[r][c_matched] == "300");
    REQUIRE(table[r + 1][c_matched] == "300");
    CHECK(std::stod(table[r][c_mean]) ==
          Catch::Approx(std::stod(table[r + 1][c_mean])).margin(1e-9));
  }
}

TEST_CASE("sweep restricts bidirectional policies to swept-matched users") {
  json cfg = {{"scenario", "sweep"},
              {"user_law", {{"kind", "exponential"}, {"rate", 1.0}}},
              {"server_law", {{"kind", "exponential"}, {"rate", 1.0}}},
              {"n_users", 800},
              {"trials", 2},
              {"seed", 5},
              {"warmup", 0.0},
              {"grid", {{"rho", {0.7}}, {"beta", {2.0}}}},
              {"policies", {"mtr", "opt"}}};
  auto table = parse_csv(run_scenario(cfg).to_csv());
  const auto& h = table[0];
  int c_pol = column(h, "policy"), c_matched = column(h, "matched");
  int c_mean = column(h, "mean"), c_cost = column(h, "cost");
  REQUIRE(table.size() == 1 + 2 * 2);
  for (size_t r = 1; r < table.size(); r += 2) {
    REQUIRE(table[r][c_pol] == "mtr");
    REQUIRE(table[r + 1][c_pol] == "opt");
    // optimal matching runs on exactly the users the sweep matched
    CHECK(table[r][c_matched] == table[r + 1][c_matched]);
    CHECK(std::stod(table[r + 1][c_mean]) <=
          std::stod(table[r][c_mean]) + 1e-12);
    CHECK(std::stod(table[r][c_cost]) > 0);
  }
}

TEST_CASE("analytic scenario reproduces library values") {
  json cfg = {{"scenario", "analytic"},
              {"model", "bulk_mm1"},
              {"lambda", 1.0},
              {"mu", 1.0},
              {"c", 2}};
  auto table = parse_csv(run_scenario(cfg).to_csv());
  const auto& h = table[0];
  REQUIRE(table.size() == 2);
  CHECK(std::stod(table[1][column(h, "value")]) ==
        Catch::Approx(1.6180339887498948).margin(1e-12));
  CHECK(std::stod(table[1][column(h, "root")]) ==
        Catch::Approx(0.6180339887498948).margin(1e-12));

  json grps = {{"scenario", "analytic"},
               {"model", "grps"},
               {"user_law", {{"kind", "deterministic"}, {"value", 2.0}}},
               {"mu", 1.0},
               {"c", 1}};
  auto t2 = parse_csv(run_scenario(grps).to_csv());
  CHECK(std::stod(t2[1][column(t2[0], "value")]) ==
        Catch::Approx(gm1_batch(DistanceLaw::Deterministic(2.0), 1.0, 1)
                          .mean_delay)
            .margin(1e-12));

  // numeric trouble stays in the row instead of aborting
  json unstable = {{"scenario", "analytic"},
                   {"model", "grps"},
                   {"user_law", {{"kind", "deterministic"}, {"value", 0.5}}},
                   {"mu", 1.0},
                   {"c", 1}};
  auto t3 = parse_csv(run_scenario(unstable).to_csv());
  CHECK(t3[1][column(t3[0], "value")].empty());
  CHECK(!t3[1][column(t3[0], "error")].empty());

  auto bad_model = [] {
    run_scenario(json{{"scenario", "analytic"}, {"model", "nope"}});
  };
  CHECK_THROWS_AS(bad_model(), std::invalid_argument);
}

TEST_CASE("hetcap scenario row carries the chain solution") {
  json cfg = {{"scenario", "hetcap"},
              {"server_law", {{"kind", "deterministic"}, {"value", 1.0}}},
              {"lambda", 1.2},
              {"cap_pmf", {0.25, 0.5, 0.25}}};
  auto table = parse_csv(run_scenario(cfg).to_csv());
  const auto& h = table[0];
  auto sol = hetcap_solve(DistanceLaw::Deterministic(1.0), 1.2,
                          CapacityDist{{0.25, 0.5, 0.25}});
  CHECK(std::stod(table[1][column(h, "mean_delay")]) ==
        Catch::Approx(sol.mean_delay).margin(1e-10));
  CHECK(std::stod(table[1][column(h, "pi0")]) ==
        Catch::Approx(sol.pi[0]).margin(1e-10));
  CHECK(table[1][column(h, "cap_pmf")] == "0.25|0.5|0.25");
}

TEST_CASE("assign round-trips an instance file") {
  std::string path = temp_file("linealloc_test_instance.csv");
  {
    std::ofstream out(path);
    out << "role,location,capacity\n";
    out << "user,0.5,\n";
    out << "server,1.0,2\n";
    out << "user,2.5,\n";
    out << "server,3.0,1\n";
    out << "user,3.2,\n";
  }
  json cfg = {{"scenario", "assign"}, {"instance_csv", path}};
  auto res = run_scenario(cfg);
  auto table = parse_csv(res.to_csv());
  REQUIRE(table.size() == 1 + 3 + 1);  // header, user rows, summary row
  CHECK(table[1] == std::vector<std::string>{"0", "0", "0.5"});
  CHECK(table[2] == std::vector<std::string>{"1", "0", "1.5"});
  CHECK(table[3] == std::vector<std::string>{"2", "1", "0.2"});
  CHECK(table[4][0] == "-1");
  CHECK(table[4][1] == "3");
  CHECK(res.summary.find("\"matched\": 3") != std::string::npos);
  std::remove(path.c_str());

  auto gone = [] {
    run_scenario(json{{"scenario", "assign"}, {"instance_csv", "/nope.csv"}});
  };
  CHECK_THROWS_AS(gone(), std::invalid_argument);
}

TEST_CASE("embed round-trips a points file") {
  auto inst = collinear_planar_instance(25, 50, 9);
  std::string path = temp_file("linealloc_test_points.csv");
  {
    std::ofstream out(path);
    out << "role,x,y\n";
    for (const auto& p : inst.users)
      out << "user," << p[0] << "," << p[1] << "\n";
    for (const auto& p : inst.servers)
      out << "server," << p[0] << "," << p[1] << "\n";
  }
  json cfg = {{"scenario", "embed"}, {"points_csv", path}};
  auto res = run_scenario(cfg);
  auto table = parse_csv(res.to_csv());
  REQUIRE(table.size() == 1 + 25);
  // collinear input: the embedding matches optimally, ratio exactly 1
  auto pos = res.summary.find("\"ratio\": ");
  REQUIRE(pos != std::string::npos);
  double ratio = std::stod(res.summary.substr(pos + 9));
  CHECK(ratio == Catch::Approx(1.0).margin(1e-9));
  std::remove(path.c_str());
}
