#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "evcrp/io.hpp"
#include "test_support.hpp"

using namespace evcrp;
using namespace evcrp::testing;

namespace {

std::string slurp_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const IoError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("instances survive a json round trip") {
  for (const Instance& inst :
       {toy_instance(), mini_instance(), single_solution_instance()}) {
    const std::string text = instance_to_json(inst);
    CHECK(instance_from_json(text) == inst);
  }
}

TEST_CASE("serialized instances keep a stable field order") {
  const auto root = nlohmann::ordered_json::parse(instance_to_json(toy_instance()));
  std::vector<std::string> keys;
  for (const auto& [key, value] : root.items()) {
    (void)value;
    keys.push_back(key);
  }
  CHECK(keys == std::vector<std::string>{
                    "num_vehicles", "num_steps", "num_nodes", "edge_weight",
                    "buy_price", "sell_price", "pow_max", "cl_min", "cl_max",
                    "pow_lim_neg", "pow_lim_pos", "vehicles"});
  CHECK(root.at("sell_price")[1] == "4.5");
  CHECK(root.at("edge_weight")[1][3].is_null());
}

TEST_CASE("prices accept numbers, decimal strings and quotients") {
  const char* text = R"({
    "num_vehicles": 1, "num_steps": 2, "num_nodes": 1,
    "edge_weight": [[0]],
    "buy_price": [4.5, "0.125"],
    "sell_price": ["9/2", 3],
    "pow_max": 1, "cl_min": 1, "cl_max": 2,
    "pow_lim_neg": -2, "pow_lim_pos": 2,
    "vehicles": [{"pos_initial": 1, "pos_final": 1, "cl_initial": 1, "cl_final_min": 1}]
  })";
  const Instance inst = instance_from_json(text);
  CHECK(inst.buy_price[0] == Rational(9, 2));
  CHECK(inst.buy_price[1] == Rational(1, 8));
  CHECK(inst.sell_price[0] == Rational(9, 2));
  CHECK(inst.sell_price[1] == Rational(3));
  CHECK(inst.buy_price[0] == inst.sell_price[0]);
}

TEST_CASE("malformed json raises a parse error with a location") {
  CHECK_THROWS_AS(instance_from_json("{ not json"), ParseError);
  const std::string message =
      slurp_error([] { instance_from_json("{\"num_vehicles\": }"); });
  CHECK(message.find("parse error") != std::string::npos);
  CHECK(message.find("column") != std::string::npos);
}

TEST_CASE("schema errors list every problem at once") {
  const char* text = R"({
    "num_vehicles": "four", "num_steps": 1, "num_nodes": 1,
    "edge_weight": [[0]],
    "sell_price": [1],
    "pow_max": 1, "cl_min": 1, "cl_max": 2,
    "pow_lim_neg": -2, "pow_lim_pos": 2, "color": "red",
    "vehicles": [{"pos_initial": 1, "pos_final": 1, "cl_initial": 1,
                  "cl_final_min": 1, "nickname": "bus"}]
  })";
  try {
    instance_from_json(text);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    REQUIRE(e.problems.size() == 4);
    const std::string all = e.what();
    CHECK(all.find("unknown field \"color\"") != std::string::npos);
    CHECK(all.find("num_vehicles") != std::string::npos);
    CHECK(all.find("buy_price") != std::string::npos);
    CHECK(all.find("nickname") != std::string::npos);
  }

  CHECK_THROWS_AS(instance_from_json("[1, 2]"), SchemaError);
  CHECK_THROWS_AS(
      instance_from_json(R"({"num_vehicles": 1, "num_steps": 1, "num_nodes": 0})"),
      SchemaError);
  CHECK_THROWS_AS(instance_from_json(
                      R"({"num_vehicles": 1, "num_steps": -3, "num_nodes": 1})"),
                  SchemaError);
}

TEST_CASE("instance files load through the filesystem") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "evcrp_io_test_instance.json";
  {
    std::ofstream out(path, std::ios::binary);
    out << instance_to_json(mini_instance());
  }
  CHECK(load_instance(path) == mini_instance());
  fs::remove(path);
  CHECK_THROWS_AS(load_instance(path), IoError);
}

TEST_CASE("pools survive a json round trip") {
  const Instance inst = toy_instance();
  const auto pools = enumerate_all_pools(inst);
  const auto loaded = pools_from_json(pools_to_json(pools), inst);
  REQUIRE(loaded.size() == pools.size());
  for (std::size_t n = 0; n < pools.size(); ++n) {
    CHECK(loaded[n].vehicle == pools[n].vehicle);
    REQUIRE(loaded[n].entries.size() == pools[n].entries.size());
    for (std::size_t i = 0; i < pools[n].entries.size(); ++i) {
      CHECK(loaded[n].entries[i].trajectory == pools[n].entries[i].trajectory);
      CHECK(loaded[n].entries[i].cost == pools[n].entries[i].cost);
      CHECK(loaded[n].entries[i].index == pools[n].entries[i].index);
    }
  }
}

TEST_CASE("loaded pools are re-sorted and re-costed") {
  const Instance inst = mini_instance();
  // entries listed in the wrong order and without cost/index metadata
  const char* text = R"({"pools": [{"vehicle": 1, "entries": [
      {"cl": [1, 1, 2], "pow": [0, 1], "pos": [1, 2, 2]},
      {"cl": [1, 2, 2], "pow": [1, 0], "pos": [1, 1, 2]}
  ]}]})";
  const auto pools = pools_from_json(text, inst);
  REQUIRE(pools.size() == 1);
  REQUIRE(pools[0].entries.size() == 2);
  CHECK(pools[0].entries[0].cost == Rational(2));
  CHECK(pools[0].entries[0].trajectory.pow == std::vector<int>{1, 0});
  CHECK(pools[0].entries[1].cost == Rational(3));

  CHECK_THROWS_AS(pools_from_json("{", inst), ParseError);
  CHECK_THROWS_AS(pools_from_json("{}", inst), SchemaError);
  CHECK_THROWS_AS(pools_from_json(R"({"pools": [{"vehicle": 1}]})", inst),
                  SchemaError);
  CHECK_THROWS_AS(
      pools_from_json(
          R"({"pools": [{"vehicle": 1, "entries": [{"cl": "x"}]}]})", inst),
      SchemaError);
}

TEST_CASE("search results serialize with the agreed fields") {
  const Instance inst = mini_instance();
  const auto pools = enumerate_all_pools(inst);

  const SearchResult brute = brute_force(inst, pools);
  auto root = nlohmann::ordered_json::parse(result_to_json(brute));
  CHECK(root.at("method") == "brute");
  CHECK(root.at("found") == true);
  CHECK(root.at("cost") == "5");
  CHECK(root.at("level").is_null());
  CHECK(root.at("combinations_examined") == 4);
  CHECK(root.at("is_certified_optimal") == true);
  CHECK(root.at("pool_indices") == nlohmann::ordered_json::array({0, 1}));
  REQUIRE(root.at("solution").at("vehicles").size() == 2);
  CHECK(root.at("solution").at("vehicles")[0].at("pow") ==
        nlohmann::ordered_json::array({1, 0}));

  const SearchResult greedy = greedy_tree(inst, pools);
  root = nlohmann::ordered_json::parse(result_to_json(greedy));
  CHECK(root.at("method") == "greedy");
  CHECK(root.at("level") == 1);
  CHECK(root.at("is_certified_optimal") == false);

  SearchResult missing;
  missing.method = SearchMethod::GreedyTree;
  root = nlohmann::ordered_json::parse(result_to_json(missing));
  CHECK(root.at("found") == false);
  CHECK(root.at("cost").is_null());
  CHECK(root.at("level").is_null());
  CHECK(root.at("solution").at("vehicles").empty());
}

TEST_CASE("stats csv") {
  GlobalStats stats;
  stats.cost_histogram[Rational(31)] = 4;
  stats.cost_histogram[Rational(69, 2)] = 10;
  stats.cost_histogram[Rational(48)] = 1;
  std::ostringstream out;
  write_stats_csv(out, stats);
  CHECK(out.str() ==
        "cost,count\n"
        "31,4\n"
        "34.5,10\n"
        "48,1\n");
}

TEST_CASE("trace csv") {
  SamplingTrace trace;
  trace.runs.push_back({1, 16099, false, -1, 0, 16099});
  trace.runs.push_back({2, 16098, true, 3, 1, 32197});
  std::ostringstream out;
  write_trace_csv(out, trace);
  CHECK(out.str() ==
        "run,iterations,success,found_index,cumulative_found,cumulative_iterations\n"
        "1,16099,0,-1,0,16099\n"
        "2,16098,1,3,1,32197\n");
}

TEST_CASE("benchmark csv") {
  StrategyCurve curve;
  curve.kind = StrategyKind::SweepDecreasing;
  curve.points.push_back({1, 0.5, 0.625, 0.25, 1.0});
  curve.points.push_back({2, 2.0, 2.0, 2.0, 2.0});
  StrategyCurve other;
  other.kind = StrategyKind::BoyerRandom;
  other.points.push_back({1, 0.0, 0.0, 0.0, 0.0});
  std::ostringstream out;
  write_benchmark_csv(out, {curve, other});
  CHECK(out.str() ==
        "strategy,run,median_found,mean_found,q25,q75\n"
        "decreasing,1,0.5,0.625,0.25,1\n"
        "decreasing,2,2,2,2,2\n"
        "boyer,1,0,0,0,0\n");
}

TEST_CASE("energy csv") {
  EnergyRow row;
  row.index = BigInt("28211099074560000000000000000");
  row.energy.cost_term = Rational(8);
  row.energy.constraint_terms = {Rational(-200), Rational(-200), Rational(-1, 2),
                                 Rational(0), Rational(0)};
  row.energy.total = Rational(8 - 400) - Rational(1, 2);
  row.feasible = true;
  std::ostringstream out;
  write_energy_csv(out, {row});
  CHECK(out.str() ==
        "index,cost_term,h1,h2,h3,h4,h5,total,feasible\n"
        "28211099074560000000000000000,8,-200,-200,-0.5,0,0,-392.5,true\n");
}

TEST_CASE("doubles format without locale surprises") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-0.125) == "-0.125");
  CHECK(format_double(16099.0) == "16099");
  CHECK(format_double(1e300) == "1e+300");
}

}  // TEST_SUITE
