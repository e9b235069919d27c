#include "evcrp/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace evcrp {

namespace {

using Json = nlohmann::ordered_json;

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Collects schema problems instead of bailing on the first one, so the CLI
// can list everything wrong with a file at once.
struct SchemaReader {
  const Json& root;
  std::vector<std::string> problems;

  void fail(const std::string& text) { problems.push_back(text); }

  bool require_object(const Json& node, const std::string& where) {
    if (node.is_object()) return true;
    fail(where + " must be an object");
    return false;
  }

  int read_int(const Json& node, const std::string& key, int fallback = 0) {
    if (!node.contains(key)) {
      fail("missing field \"" + key + "\"");
      return fallback;
    }
    const Json& value = node.at(key);
    if (!value.is_number_integer()) {
      fail("field \"" + key + "\" must be an integer");
      return fallback;
    }
    return value.get<int>();
  }

  Rational read_price(const Json& value, const std::string& where) {
    try {
      if (value.is_string()) return parse_rational(value.get<std::string>());
      if (value.is_number()) return parse_rational(value.dump());
    } catch (const std::exception& e) {
      fail(where + ": " + e.what());
      return Rational(0);
    }
    fail(where + " must be a number or a decimal string");
    return Rational(0);
  }

  std::vector<Rational> read_prices(const std::string& key, int num_steps) {
    std::vector<Rational> prices;
    if (!root.contains(key)) {
      fail("missing field \"" + key + "\"");
      return prices;
    }
    const Json& node = root.at(key);
    if (!node.is_array()) {
      fail("field \"" + key + "\" must be an array");
      return prices;
    }
    if (static_cast<int>(node.size()) != num_steps)
      fail("field \"" + key + "\" must have num_steps entries");
    for (std::size_t i = 0; i < node.size(); ++i)
      prices.push_back(read_price(node[i], key + "[" + std::to_string(i) + "]"));
    return prices;
  }
};

const char* method_name(SearchMethod method) {
  return method == SearchMethod::BruteForce ? "brute" : "greedy";
}

Json trajectory_to_json(const VehicleTrajectory& v) {
  return Json{{"cl", v.cl}, {"pow", v.pow}, {"pos", v.pos}};
}

VehicleTrajectory trajectory_from_json(const Json& node) {
  if (!node.is_object() || !node.contains("cl") || !node.contains("pow") ||
      !node.contains("pos"))
    throw SchemaError({"trajectory must be an object with cl, pow, pos arrays"});
  VehicleTrajectory v;
  try {
    v.cl = node.at("cl").get<std::vector<int>>();
    v.pow = node.at("pow").get<std::vector<int>>();
    v.pos = node.at("pos").get<std::vector<int>>();
  } catch (const Json::exception& e) {
    throw SchemaError({std::string("trajectory arrays must hold integers: ") +
                       e.what()});
  }
  return v;
}

}  // namespace

SchemaError::SchemaError(std::vector<std::string> problem_list)
    : IoError("instance schema: " + join(problem_list, "; ")),
      problems(std::move(problem_list)) {}

Instance instance_from_json(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }

  SchemaReader reader{root, {}};
  if (!reader.require_object(root, "instance")) throw SchemaError(reader.problems);

  static const char* known[] = {"num_vehicles", "num_steps",   "num_nodes",
                                "edge_weight",  "buy_price",   "sell_price",
                                "pow_max",      "cl_min",      "cl_max",
                                "pow_lim_neg",  "pow_lim_pos", "vehicles"};
  for (const auto& [key, value] : root.items()) {
    (void)value;
    bool ok = false;
    for (const char* name : known) ok = ok || key == name;
    if (!ok) reader.fail("unknown field \"" + key + "\"");
  }

  Instance inst;
  inst.num_vehicles = reader.read_int(root, "num_vehicles");
  inst.num_steps = reader.read_int(root, "num_steps");
  inst.num_nodes = reader.read_int(root, "num_nodes");
  inst.pow_max = reader.read_int(root, "pow_max");
  inst.cl_min = reader.read_int(root, "cl_min");
  inst.cl_max = reader.read_int(root, "cl_max");
  inst.pow_lim_neg = reader.read_int(root, "pow_lim_neg");
  inst.pow_lim_pos = reader.read_int(root, "pow_lim_pos");

  constexpr int kMaxNodes = 4096;
  if (inst.num_nodes < 1 || inst.num_nodes > kMaxNodes) {
    reader.fail("num_nodes must lie in 1.." + std::to_string(kMaxNodes));
    throw SchemaError(reader.problems);
  }
  if (inst.num_steps < 1 || inst.num_steps > 1'000'000) {
    reader.fail("num_steps must be a small positive integer");
    throw SchemaError(reader.problems);
  }

  inst.edge_weight = EdgeWeights(inst.num_nodes);
  if (!root.contains("edge_weight") || !root.at("edge_weight").is_array()) {
    reader.fail("field \"edge_weight\" must be an array of rows");
  } else {
    const Json& rows = root.at("edge_weight");
    if (static_cast<int>(rows.size()) != inst.num_nodes)
      reader.fail("edge_weight must have num_nodes rows");
    for (int from = 1; from <= std::min<int>(inst.num_nodes, static_cast<int>(rows.size()));
         ++from) {
      const Json& row = rows[static_cast<std::size_t>(from - 1)];
      if (!row.is_array() || static_cast<int>(row.size()) != inst.num_nodes) {
        reader.fail("edge_weight row " + std::to_string(from) +
                    " must have num_nodes entries");
        continue;
      }
      for (int to = 1; to <= inst.num_nodes; ++to) {
        const Json& cell = row[static_cast<std::size_t>(to - 1)];
        if (cell.is_null())
          inst.edge_weight.at(from, to) = std::nullopt;
        else if (cell.is_number_integer())
          inst.edge_weight.at(from, to) = cell.get<int>();
        else
          reader.fail("edge_weight[" + std::to_string(from) + "][" +
                      std::to_string(to) + "] must be an integer or null");
      }
    }
  }

  inst.buy_price = reader.read_prices("buy_price", inst.num_steps);
  inst.sell_price = reader.read_prices("sell_price", inst.num_steps);

  if (!root.contains("vehicles") || !root.at("vehicles").is_array()) {
    reader.fail("field \"vehicles\" must be an array");
  } else {
    for (const Json& node : root.at("vehicles")) {
      if (!node.is_object()) {
        reader.fail("vehicles entries must be objects");
        continue;
      }
      for (const auto& [key, value] : node.items()) {
        (void)value;
        if (key != "pos_initial" && key != "pos_final" && key != "cl_initial" &&
            key != "cl_final_min")
          reader.fail("unknown vehicle field \"" + key + "\"");
      }
      VehicleSpec spec;
      spec.pos_initial = reader.read_int(node, "pos_initial", 1);
      spec.pos_final = reader.read_int(node, "pos_final", 1);
      spec.cl_initial = reader.read_int(node, "cl_initial");
      spec.cl_final_min = reader.read_int(node, "cl_final_min");
      inst.vehicles.push_back(spec);
    }
  }

  if (!reader.problems.empty()) throw SchemaError(reader.problems);
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return instance_from_json(buffer.str());
}

std::string instance_to_json(const Instance& inst) {
  Json root;
  root["num_vehicles"] = inst.num_vehicles;
  root["num_steps"] = inst.num_steps;
  root["num_nodes"] = inst.num_nodes;
  Json rows = Json::array();
  for (int from = 1; from <= inst.num_nodes; ++from) {
    Json row = Json::array();
    for (int to = 1; to <= inst.num_nodes; ++to) {
      const auto& w = inst.edge_weight.at(from, to);
      if (w)
        row.push_back(*w);
      else
        row.push_back(nullptr);
    }
    rows.push_back(std::move(row));
  }
  root["edge_weight"] = std::move(rows);
  Json buy = Json::array();
  for (const auto& p : inst.buy_price) buy.push_back(format_rational(p));
  root["buy_price"] = std::move(buy);
  Json sell = Json::array();
  for (const auto& p : inst.sell_price) sell.push_back(format_rational(p));
  root["sell_price"] = std::move(sell);
  root["pow_max"] = inst.pow_max;
  root["cl_min"] = inst.cl_min;
  root["cl_max"] = inst.cl_max;
  root["pow_lim_neg"] = inst.pow_lim_neg;
  root["pow_lim_pos"] = inst.pow_lim_pos;
  Json vehicles = Json::array();
  for (const auto& spec : inst.vehicles) {
    Json node;
    node["pos_initial"] = spec.pos_initial;
    node["pos_final"] = spec.pos_final;
    node["cl_initial"] = spec.cl_initial;
    node["cl_final_min"] = spec.cl_final_min;
    vehicles.push_back(std::move(node));
  }
  root["vehicles"] = std::move(vehicles);
  return root.dump(2) + "\n";
}

std::string pools_to_json(const std::vector<PartialPool>& pools) {
  Json list = Json::array();
  for (const auto& pool : pools) {
    Json node;
    node["vehicle"] = pool.vehicle;
    Json entries = Json::array();
    for (const auto& entry : pool.entries) {
      Json row = trajectory_to_json(entry.trajectory);
      row["cost"] = format_rational(entry.cost);
      row["index"] = entry.index.str();
      entries.push_back(std::move(row));
    }
    node["entries"] = std::move(entries);
    list.push_back(std::move(node));
  }
  return Json{{"pools", std::move(list)}}.dump(2) + "\n";
}

std::vector<PartialPool> pools_from_json(std::string_view text, const Instance& inst) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!root.is_object() || !root.contains("pools") || !root.at("pools").is_array())
    throw SchemaError({"pools document must hold a \"pools\" array"});

  const QuditLayout layout = QuditLayout::for_vehicle(inst);
  std::vector<PartialPool> pools;
  for (const Json& node : root.at("pools")) {
    if (!node.is_object() || !node.contains("vehicle") || !node.contains("entries") ||
        !node.at("entries").is_array())
      throw SchemaError({"each pool needs a vehicle id and an entries array"});
    PartialPool pool;
    pool.vehicle = node.at("vehicle").get<int>();
    for (const Json& row : node.at("entries")) {
      PoolEntry entry;
      entry.trajectory = trajectory_from_json(row);
      entry.cost = trajectory_cost(inst, entry.trajectory);
      entry.index = layout.encode(entry.trajectory);
      pool.entries.push_back(std::move(entry));
    }
    std::sort(pool.entries.begin(), pool.entries.end(),
              [](const PoolEntry& a, const PoolEntry& b) {
                if (a.cost != b.cost) return a.cost < b.cost;
                return a.index < b.index;
              });
    pools.push_back(std::move(pool));
  }
  return pools;
}

std::string result_to_json(const SearchResult& result) {
  Json root;
  root["method"] = method_name(result.method);
  root["found"] = result.found;
  if (result.found)
    root["cost"] = format_rational(result.cost);
  else
    root["cost"] = nullptr;
  if (result.method == SearchMethod::GreedyTree && result.level_reached >= 0)
    root["level"] = result.level_reached;
  else
    root["level"] = nullptr;
  root["combinations_examined"] = result.combinations_examined;
  root["is_certified_optimal"] = result.is_certified_optimal;
  Json indices = Json::array();
  for (const auto i : result.pool_indices) indices.push_back(i);
  root["pool_indices"] = std::move(indices);
  Json vehicles = Json::array();
  for (const auto& v : result.solution.trajectories)
    vehicles.push_back(trajectory_to_json(v));
  root["solution"] = Json{{"vehicles", std::move(vehicles)}};
  return root.dump(2) + "\n";
}

void write_stats_csv(std::ostream& out, const GlobalStats& stats) {
  out << "cost,count\n";
  for (const auto& [cost, count] : stats.cost_histogram)
    out << format_rational(cost) << "," << count << "\n";
}

void write_trace_csv(std::ostream& out, const SamplingTrace& trace) {
  out << "run,iterations,success,found_index,cumulative_found,cumulative_iterations\n";
  for (const auto& r : trace.runs)
    out << r.run << "," << r.iterations << "," << (r.success ? 1 : 0) << ","
        << r.found_index << "," << r.cumulative_found << ","
        << r.cumulative_iterations << "\n";
}

void write_benchmark_csv(std::ostream& out, const std::vector<StrategyCurve>& curves) {
  out << "strategy,run,median_found,mean_found,q25,q75\n";
  for (const auto& curve : curves) {
    const std::string name = strategy_kind_name(curve.kind);
    for (const auto& point : curve.points)
      out << name << "," << point.run << "," << format_double(point.median_found)
          << "," << format_double(point.mean_found) << ","
          << format_double(point.q25) << "," << format_double(point.q75) << "\n";
  }
}

void write_energy_csv(std::ostream& out, const std::vector<EnergyRow>& rows) {
  out << "index,cost_term,h1,h2,h3,h4,h5,total,feasible\n";
  for (const auto& row : rows) {
    out << row.index.str() << "," << format_rational(row.energy.cost_term);
    for (const auto& term : row.energy.constraint_terms)
      out << "," << format_rational(term);
    out << "," << format_rational(row.energy.total) << ","
        << (row.feasible ? "true" : "false") << "\n";
  }
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) return "nan";
  return {buffer, ptr};
}

}  // namespace evcrp
