#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evcrp/hamiltonian.hpp"
#include "evcrp/model.hpp"
#include "evcrp/sampler.hpp"
#include "evcrp/search.hpp"

namespace evcrp {

// File-level failures (unreadable path, unwritable output).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed JSON; the message carries the parser's byte position.
struct ParseError : IoError {
  using IoError::IoError;
};

// Well-formed JSON that does not match the instance schema.
struct SchemaError : IoError {
  explicit SchemaError(std::vector<std::string> problems);
  std::vector<std::string> problems;
};

Instance instance_from_json(std::string_view text);
Instance load_instance(const std::filesystem::path& path);
// Stable field order, prices as exact decimal strings where possible.
std::string instance_to_json(const Instance& inst);

std::string pools_to_json(const std::vector<PartialPool>& pools);
std::vector<PartialPool> pools_from_json(std::string_view text, const Instance& inst);

std::string result_to_json(const SearchResult& result);

// cost,count
void write_stats_csv(std::ostream& out, const GlobalStats& stats);
// run,iterations,success,found_index,cumulative_found,cumulative_iterations
void write_trace_csv(std::ostream& out, const SamplingTrace& trace);
// strategy,run,median_found,mean_found,q25,q75
void write_benchmark_csv(std::ostream& out, const std::vector<StrategyCurve>& curves);
// index,cost_term,h1,h2,h3,h4,h5,total,feasible
void write_energy_csv(std::ostream& out, const std::vector<EnergyRow>& rows);

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double value);

}  // namespace evcrp
