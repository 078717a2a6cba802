#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tsnbound/analysis.hpp"
#include "tsnbound/network.hpp"

namespace tsnb {

// Input facts frozen when the result set is created.
struct NetworkSnapshot {
    std::string name;
    InducedGraph graph;
    std::vector<std::pair<std::string, std::vector<std::string>>> flow_paths;
    std::map<std::string, double> utilization;
};

NetworkSnapshot snapshot(const OutputPortNetwork& net);

// Accumulates the results of one or more method runs over one network.
class ResultSet {
public:
    explicit ResultSet(const OutputPortNetwork& net) : snapshot_(snapshot(net)) {}

    // Replaces an earlier result carrying the same method label.
    void add(NetworkResult result);

    const std::vector<NetworkResult>& results() const { return results_; }
    const NetworkSnapshot& network() const { return snapshot_; }

private:
    NetworkSnapshot snapshot_;
    std::vector<NetworkResult> results_;
};

// Machine report: unrounded values, delays in microseconds, execution times
// in milliseconds, with the units spelled out in a `units` entry.
std::string export_json(const ResultSet& rs);

// Human report: six sections (flow delays, server delays, execution times,
// topology, flow paths, utilization). Each value table picks the unit that
// puts its smallest positive value into [1, 1000) and rounds to 3 decimals;
// the final `min` column is the row minimum computed before rounding.
std::string export_markdown(const ResultSet& rs);

} // namespace tsnb
