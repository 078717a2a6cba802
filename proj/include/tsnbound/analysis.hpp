#pragma once

#include <map>
#include <string>

#include "tsnbound/network.hpp"

namespace tsnb {

// Aggregate state of one analyzed server.
struct ServerState {
    std::map<std::string, ConcaveCurve> flow_arrivals; // flow -> bound entering this server
    double delay = 0.0;                                // seconds
    double backlog = 0.0;                              // bits
};

struct ResultUnits {
    std::string flow_delay = "s";
    std::string server_delay = "s";
    std::string execution_time = "s";
};

struct NetworkResult {
    std::string method_label;
    std::map<std::string, double> server_delay;   // server -> delay bound
    std::map<std::string, double> flow_e2e_delay; // flow -> end-to-end bound
    double execution_time = 0.0;
    ResultUnits units;
};

struct IterationLimits {
    int max_passes = 10000;
    // A propagated burst beyond factor * max(source burst, 1 bit) counts as
    // divergence.
    double burst_explosion_factor = 1e12;
};

inline constexpr const char* kMethodPrefix = "native";

// Per-server aggregate delays, backlogs and per-flow arrival bounds. Acyclic
// induced graphs take a single pass in topological order. Cyclic graphs
// iterate whole passes to a fixed point, rounding every delay up to
// options.ceil_precision when set, and throw DivergenceError (naming a
// cycle) when no finite bound emerges within the limits.
std::map<std::string, ServerState> solve_server_states(const OutputPortNetwork& net,
                                                       const AnalysisOptions& options,
                                                       const IterationLimits& limits = {});

// Total flow analysis: per-server delay on the aggregate arrival (horizontal
// deviation under FIFO, buffer-clearing intersection under arbitrary
// multiplexing); flow end-to-end bounds are the sums along the paths.
NetworkResult analyze_tfa(const OutputPortNetwork& net, const AnalysisOptions& options,
                          const IterationLimits& limits = {});

// Separate flow analysis: convolves per-hop blind-multiplexing residual
// service (cross traffic bounded by a preliminary TFA pass) and takes the
// horizontal deviation of the flow's own source curve against it. Per-server
// delay entries come from the TFA pass.
NetworkResult analyze_sfa(const OutputPortNetwork& net, const AnalysisOptions& options,
                          const IterationLimits& limits = {});

} // namespace tsnb
