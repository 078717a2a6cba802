#include "tsnbound/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace tsnb {

namespace {

// Flow crossing a server: position on its path and the server it comes from
// (empty for first hops, which enter straight from the source).
struct Crossing {
    const Flow* flow;
    std::size_t hop;
    std::string predecessor;
};

// Packetization adds one maximum packet to the source burst.
ConcaveCurve source_curve(const Flow& f, const AnalysisOptions& options) {
    if (!options.packetizer || f.max_packet_length <= 0.0) return f.arrival;
    std::vector<TokenBucket> pieces = f.arrival.pieces();
    for (auto& p : pieces) p.burst += f.max_packet_length;
    return ConcaveCurve(std::move(pieces));
}

double ceil_to_quantum(double v, double quantum) {
    return std::ceil(v / quantum) * quantum;
}

struct Engine {
    const OutputPortNetwork& net;
    const AnalysisOptions& options;
    const IterationLimits& limits;

    std::map<std::string, std::vector<Crossing>> crossings; // server -> flows through it
    std::map<std::string, ConcaveCurve> sources;            // flow -> effective source curve

    Engine(const OutputPortNetwork& n, const AnalysisOptions& o, const IterationLimits& l)
        : net(n), options(o), limits(l) {
        for (const auto& s : net.servers) crossings[s.name];
        for (const auto& f : net.flows) {
            sources.emplace(f.name, source_curve(f, options));
            for (std::size_t k = 0; k < f.path.size(); ++k) {
                crossings[f.path[k]].push_back({&f, k, k == 0 ? std::string() : f.path[k - 1]});
            }
        }
    }

    // State of one server given the per-server delays of the previous pass.
    ServerState server_state(const std::string& name,
                             const std::map<std::string, double>& delays) const {
        ServerState state;
        const Server& server = net.server(name);

        // Arrival bound of each flow at this server: source curve propagated
        // through the delays of its upstream hops.
        std::map<std::string, std::vector<const Flow*>> groups;
        for (const Crossing& c : crossings.at(name)) {
            double upstream = 0.0;
            for (std::size_t k = 0; k < c.hop; ++k) upstream += delays.at(c.flow->path[k]);
            ConcaveCurve arrival = propagate(sources.at(c.flow->name), upstream);
            double source_burst = sources.at(c.flow->name).burst_at_origin();
            if (arrival.burst_at_origin() >
                limits.burst_explosion_factor * std::max(source_burst, 1.0)) {
                throw DivergenceError("burst of flow '" + c.flow->name + "' exploded at server '" +
                                      name + "'");
            }
            state.flow_arrivals.emplace(c.flow->name, std::move(arrival));
            groups[c.predecessor].push_back(c.flow);
        }

        // Aggregate per predecessor group; input shaping applies the upstream
        // link's shaper gamma_{C,L} to every group that arrives over a link
        // with finite capacity. Source groups are never shaped.
        ConcaveCurve total = ConcaveCurve::zero();
        bool first = true;
        for (const auto& [predecessor, flows] : groups) {
            ConcaveCurve sum = state.flow_arrivals.at(flows.front()->name);
            for (std::size_t i = 1; i < flows.size(); ++i) {
                sum = add(sum, state.flow_arrivals.at(flows[i]->name));
            }
            if (options.input_shaping && !predecessor.empty()) {
                const Server& upstream = net.server(predecessor);
                if (upstream.capacity) {
                    double packet = 0.0;
                    for (const Flow* f : flows) {
                        packet = std::max(packet, f->max_packet_length);
                        if (options.packetizer) packet = std::max(packet, f->min_packet_length);
                    }
                    sum = shape(sum, Shaper(*upstream.capacity, packet));
                }
            }
            total = first ? sum : add(total, sum);
            first = false;
        }

        state.delay = options.multiplexing == Multiplexing::Fifo
                          ? horizontal_deviation(total, server.service)
                          : intersection_delay(total, server.service);
        state.backlog = vertical_deviation(total, server.service);
        return state;
    }
};

void require_analyzable(const OutputPortNetwork& net, const AnalysisOptions& options) {
    net.validate();
    if (options.ceil_precision && !(*options.ceil_precision > 0.0)) {
        throw DomainError("ceil precision must be > 0");
    }
    if (net.servers.empty() || net.flows.empty()) {
        throw DomainError("network '" + net.name + "' has no servers or no flows to analyze");
    }
    std::vector<std::string> unstable = check_stability(net);
    if (!unstable.empty()) {
        std::string names;
        for (const auto& s : unstable) names += (names.empty() ? "" : ", ") + s;
        throw UnstableError("utilization >= 1 at: " + names);
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

std::map<std::string, ServerState> solve_server_states(const OutputPortNetwork& net,
                                                       const AnalysisOptions& options,
                                                       const IterationLimits& limits) {
    require_analyzable(net, options);
    Engine engine(net, options, limits);
    InducedGraph graph = induced_graph(net);

    std::map<std::string, ServerState> states;
    std::vector<std::string> topo = graph.topological_order();

    if (!topo.empty()) {
        // Feed-forward: one pass, upstream delays are final when needed.
        std::map<std::string, double> delays;
        for (const auto& s : net.servers) delays[s.name] = 0.0;
        for (const auto& name : topo) {
            if (engine.crossings.at(name).empty()) continue;
            ServerState state = engine.server_state(name, delays);
            delays[name] = state.delay;
            states.emplace(name, std::move(state));
        }
        return states;
    }

    // Cyclic dependencies: iterate whole passes from zero delays until the
    // delay vector stops moving.
    std::map<std::string, double> delays;
    for (const auto& s : net.servers) delays[s.name] = 0.0;

    for (int pass = 0; pass < limits.max_passes; ++pass) {
        std::map<std::string, ServerState> next_states;
        std::map<std::string, double> next_delays = delays;
        for (const auto& s : net.servers) {
            if (engine.crossings.at(s.name).empty()) continue;
            ServerState state = engine.server_state(s.name, delays);
            if (options.ceil_precision) {
                state.delay = ceil_to_quantum(state.delay, *options.ceil_precision);
            }
            next_delays[s.name] = state.delay;
            next_states.emplace(s.name, std::move(state));
        }

        bool settled = true;
        for (const auto& [name, d] : next_delays) {
            double before = delays.at(name);
            if (options.ceil_precision ? d != before : !nearly_equal(d, before, 1e-9)) {
                settled = false;
                break;
            }
        }
        delays = std::move(next_delays);
        if (settled) return next_states;
    }

    std::vector<std::string> cycle = graph.find_cycle();
    std::string trace;
    for (const auto& node : cycle) trace += (trace.empty() ? "" : " -> ") + node;
    throw DivergenceError("no finite bound found after " + std::to_string(limits.max_passes) +
                          " passes over cycle " + trace);
}

NetworkResult analyze_tfa(const OutputPortNetwork& net, const AnalysisOptions& options,
                          const IterationLimits& limits) {
    auto start = std::chrono::steady_clock::now();
    std::map<std::string, ServerState> states = solve_server_states(net, options, limits);

    NetworkResult result;
    result.method_label = std::string(kMethodPrefix) + "_TFA";
    for (const auto& [name, state] : states) result.server_delay[name] = state.delay;
    for (const auto& f : net.flows) {
        double total = 0.0;
        for (const auto& hop : f.path) total += states.at(hop).delay;
        result.flow_e2e_delay[f.name] = total;
    }
    result.execution_time = seconds_since(start);
    return result;
}

NetworkResult analyze_sfa(const OutputPortNetwork& net, const AnalysisOptions& options,
                          const IterationLimits& limits) {
    auto start = std::chrono::steady_clock::now();
    std::map<std::string, ServerState> states = solve_server_states(net, options, limits);

    NetworkResult result;
    result.method_label = std::string(kMethodPrefix) + "_SFA";
    for (const auto& [name, state] : states) result.server_delay[name] = state.delay;

    for (const auto& f : net.flows) {
        ConvexCurve end_to_end = ConvexCurve::unlimited();
        for (const auto& hop : f.path) {
            const ServerState& state = states.at(hop);
            const ConvexCurve& service = net.server(hop).service;

            ConvexCurve left_over = service;
            bool have_cross = false;
            ConcaveCurve cross = ConcaveCurve::zero();
            for (const auto& g : net.flows) {
                if (g.name == f.name || !state.flow_arrivals.count(g.name)) continue;
                const ConcaveCurve& bound = state.flow_arrivals.at(g.name);
                cross = have_cross ? add(cross, bound) : bound;
                have_cross = true;
            }
            if (have_cross) left_over = residual_service(service, cross);
            end_to_end = convolve(end_to_end, left_over);
        }
        ConcaveCurve own = source_curve(f, options);
        result.flow_e2e_delay[f.name] = horizontal_deviation(own, end_to_end);
    }
    result.execution_time = seconds_since(start);
    return result;
}

} // namespace tsnb
