#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsnbound/curves.hpp"

namespace tsnb {

enum class Multiplexing { Fifo, Arbitrary };

struct AnalysisOptions {
    Multiplexing multiplexing = Multiplexing::Fifo;
    bool input_shaping = false;
    bool packetizer = false;
    // Quantum for rounding delays up during cyclic fixed-point iteration.
    std::optional<double> ceil_precision;
};

// Default CEIL quantum when the option is enabled without a value.
inline constexpr double kDefaultCeilPrecision = 1e-12;

// An output port offering a service curve; `capacity` is the transmission
// capacity of the attached link (shaping), unbounded when absent.
struct Server {
    std::string name;
    ConvexCurve service;
    std::optional<double> capacity;
    std::map<std::string, std::string> extras; // unknown fields kept in lenient parses
};

struct Flow {
    std::string name;
    std::vector<std::string> path; // server names, in visit order
    ConcaveCurve arrival;
    double max_packet_length = 0.0; // bits
    double min_packet_length = 0.0; // bits
    std::map<std::string, std::string> extras;
};

struct OutputPortNetwork {
    std::string name;
    AnalysisOptions options;
    std::vector<Server> servers;
    std::vector<Flow> flows;
    std::map<std::string, std::string> extras;

    const Server& server(const std::string& name) const;
    bool has_server(const std::string& name) const;

    // Checks name uniqueness, path references, repeat-free paths and packet
    // length ordering; throws DomainError on violation.
    void validate() const;
};

// Physical form: stations/switches joined by links, flows with node paths.
// Service parameters and capacity resolve per quantity through the chain
// link -> node -> network. The scalar latency/rate slots mirror the file
// format; the full-curve slot is populated by conversions and loses nothing.
// When a scalar rate is defined anywhere in the chain the scalars win,
// otherwise the innermost full curve does.

struct PhysicalNode {
    std::string name;
    bool is_switch = false;
    std::optional<double> service_latency;
    std::optional<double> service_rate;
    std::optional<ConvexCurve> service_curve;
    std::optional<double> capacity;
    std::map<std::string, std::string> extras;
};

struct PhysicalLink {
    std::string name;
    std::string from;
    std::string from_port;
    std::string to;
    std::string to_port;
    std::optional<double> service_latency;
    std::optional<double> service_rate;
    std::optional<ConvexCurve> service_curve;
    std::optional<double> capacity;
    std::map<std::string, std::string> extras;
};

struct PhysicalFlow {
    std::string name;
    std::string source;
    ConcaveCurve arrival;
    std::optional<double> max_packet_length;
    std::optional<double> min_packet_length;
    std::vector<std::vector<std::string>> targets; // node paths after the source
    std::map<std::string, std::string> extras;
};

struct PhysicalNetwork {
    std::string name;
    AnalysisOptions options;
    std::vector<PhysicalNode> nodes;
    std::vector<PhysicalLink> links;
    std::vector<PhysicalFlow> flows;
    // Network-level defaults.
    std::optional<double> default_service_latency;
    std::optional<double> default_service_rate;
    std::optional<ConvexCurve> default_service_curve;
    std::optional<double> default_capacity;
    std::optional<double> default_min_packet;
    std::optional<double> default_max_packet;
    std::map<std::string, std::string> extras;

    const PhysicalNode* find_node(const std::string& name) const;
    const PhysicalLink* find_link(const std::string& from, const std::string& to) const;

    void validate() const;
};

// Directed graph over server names induced by flow paths.
struct InducedGraph {
    std::vector<std::string> nodes;                        // network server order
    std::map<std::string, std::vector<std::string>> edges; // successors, first-seen order

    bool has_cycle() const;
    // Kahn topological order (stable w.r.t. `nodes`); empty when cyclic.
    std::vector<std::string> topological_order() const;
    // Some cycle as a node sequence (first node repeated at the end); empty when acyclic.
    std::vector<std::string> find_cycle() const;
};

InducedGraph induced_graph(const OutputPortNetwork& net);

// Aggregated long-run arrival rate at each server divided by its service rate.
std::map<std::string, double> link_utilization(const OutputPortNetwork& net);

// Servers whose utilization reaches or exceeds 1 (analysis requires < 1).
std::vector<std::string> check_stability(const OutputPortNetwork& net);

} // namespace tsnb
