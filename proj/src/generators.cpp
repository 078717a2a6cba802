#include "tsnbound/generators.hpp"

#include <algorithm>
#include <set>

namespace tsnb {

ParamRange::ParamRange(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo <= hi)) throw DomainError("parameter range must satisfy low <= high");
    if (lo < 0.0) throw DomainError("parameter range must be >= 0");
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SplitMix64::next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
    return n <= 1 ? 0 : next() % n;
}

double SplitMix64::sample(const ParamRange& r) {
    return r.fixed() ? r.lo : r.lo + next_double() * (r.hi - r.lo);
}

namespace {

void require_fixed(const GenParams& p, const char* topology) {
    bool fixed = p.burst.fixed() && p.arrival_rate.fixed() && p.max_packet_length.fixed() &&
                 p.latency.fixed() && p.service_rate.fixed() &&
                 (!p.capacity || p.capacity->fixed());
    if (!fixed) {
        throw DomainError(std::string(topology) + " networks take fixed parameter values, not ranges");
    }
}

Server make_server(std::string name, double rate, double latency, const std::optional<double>& cap) {
    Server s;
    s.name = std::move(name);
    s.service = ConvexCurve(rate, latency);
    s.capacity = cap;
    return s;
}

Flow make_flow(std::string name, std::vector<std::string> path, double rate, double burst,
               double max_packet) {
    Flow f;
    f.name = std::move(name);
    f.path = std::move(path);
    f.arrival = ConcaveCurve(rate, burst);
    f.max_packet_length = max_packet;
    f.min_packet_length = 0.0;
    return f;
}

} // namespace

OutputPortNetwork generate_interleave(int size, const GenParams& p) {
    if (size < 2) throw DomainError("interleave tandem needs at least 2 servers");
    require_fixed(p, "interleave tandem");

    OutputPortNetwork net;
    net.name = "interleave_" + std::to_string(size);
    std::optional<double> cap = p.capacity ? std::optional<double>(p.capacity->lo) : std::nullopt;
    for (int i = 0; i < size; ++i) {
        net.servers.push_back(make_server("s" + std::to_string(i), p.service_rate.lo, p.latency.lo, cap));
    }

    std::vector<std::string> full;
    for (int i = 0; i < size; ++i) full.push_back("s" + std::to_string(i));
    net.flows.push_back(make_flow("f0", full, p.arrival_rate.lo, p.burst.lo, p.max_packet_length.lo));
    for (int i = 1; i < size; ++i) {
        net.flows.push_back(make_flow("f" + std::to_string(i),
                                      {"s" + std::to_string(i - 1), "s" + std::to_string(i)},
                                      p.arrival_rate.lo, p.burst.lo, p.max_packet_length.lo));
    }
    net.validate();
    return net;
}

OutputPortNetwork generate_ring(int size, const GenParams& p) {
    if (size < 2) throw DomainError("ring needs at least 2 servers");
    require_fixed(p, "ring");

    OutputPortNetwork net;
    net.name = "ring_" + std::to_string(size);
    std::optional<double> cap = p.capacity ? std::optional<double>(p.capacity->lo) : std::nullopt;
    for (int i = 0; i < size; ++i) {
        net.servers.push_back(make_server("s" + std::to_string(i), p.service_rate.lo, p.latency.lo, cap));
    }
    for (int i = 0; i < size; ++i) {
        std::vector<std::string> path;
        for (int k = 0; k < size; ++k) path.push_back("s" + std::to_string((i + k) % size));
        net.flows.push_back(make_flow("f" + std::to_string(i), std::move(path), p.arrival_rate.lo,
                                      p.burst.lo, p.max_packet_length.lo));
    }
    net.validate();
    return net;
}

OutputPortNetwork generate_mesh(int size, const GenParams& p) {
    if (size < 3 || size % 2 == 0) throw DomainError("mesh needs an odd server count >= 3");
    require_fixed(p, "mesh");

    OutputPortNetwork net;
    net.name = "mesh_" + std::to_string(size);
    std::optional<double> cap = p.capacity ? std::optional<double>(p.capacity->lo) : std::nullopt;
    for (int i = 0; i < size; ++i) {
        double rate = i == size - 1 ? 2.0 * p.service_rate.lo : p.service_rate.lo;
        net.servers.push_back(make_server("s" + std::to_string(i), rate, p.latency.lo, cap));
    }

    // One flow per combination: bit k of the flow index picks the server of
    // pair k; every flow ends at the joint final server.
    int pairs = (size - 1) / 2;
    int count = 1 << pairs;
    for (int j = 0; j < count; ++j) {
        std::vector<std::string> path;
        for (int k = 0; k < pairs; ++k) {
            path.push_back("s" + std::to_string(2 * k + ((j >> k) & 1)));
        }
        path.push_back("s" + std::to_string(size - 1));
        net.flows.push_back(make_flow("f" + std::to_string(j), std::move(path), p.arrival_rate.lo,
                                      p.burst.lo, p.max_packet_length.lo));
    }
    net.validate();
    return net;
}

OutputPortNetwork generate_fixed_topology(int num_flows, const ConnectionMap& connections,
                                          const GenParams& p) {
    if (num_flows < 1) throw DomainError("fixed-topology generation needs at least one flow");
    if (connections.empty()) throw DomainError("connections map is empty");

    std::set<std::string> switches;
    for (const auto& [name, neighbours] : connections) {
        (void)neighbours;
        if (!switches.insert(name).second) {
            throw DomainError("duplicate switch '" + name + "' in connections");
        }
    }
    for (const auto& [name, neighbours] : connections) {
        for (const auto& n : neighbours) {
            if (!switches.count(n)) {
                throw DomainError("switch '" + n + "' is listed as a neighbour of '" + name +
                                  "' but has no entry of its own");
            }
        }
    }

    SplitMix64 rng(p.seed);
    OutputPortNetwork net;
    net.name = "fixed_" + std::to_string(num_flows);

    for (const auto& [name, neighbours] : connections) {
        (void)neighbours;
        std::optional<double> cap;
        if (p.capacity) cap = rng.sample(*p.capacity);
        net.servers.push_back(
            make_server(name, rng.sample(p.service_rate), rng.sample(p.latency), cap));
    }

    auto neighbours_of = [&](const std::string& name) -> const std::vector<std::string>& {
        for (const auto& [key, value] : connections) {
            if (key == name) return value;
        }
        throw DomainError("unknown switch '" + name + "'");
    };

    for (int i = 0; i < num_flows; ++i) {
        std::vector<std::string> path;
        std::set<std::string> visited;
        path.push_back(connections[rng.below(connections.size())].first);
        visited.insert(path.back());
        while (true) {
            std::vector<std::string> candidates;
            for (const auto& n : neighbours_of(path.back())) {
                if (!visited.count(n)) candidates.push_back(n);
            }
            if (candidates.empty()) break;
            const std::string& next = candidates[rng.below(candidates.size())];
            path.push_back(next);
            visited.insert(next);
            if (rng.next_double() < 0.5) break;
        }
        net.flows.push_back(make_flow("f" + std::to_string(i), std::move(path),
                                      rng.sample(p.arrival_rate), rng.sample(p.burst),
                                      rng.sample(p.max_packet_length)));
    }
    net.validate();
    return net;
}

} // namespace tsnb
