#include "tsnbound/network.hpp"

#include <algorithm>
#include <set>

namespace tsnb {

const Server& OutputPortNetwork::server(const std::string& name) const {
    for (const auto& s : servers) {
        if (s.name == name) return s;
    }
    throw DomainError("unknown server '" + name + "'");
}

bool OutputPortNetwork::has_server(const std::string& name) const {
    return std::any_of(servers.begin(), servers.end(),
                       [&](const Server& s) { return s.name == name; });
}

void OutputPortNetwork::validate() const {
    std::set<std::string> server_names;
    for (const auto& s : servers) {
        if (!server_names.insert(s.name).second) {
            throw DomainError("duplicate server name '" + s.name + "'");
        }
    }
    std::set<std::string> flow_names;
    for (const auto& f : flows) {
        if (!flow_names.insert(f.name).second) {
            throw DomainError("duplicate flow name '" + f.name + "'");
        }
        if (f.path.empty()) {
            throw DomainError("flow '" + f.name + "' has an empty path");
        }
        std::set<std::string> seen;
        for (const auto& hop : f.path) {
            if (!server_names.count(hop)) {
                throw DomainError("flow '" + f.name + "' references undefined server '" + hop + "'");
            }
            if (!seen.insert(hop).second) {
                throw DomainError("flow '" + f.name + "' repeats server '" + hop + "'");
            }
        }
        if (f.max_packet_length < f.min_packet_length || f.min_packet_length < 0.0) {
            throw DomainError("flow '" + f.name + "' has inconsistent packet lengths");
        }
    }
}

const PhysicalNode* PhysicalNetwork::find_node(const std::string& name) const {
    for (const auto& n : nodes) {
        if (n.name == name) return &n;
    }
    return nullptr;
}

const PhysicalLink* PhysicalNetwork::find_link(const std::string& from, const std::string& to) const {
    for (const auto& l : links) {
        if (l.from == from && l.to == to) return &l;
    }
    return nullptr;
}

void PhysicalNetwork::validate() const {
    std::set<std::string> node_names;
    for (const auto& n : nodes) {
        if (!node_names.insert(n.name).second) {
            throw DomainError("duplicate node name '" + n.name + "'");
        }
    }
    std::set<std::pair<std::string, std::string>> out_ports;
    for (const auto& l : links) {
        if (!node_names.count(l.from)) {
            throw DomainError("link '" + l.name + "' starts at undefined node '" + l.from + "'");
        }
        if (!node_names.count(l.to)) {
            throw DomainError("link '" + l.name + "' ends at undefined node '" + l.to + "'");
        }
        if (!out_ports.insert({l.from, l.from_port}).second) {
            throw DomainError("output port (" + l.from + ", " + l.from_port +
                              ") is used by more than one link");
        }
    }
    for (const auto& f : flows) {
        if (!node_names.count(f.source)) {
            throw DomainError("flow '" + f.name + "' has undefined source '" + f.source + "'");
        }
        if (f.targets.empty()) {
            throw DomainError("flow '" + f.name + "' has no target path");
        }
        for (const auto& target : f.targets) {
            std::string prev = f.source;
            for (const auto& node : target) {
                if (!node_names.count(node)) {
                    throw DomainError("flow '" + f.name + "' visits undefined node '" + node + "'");
                }
                if (!find_link(prev, node)) {
                    throw DomainError("flow '" + f.name + "' hops from '" + prev + "' to '" +
                                      node + "' without a connecting link");
                }
                prev = node;
            }
        }
    }
}

InducedGraph induced_graph(const OutputPortNetwork& net) {
    InducedGraph g;
    for (const auto& s : net.servers) {
        g.nodes.push_back(s.name);
        g.edges[s.name];
    }
    for (const auto& f : net.flows) {
        for (std::size_t i = 0; i + 1 < f.path.size(); ++i) {
            auto& succ = g.edges[f.path[i]];
            if (std::find(succ.begin(), succ.end(), f.path[i + 1]) == succ.end()) {
                succ.push_back(f.path[i + 1]);
            }
        }
    }
    return g;
}

bool InducedGraph::has_cycle() const {
    return topological_order().empty() && !nodes.empty();
}

std::vector<std::string> InducedGraph::topological_order() const {
    std::map<std::string, int> indegree;
    for (const auto& n : nodes) indegree[n] = 0;
    for (const auto& [from, succ] : edges) {
        (void)from;
        for (const auto& to : succ) ++indegree[to];
    }
    std::vector<std::string> order;
    std::vector<std::string> ready;
    for (const auto& n : nodes) {
        if (indegree[n] == 0) ready.push_back(n);
    }
    while (!ready.empty()) {
        std::string n = ready.front();
        ready.erase(ready.begin());
        order.push_back(n);
        auto it = edges.find(n);
        if (it == edges.end()) continue;
        for (const auto& to : it->second) {
            if (--indegree[to] == 0) ready.push_back(to);
        }
    }
    if (order.size() != nodes.size()) return {};
    return order;
}

std::vector<std::string> InducedGraph::find_cycle() const {
    // Iterative DFS with colors; returns the first back-edge cycle found.
    std::map<std::string, int> color; // 0 white, 1 grey, 2 black
    std::map<std::string, std::string> parent;
    for (const auto& start : nodes) {
        if (color[start] != 0) continue;
        std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
        color[start] = 1;
        while (!stack.empty()) {
            const std::string node = stack.back().first;
            const auto& succ = edges.at(node);
            if (stack.back().second < succ.size()) {
                const std::string next = succ[stack.back().second++];
                if (color[next] == 0) {
                    color[next] = 1;
                    parent[next] = node;
                    stack.push_back({next, 0});
                } else if (color[next] == 1) {
                    std::vector<std::string> cycle{next};
                    for (std::string cur = node; cur != next; cur = parent[cur]) {
                        cycle.push_back(cur);
                    }
                    std::reverse(cycle.begin() + 1, cycle.end());
                    cycle.push_back(next);
                    return cycle;
                }
            } else {
                color[node] = 2;
                stack.pop_back();
            }
        }
    }
    return {};
}

std::map<std::string, double> link_utilization(const OutputPortNetwork& net) {
    std::map<std::string, double> util;
    for (const auto& s : net.servers) util[s.name] = 0.0;
    for (const auto& f : net.flows) {
        for (const auto& hop : f.path) util[hop] += f.arrival.long_run_rate();
    }
    for (const auto& s : net.servers) util[s.name] /= s.service.top_rate();
    return util;
}

std::vector<std::string> check_stability(const OutputPortNetwork& net) {
    std::vector<std::string> violators;
    for (const auto& [name, u] : link_utilization(net)) {
        if (u >= 1.0) violators.push_back(name);
    }
    return violators;
}

} // namespace tsnb
