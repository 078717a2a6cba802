#include "tsnbound/convert.hpp"

#include <algorithm>
#include <map>

namespace tsnb {

namespace {

std::string escape_hyphens(const std::string& s) {
    std::string out;
    for (char c : s) {
        out += c;
        if (c == '-') out += '-';
    }
    return out;
}

} // namespace

std::string output_port_name(const std::string& node, const std::string& port) {
    return escape_hyphens(node) + "-" + escape_hyphens(port);
}

OutputPortNetwork physical_to_output_port(const PhysicalNetwork& phys,
                                          std::vector<std::string>* warnings) {
    phys.validate();

    OutputPortNetwork out;
    out.name = phys.name;
    out.options = phys.options;

    auto resolved_service = [&](const PhysicalLink& link) -> std::optional<ConvexCurve> {
        const PhysicalNode* node = phys.find_node(link.from);
        auto rate = link.service_rate ? link.service_rate
                    : (node && node->service_rate) ? node->service_rate
                                                   : phys.default_service_rate;
        if (rate) {
            auto latency = link.service_latency ? link.service_latency
                           : (node && node->service_latency) ? node->service_latency
                                                             : phys.default_service_latency;
            return ConvexCurve(*rate, latency.value_or(0.0));
        }
        if (link.service_curve) return link.service_curve;
        if (node && node->service_curve) return node->service_curve;
        return phys.default_service_curve;
    };
    auto resolved_capacity = [&](const PhysicalLink& link) -> std::optional<double> {
        if (link.capacity) return link.capacity;
        if (const PhysicalNode* node = phys.find_node(link.from); node && node->capacity) {
            return node->capacity;
        }
        return phys.default_capacity;
    };

    auto ensure_server = [&](const PhysicalLink& link, const ConvexCurve& service) {
        std::string name = output_port_name(link.from, link.from_port);
        if (!out.has_server(name)) {
            out.servers.push_back({name, service, resolved_capacity(link), {}});
        }
        return name;
    };

    for (const auto& flow : phys.flows) {
        bool multicast = flow.targets.size() > 1;
        for (std::size_t k = 0; k < flow.targets.size(); ++k) {
            Flow f;
            f.name = multicast ? flow.name + "_" + std::to_string(k) : flow.name;
            f.arrival = flow.arrival;
            f.max_packet_length = flow.max_packet_length
                                      .value_or(phys.default_max_packet.value_or(0.0));
            f.min_packet_length = flow.min_packet_length
                                      .value_or(phys.default_min_packet.value_or(0.0));
            if (f.max_packet_length < f.min_packet_length) {
                f.max_packet_length = f.min_packet_length;
            }

            std::string prev = flow.source;
            for (const auto& node : flow.targets[k]) {
                const PhysicalLink* link = phys.find_link(prev, node);
                if (auto service = resolved_service(*link)) {
                    f.path.push_back(ensure_server(*link, *service));
                }
                prev = node;
            }
            if (f.path.empty()) {
                if (warnings) {
                    warnings->push_back("flow '" + f.name +
                                        "' traverses only dummy ports; dropped from analysis");
                }
                continue;
            }
            out.flows.push_back(std::move(f));
        }
    }

    out.validate();
    return out;
}

PhysicalNetwork output_port_to_physical(const OutputPortNetwork& net) {
    net.validate();

    PhysicalNetwork phys;
    phys.name = net.name;
    phys.options = net.options;

    // One switch per server, its single output port "o0" feeding a hub
    // station. The switch node carries the service, the switch->hub link the
    // capacity; everything downstream of the hub is a dummy link.
    auto hub_name = [](const std::string& server) { return "hub:" + server; };
    std::map<std::string, int> hub_out_port;

    for (const auto& s : net.servers) {
        PhysicalNode sw;
        sw.name = s.name;
        sw.is_switch = true;
        sw.service_curve = s.service;
        phys.nodes.push_back(std::move(sw));

        PhysicalNode hub;
        hub.name = hub_name(s.name);
        phys.nodes.push_back(std::move(hub));

        PhysicalLink out_link;
        out_link.name = "lk:" + s.name + ".o0-" + hub_name(s.name);
        out_link.from = s.name;
        out_link.from_port = "o0";
        out_link.to = hub_name(s.name);
        out_link.to_port = "i0";
        out_link.capacity = s.capacity;
        phys.links.push_back(std::move(out_link));
    }

    std::map<std::string, int> in_port;
    auto next_in_port = [&](const std::string& node) {
        return "i" + std::to_string(++in_port[node]);
    };
    auto link_from_hub = [&](const std::string& server, const std::string& to) {
        std::string hub = hub_name(server);
        for (const auto& l : phys.links) {
            if (l.from == hub && l.to == to) return;
        }
        std::string port = "o" + std::to_string(hub_out_port[hub]++);
        PhysicalLink l;
        l.name = "lk:" + hub + "." + port + "-" + to;
        l.from = hub;
        l.from_port = port;
        l.to = to;
        l.to_port = next_in_port(to);
        phys.links.push_back(std::move(l));
    };

    for (const auto& f : net.flows) {
        for (std::size_t i = 0; i + 1 < f.path.size(); ++i) {
            link_from_hub(f.path[i], f.path[i + 1]);
        }
    }

    for (const auto& f : net.flows) {
        std::string src = "src-" + f.name;
        std::string sink = "sink-" + f.name;
        PhysicalNode src_node;
        src_node.name = src;
        phys.nodes.push_back(std::move(src_node));
        PhysicalNode sink_node;
        sink_node.name = sink;
        phys.nodes.push_back(std::move(sink_node));

        PhysicalLink src_link;
        src_link.name = "lk:" + src + "-" + f.path.front();
        src_link.from = src;
        src_link.from_port = "o0";
        src_link.to = f.path.front();
        src_link.to_port = next_in_port(f.path.front());
        phys.links.push_back(std::move(src_link));
        link_from_hub(f.path.back(), sink);

        PhysicalFlow pf;
        pf.name = f.name;
        pf.source = src;
        pf.arrival = f.arrival;
        pf.max_packet_length = f.max_packet_length;
        pf.min_packet_length = f.min_packet_length;
        std::vector<std::string> target;
        for (const auto& hop : f.path) {
            target.push_back(hop);
            target.push_back(hub_name(hop));
        }
        target.push_back(sink);
        pf.targets.push_back(std::move(target));
        phys.flows.push_back(std::move(pf));
    }

    phys.validate();
    return phys;
}

} // namespace tsnb
