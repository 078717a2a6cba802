#include <algorithm>
#include <set>

#include "tsnbound/convert.hpp"
#include "tsnbound/formats.hpp"
#include "tsnbound/units.hpp"
#include "xml_doc.hpp"

namespace tsnb {

namespace {

AnalysisOptions parse_technology(const std::string& text) {
    AnalysisOptions opts;
    bool mux_seen = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t next = text.find('+', pos);
        std::string token = text.substr(pos, next == std::string::npos ? next : next - pos);
        pos = next == std::string::npos ? text.size() + 1 : next + 1;
        if (token.empty()) continue;
        if (token == "FIFO" || token == "ARBITRARY") {
            if (mux_seen) throw ParseError("technology lists more than one multiplexing mode");
            mux_seen = true;
            opts.multiplexing = token == "FIFO" ? Multiplexing::Fifo : Multiplexing::Arbitrary;
        } else if (token == "IS") {
            opts.input_shaping = true;
        } else if (token == "PK") {
            opts.packetizer = true;
        } else if (token == "CEIL") {
            opts.ceil_precision = kDefaultCeilPrecision;
        } else {
            throw ParseError("unknown technology token '" + token + "'");
        }
    }
    return opts;
}

std::string technology_string(const AnalysisOptions& opts) {
    std::string out = opts.multiplexing == Multiplexing::Fifo ? "FIFO" : "ARBITRARY";
    if (opts.input_shaping) out += "+IS";
    if (opts.packetizer) out += "+PK";
    if (opts.ceil_precision) out += "+CEIL";
    return out;
}

// Walks the known attributes of an element; leftovers are rejected in strict
// mode and kept as extras in lenient mode.
class AttrReader {
public:
    AttrReader(const xml::Element& el, ParseMode mode) : el_(el), mode_(mode) {}

    const std::string* get(std::string_view key) {
        consumed_.insert(std::string(key));
        return el_.attr(key);
    }

    std::string require(std::string_view key) {
        const std::string* v = get(key);
        if (!v) {
            throw ParseError("<" + el_.name + "> is missing attribute '" + std::string(key) + "'");
        }
        return *v;
    }

    std::optional<double> quantity(std::string_view key, Dimension dim) {
        const std::string* v = get(key);
        if (!v) return std::nullopt;
        return parse_quantity(*v, dim);
    }

    void finish(std::map<std::string, std::string>& extras) {
        for (const auto& [key, value] : el_.attributes) {
            if (consumed_.count(key)) continue;
            if (mode_ == ParseMode::Strict) {
                throw ParseError("unknown attribute '" + key + "' on <" + el_.name + ">");
            }
            extras[key] = value;
        }
    }

private:
    const xml::Element& el_;
    ParseMode mode_;
    std::set<std::string> consumed_;
};

// Single-piece reductions for curves the XML vocabulary cannot hold.
RateLatency reduce_service(const ConvexCurve& curve, const std::string& where,
                           std::vector<std::string>* warnings) {
    if (curve.pieces().size() > 1 && warnings) {
        warnings->push_back(where + ": multi-piece service curve reduced to its first piece "
                                    "(conservative) for the XML form");
    }
    return curve.pieces().front();
}

TokenBucket reduce_arrival(const ConcaveCurve& curve, const std::string& where,
                           std::vector<std::string>* warnings) {
    if (curve.pieces().size() > 1 && warnings) {
        warnings->push_back(where + ": multi-piece arrival curve reduced to its first piece "
                                    "(conservative) for the XML form");
    }
    return curve.pieces().front();
}

std::string time_attr(double v) { return format_quantity(v, Dimension::Time, "us"); }
std::string data_attr(double v) { return format_quantity(v, Dimension::Data, "B"); }
std::string rate_attr(double v) { return format_quantity(v, Dimension::Rate, "Mbps"); }

} // namespace

PhysicalNetwork parse_xml(std::string_view text, ParseMode mode) {
    xml::Element root = xml::parse(text);
    if (root.name != "elements") {
        throw ParseError("root element must be <elements>, got <" + root.name + ">");
    }

    PhysicalNetwork net;
    bool network_seen = false;

    for (const auto& el : root.children) {
        if (el.name == "network") {
            if (network_seen) throw ParseError("more than one <network> element");
            network_seen = true;
            AttrReader attrs(el, mode);
            net.name = attrs.require("name");
            if (const std::string* tech = attrs.get("technology")) {
                net.options = parse_technology(*tech);
            }
            net.default_service_latency = attrs.quantity("service-latency", Dimension::Time);
            net.default_service_rate = attrs.quantity("service-rate", Dimension::Rate);
            net.default_capacity = attrs.quantity("transmission-capacity", Dimension::Rate);
            net.default_min_packet = attrs.quantity("minimum-packet-size", Dimension::Data);
            net.default_max_packet = attrs.quantity("maximum-packet-size", Dimension::Data);
            attrs.finish(net.extras);
        } else if (el.name == "station" || el.name == "switch") {
            PhysicalNode node;
            node.is_switch = el.name == "switch";
            AttrReader attrs(el, mode);
            node.name = attrs.require("name");
            node.service_latency = attrs.quantity("service-latency", Dimension::Time);
            node.service_rate = attrs.quantity("service-rate", Dimension::Rate);
            node.capacity = attrs.quantity("transmission-capacity", Dimension::Rate);
            attrs.finish(node.extras);
            net.nodes.push_back(std::move(node));
        } else if (el.name == "link") {
            PhysicalLink link;
            AttrReader attrs(el, mode);
            link.name = attrs.require("name");
            link.from = attrs.require("from");
            link.to = attrs.require("to");
            link.from_port = attrs.require("fromPort");
            link.to_port = attrs.require("toPort");
            link.service_latency = attrs.quantity("service-latency", Dimension::Time);
            link.service_rate = attrs.quantity("service-rate", Dimension::Rate);
            link.capacity = attrs.quantity("transmission-capacity", Dimension::Rate);
            attrs.finish(link.extras);
            net.links.push_back(std::move(link));
        } else if (el.name == "flow") {
            AttrReader attrs(el, mode);
            std::string name = attrs.require("name");
            std::string kind = attrs.require("arrival-curve");
            if (kind != "leaky-bucket") {
                throw ParseError("flow '" + name + "': unsupported arrival-curve '" + kind + "'");
            }
            double burst = parse_quantity(attrs.require("lb-burst"), Dimension::Data);
            double rate = parse_quantity(attrs.require("lb-rate"), Dimension::Rate);

            PhysicalFlow flow;
            flow.name = std::move(name);
            flow.arrival = ConcaveCurve(rate, burst);
            flow.max_packet_length = attrs.quantity("maximum-packet-size", Dimension::Data);
            flow.min_packet_length = attrs.quantity("minimum-packet-size", Dimension::Data);
            flow.source = attrs.require("source");
            attrs.finish(flow.extras);

            for (const auto& child : el.children) {
                if (child.name != "target") {
                    if (mode == ParseMode::Strict) {
                        throw ParseError("unknown element <" + child.name + "> in flow '" +
                                         flow.name + "'");
                    }
                    continue;
                }
                std::vector<std::string> path;
                for (const auto& hop : child.children) {
                    if (hop.name != "path") {
                        if (mode == ParseMode::Strict) {
                            throw ParseError("unknown element <" + hop.name + "> in target of '" +
                                             flow.name + "'");
                        }
                        continue;
                    }
                    const std::string* node = hop.attr("node");
                    if (!node) throw ParseError("<path> without node attribute in '" + flow.name + "'");
                    path.push_back(*node);
                }
                if (path.empty()) {
                    throw ParseError("flow '" + flow.name + "' has an empty target path");
                }
                flow.targets.push_back(std::move(path));
            }
            if (flow.targets.empty()) {
                throw ParseError("flow '" + flow.name + "' has no <target> element");
            }
            net.flows.push_back(std::move(flow));
        } else if (mode == ParseMode::Strict) {
            throw ParseError("unknown element <" + el.name + ">");
        }
    }

    if (!network_seen) throw ParseError("missing <network> element");
    try {
        net.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return net;
}

std::string write_xml(const PhysicalNetwork& net, std::vector<std::string>* warnings) {
    xml::Element root;
    root.name = "elements";

    xml::Element network;
    network.name = "network";
    network.set_attr("name", net.name);
    network.set_attr("technology", technology_string(net.options));
    std::optional<double> default_latency = net.default_service_latency;
    std::optional<double> default_rate = net.default_service_rate;
    if (!default_rate && net.default_service_curve) {
        RateLatency piece = reduce_service(*net.default_service_curve, "network default", warnings);
        default_latency = piece.latency;
        default_rate = piece.rate;
    }
    if (default_latency) network.set_attr("service-latency", time_attr(*default_latency));
    if (default_rate) network.set_attr("service-rate", rate_attr(*default_rate));
    if (net.default_capacity) {
        network.set_attr("transmission-capacity", rate_attr(*net.default_capacity));
    }
    if (net.default_min_packet) {
        network.set_attr("minimum-packet-size", data_attr(*net.default_min_packet));
    }
    if (net.default_max_packet) {
        network.set_attr("maximum-packet-size", data_attr(*net.default_max_packet));
    }
    for (const auto& [k, v] : net.extras) network.set_attr(k, v);
    root.children.push_back(std::move(network));

    for (const auto& node : net.nodes) {
        xml::Element el;
        el.name = node.is_switch ? "switch" : "station";
        el.set_attr("name", node.name);
        std::optional<double> latency = node.service_latency;
        std::optional<double> rate = node.service_rate;
        if (!rate && node.service_curve) {
            RateLatency piece = reduce_service(*node.service_curve, "node '" + node.name + "'", warnings);
            latency = piece.latency;
            rate = piece.rate;
        }
        if (latency) el.set_attr("service-latency", time_attr(*latency));
        if (rate) el.set_attr("service-rate", rate_attr(*rate));
        if (node.capacity) el.set_attr("transmission-capacity", rate_attr(*node.capacity));
        for (const auto& [k, v] : node.extras) el.set_attr(k, v);
        root.children.push_back(std::move(el));
    }

    for (const auto& link : net.links) {
        xml::Element el;
        el.name = "link";
        el.set_attr("name", link.name);
        el.set_attr("from", link.from);
        el.set_attr("to", link.to);
        el.set_attr("fromPort", link.from_port);
        el.set_attr("toPort", link.to_port);
        std::optional<double> latency = link.service_latency;
        std::optional<double> rate = link.service_rate;
        if (!rate && link.service_curve) {
            RateLatency piece = reduce_service(*link.service_curve, "link '" + link.name + "'", warnings);
            latency = piece.latency;
            rate = piece.rate;
        }
        if (latency) el.set_attr("service-latency", time_attr(*latency));
        if (rate) el.set_attr("service-rate", rate_attr(*rate));
        if (link.capacity) el.set_attr("transmission-capacity", rate_attr(*link.capacity));
        for (const auto& [k, v] : link.extras) el.set_attr(k, v);
        root.children.push_back(std::move(el));
    }

    for (const auto& flow : net.flows) {
        xml::Element el;
        el.name = "flow";
        el.set_attr("name", flow.name);
        el.set_attr("arrival-curve", "leaky-bucket");
        TokenBucket bucket = reduce_arrival(flow.arrival, "flow '" + flow.name + "'", warnings);
        el.set_attr("lb-burst", data_attr(bucket.burst));
        el.set_attr("lb-rate", rate_attr(bucket.rate));
        if (flow.max_packet_length) {
            el.set_attr("maximum-packet-size", data_attr(*flow.max_packet_length));
        }
        if (flow.min_packet_length) {
            el.set_attr("minimum-packet-size", data_attr(*flow.min_packet_length));
        }
        el.set_attr("source", flow.source);
        for (const auto& [k, v] : flow.extras) el.set_attr(k, v);
        for (const auto& target : flow.targets) {
            xml::Element tgt;
            tgt.name = "target";
            for (const auto& node : target) {
                xml::Element hop;
                hop.name = "path";
                hop.set_attr("node", node);
                tgt.children.push_back(std::move(hop));
            }
            el.children.push_back(std::move(tgt));
        }
        root.children.push_back(std::move(el));
    }

    return xml::write(root);
}

NetworkDocument parse_document(std::string_view text, std::optional<DocumentKind> kind,
                               ParseMode mode) {
    if (!kind) {
        std::size_t first = text.find_first_not_of(" \t\r\n");
        if (first == std::string_view::npos) throw ParseError("empty document");
        kind = text[first] == '<' ? DocumentKind::PhysicalXml : DocumentKind::OutputPortJson;
    }
    if (*kind == DocumentKind::PhysicalXml) {
        return {DocumentKind::PhysicalXml, parse_xml(text, mode)};
    }
    return {DocumentKind::OutputPortJson, parse_json(text, mode)};
}

NetworkDocument convert(const NetworkDocument& doc, DocumentKind target,
                        std::vector<std::string>* warnings) {
    if (doc.kind == target) return doc;
    if (target == DocumentKind::OutputPortJson) {
        return {target, physical_to_output_port(doc.physical(), warnings)};
    }
    return {target, output_port_to_physical(doc.output_port())};
}

std::string write_document(const NetworkDocument& doc, std::vector<std::string>* warnings) {
    if (doc.kind == DocumentKind::PhysicalXml) return write_xml(doc.physical(), warnings);
    return write_json(doc.output_port());
}

} // namespace tsnb
