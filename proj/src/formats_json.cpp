#include <cstdlib>
#include <set>

#include <json.hpp>

#include "tsnbound/formats.hpp"
#include "tsnbound/units.hpp"

namespace tsnb {

namespace {

using json = nlohmann::ordered_json;

struct UnitScope {
    std::optional<std::string> time, data, rate;

    std::optional<std::string> unit(Dimension dim) const {
        switch (dim) {
        case Dimension::Time: return time;
        case Dimension::Data: return data;
        case Dimension::Rate: return rate;
        }
        return std::nullopt;
    }
};

std::string validated_unit(const json& v, Dimension dim, const std::string& key) {
    if (!v.is_string()) throw ParseError("'" + key + "' must be a unit string");
    std::string unit = v.get<std::string>();
    if (!unit_factor(dim, unit)) {
        throw ParseError("'" + key + "' names unknown " + std::string(dimension_name(dim)) +
                         " unit '" + unit + "'");
    }
    return unit;
}

double quantity(const json& v, Dimension dim, const UnitScope& scope, const std::string& where) {
    try {
        if (v.is_string()) return parse_quantity(v.get<std::string>(), dim, scope.unit(dim));
        if (v.is_number()) return parse_quantity(v.get<double>(), dim, scope.unit(dim));
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    }
    throw ParseError(where + ": expected a number or a quantity string");
}

// Reads the local unit overrides of an object and tracks consumed keys.
class ObjectReader {
public:
    ObjectReader(const json& obj, ParseMode mode, std::string where)
        : obj_(obj), mode_(mode), where_(std::move(where)) {
        if (!obj.is_object()) throw ParseError(where_ + " must be a JSON object");
    }

    const json* get(const std::string& key) {
        consumed_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    const json& require(const std::string& key) {
        const json* v = get(key);
        if (!v) throw ParseError(where_ + " is missing '" + key + "'");
        return *v;
    }

    UnitScope units(const UnitScope& outer) {
        UnitScope scope = outer;
        if (const json* v = get("time_unit")) scope.time = validated_unit(*v, Dimension::Time, "time_unit");
        if (const json* v = get("data_unit")) scope.data = validated_unit(*v, Dimension::Data, "data_unit");
        if (const json* v = get("rate_unit")) scope.rate = validated_unit(*v, Dimension::Rate, "rate_unit");
        return scope;
    }

    std::optional<double> quantity_opt(const std::string& key, Dimension dim, const UnitScope& scope) {
        const json* v = get(key);
        if (!v) return std::nullopt;
        return quantity(*v, dim, scope, where_ + "." + key);
    }

    void finish(std::map<std::string, std::string>& extras) {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (consumed_.count(it.key())) continue;
            if (mode_ == ParseMode::Strict) {
                throw ParseError(where_ + ": unknown field '" + it.key() + "'");
            }
            extras[it.key()] = it.value().dump();
        }
    }

    const std::string& where() const { return where_; }

private:
    const json& obj_;
    ParseMode mode_;
    std::string where_;
    std::set<std::string> consumed_;
};

ConvexCurve parse_service_curve(const json& obj, const UnitScope& scope, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + " must be an object");
    auto lat_it = obj.find("latencies");
    auto rate_it = obj.find("rates");
    if (lat_it == obj.end() || rate_it == obj.end() || !lat_it->is_array() || !rate_it->is_array()) {
        throw ParseError(where + " needs 'latencies' and 'rates' arrays");
    }
    if (lat_it->size() != rate_it->size() || lat_it->empty()) {
        throw ParseError(where + ": 'latencies' and 'rates' must pair up (nonempty, same length)");
    }
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (key != "latencies" && key != "rates") {
            throw ParseError(where + ": unknown field '" + key + "'");
        }
    }
    std::vector<RateLatency> pieces;
    for (std::size_t i = 0; i < lat_it->size(); ++i) {
        pieces.push_back({quantity(rate_it->at(i), Dimension::Rate, scope, where + ".rates"),
                          quantity(lat_it->at(i), Dimension::Time, scope, where + ".latencies")});
    }
    return ConvexCurve(std::move(pieces));
}

ConcaveCurve parse_arrival_curve(const json& obj, const UnitScope& scope, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + " must be an object");
    auto burst_it = obj.find("bursts");
    auto rate_it = obj.find("rates");
    if (burst_it == obj.end() || rate_it == obj.end() || !burst_it->is_array() || !rate_it->is_array()) {
        throw ParseError(where + " needs 'bursts' and 'rates' arrays");
    }
    if (burst_it->size() != rate_it->size() || burst_it->empty()) {
        throw ParseError(where + ": 'bursts' and 'rates' must pair up (nonempty, same length)");
    }
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (key != "bursts" && key != "rates") {
            throw ParseError(where + ": unknown field '" + key + "'");
        }
    }
    std::vector<TokenBucket> pieces;
    for (std::size_t i = 0; i < burst_it->size(); ++i) {
        pieces.push_back({quantity(rate_it->at(i), Dimension::Rate, scope, where + ".rates"),
                          quantity(burst_it->at(i), Dimension::Data, scope, where + ".bursts")});
    }
    return ConcaveCurve(std::move(pieces));
}

// Emits a canonical value as a bare number when its wire form re-normalizes
// exactly under the scoped unit, otherwise as a string in an exact unit.
json emit_quantity(double value, Dimension dim, const std::string& scoped_unit) {
    double factor = *unit_factor(dim, scoped_unit);
    json as_number = value / factor;
    try {
        if (parse_quantity(as_number.dump(), dim, scoped_unit) == value) return as_number;
    } catch (const ParseError&) {
    }
    return json(format_quantity(value, dim, scoped_unit));
}

} // namespace

OutputPortNetwork parse_json(std::string_view text, ParseMode mode) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("json: ") + e.what());
    }

    OutputPortNetwork net;
    ObjectReader top(doc, mode, "document");

    ObjectReader network(top.require("network"), mode, "network");
    const json& name = network.require("name");
    if (!name.is_string()) throw ParseError("network name must be a string");
    net.name = name.get<std::string>();

    UnitScope net_scope = network.units({});

    if (const json* v = network.get("packetizer")) {
        if (!v->is_boolean()) throw ParseError("'packetizer' must be a boolean");
        net.options.packetizer = v->get<bool>();
    }
    if (const json* v = network.get("multiplexing")) {
        std::string mux = v->is_string() ? v->get<std::string>() : "";
        if (mux == "FIFO") net.options.multiplexing = Multiplexing::Fifo;
        else if (mux == "ARBITRARY") net.options.multiplexing = Multiplexing::Arbitrary;
        else throw ParseError("'multiplexing' must be \"FIFO\" or \"ARBITRARY\"");
    }
    if (const json* v = network.get("analysis_option")) {
        if (!v->is_array()) throw ParseError("'analysis_option' must be an array");
        for (const auto& tok : *v) {
            std::string option = tok.is_string() ? tok.get<std::string>() : "";
            if (option == "IS") net.options.input_shaping = true;
            else if (option == "PK") net.options.packetizer = true;
            else if (option == "CEIL") net.options.ceil_precision = kDefaultCeilPrecision;
            else throw ParseError("unknown analysis_option token '" + option + "'");
        }
    }

    auto default_min_packet = network.quantity_opt("min_packet_length", Dimension::Data, net_scope);
    auto default_max_packet = network.quantity_opt("max_packet_length", Dimension::Data, net_scope);
    auto default_capacity = network.quantity_opt("capacity", Dimension::Rate, net_scope);

    std::optional<ConvexCurve> default_service;
    if (const json* v = network.get("service_curve")) {
        default_service = parse_service_curve(*v, net_scope, "network.service_curve");
    }
    std::optional<ConcaveCurve> default_arrival;
    if (const json* v = network.get("arrival_curve")) {
        default_arrival = parse_arrival_curve(*v, net_scope, "network.arrival_curve");
    }
    network.finish(net.extras);

    if (const json* servers = top.get("servers")) {
        if (!servers->is_array()) throw ParseError("'servers' must be an array");
        for (const auto& entry : *servers) {
            ObjectReader obj(entry, mode, "server");
            Server server;
            const json& sname = obj.require("name");
            if (!sname.is_string()) throw ParseError("server name must be a string");
            server.name = sname.get<std::string>();
            UnitScope scope = obj.units(net_scope);
            if (const json* v = obj.get("service_curve")) {
                server.service =
                    parse_service_curve(*v, scope, "server '" + server.name + "'.service_curve");
            } else if (default_service) {
                server.service = *default_service;
            } else {
                throw ParseError("server '" + server.name +
                                 "' has no service curve and the network defines no default");
            }
            server.capacity = obj.quantity_opt("capacity", Dimension::Rate, scope);
            if (!server.capacity) server.capacity = default_capacity;
            obj.finish(server.extras);
            net.servers.push_back(std::move(server));
        }
    }

    if (const json* flows = top.get("flows")) {
        if (!flows->is_array()) throw ParseError("'flows' must be an array");
        for (const auto& entry : *flows) {
            ObjectReader obj(entry, mode, "flow");
            Flow flow;
            const json& fname = obj.require("name");
            if (!fname.is_string()) throw ParseError("flow name must be a string");
            flow.name = fname.get<std::string>();
            UnitScope scope = obj.units(net_scope);

            const json& path = obj.require("path");
            if (!path.is_array() || path.empty()) {
                throw ParseError("flow '" + flow.name + "' needs a nonempty 'path' array");
            }
            for (const auto& hop : path) {
                if (!hop.is_string()) throw ParseError("flow '" + flow.name + "': path entries must be strings");
                flow.path.push_back(hop.get<std::string>());
            }

            if (const json* v = obj.get("arrival_curve")) {
                flow.arrival =
                    parse_arrival_curve(*v, scope, "flow '" + flow.name + "'.arrival_curve");
            } else if (default_arrival) {
                flow.arrival = *default_arrival;
            } else {
                throw ParseError("flow '" + flow.name +
                                 "' has no arrival curve and the network defines no default");
            }

            auto min_packet = obj.quantity_opt("min_packet_length", Dimension::Data, scope);
            auto max_packet = obj.quantity_opt("max_packet_length", Dimension::Data, scope);
            flow.min_packet_length = min_packet.value_or(default_min_packet.value_or(0.0));
            flow.max_packet_length =
                max_packet.value_or(default_max_packet.value_or(flow.min_packet_length));
            obj.finish(flow.extras);
            net.flows.push_back(std::move(flow));
        }
    }

    top.finish(net.extras);
    try {
        net.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return net;
}

std::string write_json(const OutputPortNetwork& net) {
    const std::string time_unit = "us";
    const std::string data_unit = "B";
    const std::string rate_unit = "Mbps";

    json doc;
    json network;
    network["name"] = net.name;
    network["packetizer"] = net.options.packetizer;
    network["multiplexing"] = net.options.multiplexing == Multiplexing::Fifo ? "FIFO" : "ARBITRARY";
    json options = json::array();
    if (net.options.input_shaping) options.push_back("IS");
    if (net.options.ceil_precision) options.push_back("CEIL");
    network["analysis_option"] = std::move(options);
    network["time_unit"] = time_unit;
    network["data_unit"] = data_unit;
    network["rate_unit"] = rate_unit;
    for (const auto& [k, v] : net.extras) network[k] = json::parse(v);
    doc["network"] = std::move(network);

    json servers = json::array();
    for (const auto& s : net.servers) {
        json entry;
        entry["name"] = s.name;
        json latencies = json::array();
        json rates = json::array();
        for (const auto& piece : s.service.pieces()) {
            latencies.push_back(emit_quantity(piece.latency, Dimension::Time, time_unit));
            rates.push_back(emit_quantity(piece.rate, Dimension::Rate, rate_unit));
        }
        entry["service_curve"] = {{"latencies", std::move(latencies)}, {"rates", std::move(rates)}};
        if (s.capacity) entry["capacity"] = emit_quantity(*s.capacity, Dimension::Rate, rate_unit);
        for (const auto& [k, v] : s.extras) entry[k] = json::parse(v);
        servers.push_back(std::move(entry));
    }
    doc["servers"] = std::move(servers);

    json flows = json::array();
    for (const auto& f : net.flows) {
        json entry;
        entry["name"] = f.name;
        entry["path"] = f.path;
        json bursts = json::array();
        json rates = json::array();
        for (const auto& piece : f.arrival.pieces()) {
            bursts.push_back(emit_quantity(piece.burst, Dimension::Data, data_unit));
            rates.push_back(emit_quantity(piece.rate, Dimension::Rate, rate_unit));
        }
        entry["arrival_curve"] = {{"bursts", std::move(bursts)}, {"rates", std::move(rates)}};
        entry["max_packet_length"] = emit_quantity(f.max_packet_length, Dimension::Data, data_unit);
        entry["min_packet_length"] = emit_quantity(f.min_packet_length, Dimension::Data, data_unit);
        for (const auto& [k, v] : f.extras) entry[k] = json::parse(v);
        flows.push_back(std::move(entry));
    }
    doc["flows"] = std::move(flows);

    return doc.dump(4) + "\n";
}

} // namespace tsnb
