#include "tsnbound/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "tsnbound/units.hpp"

namespace tsnb {

namespace {

using json = nlohmann::ordered_json;

constexpr double kMicro = 1e-6;
constexpr double kMilli = 1e-3;

struct DisplayUnit {
    const char* name;
    double factor;
};

constexpr DisplayUnit kTimeLadder[] = {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}};

// Largest unit that shows the smallest positive value as >= 1; ns when
// everything is zero or smaller than a nanosecond.
DisplayUnit pick_unit(const std::vector<double>& values) {
    double smallest = std::numeric_limits<double>::infinity();
    for (double v : values) {
        if (v > 0.0) smallest = std::min(smallest, v);
    }
    if (!std::isfinite(smallest)) return kTimeLadder[3];
    for (const auto& unit : kTimeLadder) {
        if (smallest / unit.factor >= 1.0) return unit;
    }
    return kTimeLadder[3];
}

std::string round3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

void delay_table(std::string& out, const ResultSet& rs, const std::string& row_header,
                 const std::vector<std::string>& rows,
                 const std::map<std::string, double> NetworkResult::* field) {
    std::vector<double> all;
    for (const auto& r : rs.results()) {
        for (const auto& [key, v] : r.*field) {
            (void)key;
            all.push_back(v);
        }
    }
    DisplayUnit unit = pick_unit(all);
    out += "Unit: " + std::string(unit.name) + "\n\n";

    out += "| " + row_header + " |";
    for (const auto& r : rs.results()) out += " " + r.method_label + " |";
    out += " min |\n";
    out += "| --- |";
    for (std::size_t i = 0; i < rs.results().size(); ++i) out += " --- |";
    out += " --- |\n";

    for (const auto& row : rows) {
        out += "| " + row + " |";
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : rs.results()) {
            auto it = (r.*field).find(row);
            if (it == (r.*field).end()) {
                out += " - |";
                continue;
            }
            best = std::min(best, it->second);
            out += " " + round3(it->second / unit.factor) + " |";
        }
        out += std::isfinite(best) ? " " + round3(best / unit.factor) + " |\n" : " - |\n";
    }
    out += "\n";
}

} // namespace

NetworkSnapshot snapshot(const OutputPortNetwork& net) {
    NetworkSnapshot snap;
    snap.name = net.name;
    snap.graph = induced_graph(net);
    for (const auto& f : net.flows) snap.flow_paths.emplace_back(f.name, f.path);
    snap.utilization = link_utilization(net);
    return snap;
}

void ResultSet::add(NetworkResult result) {
    for (auto& existing : results_) {
        if (existing.method_label == result.method_label) {
            existing = std::move(result);
            return;
        }
    }
    results_.push_back(std::move(result));
}

std::string export_json(const ResultSet& rs) {
    if (rs.results().empty()) throw DomainError("no analysis results to export");

    json doc;
    doc["name"] = rs.network().name;

    json flow_delay = json::object();
    for (const auto& [flow, path] : rs.network().flow_paths) {
        (void)path;
        json per_method = json::object();
        for (const auto& r : rs.results()) {
            auto it = r.flow_e2e_delay.find(flow);
            if (it != r.flow_e2e_delay.end()) per_method[r.method_label] = it->second / kMicro;
        }
        flow_delay[flow] = std::move(per_method);
    }
    doc["flow_e2e_delay"] = std::move(flow_delay);

    json server_delay = json::object();
    for (const auto& server : rs.network().graph.nodes) {
        json per_method = json::object();
        bool any = false;
        for (const auto& r : rs.results()) {
            auto it = r.server_delay.find(server);
            if (it != r.server_delay.end()) {
                per_method[r.method_label] = it->second / kMicro;
                any = true;
            }
        }
        if (any) server_delay[server] = std::move(per_method);
    }
    doc["server_delay"] = std::move(server_delay);

    json exec = json::object();
    for (const auto& r : rs.results()) exec[r.method_label] = r.execution_time / kMilli;
    doc["execution_time"] = std::move(exec);

    doc["units"] = {{"flow_delay", "us"}, {"server_delay", "us"}, {"execution_time", "ms"}};
    return doc.dump(4) + "\n";
}

std::string export_markdown(const ResultSet& rs) {
    if (rs.results().empty()) throw DomainError("no analysis results to export");
    const NetworkSnapshot& net = rs.network();

    std::string out = "# Analysis report: " + net.name + "\n\n";

    out += "## Flow end-to-end delay\n\n";
    std::vector<std::string> flow_rows;
    for (const auto& [flow, path] : net.flow_paths) {
        (void)path;
        flow_rows.push_back(flow);
    }
    delay_table(out, rs, "Flow", flow_rows, &NetworkResult::flow_e2e_delay);

    out += "## Server delay\n\n";
    std::vector<std::string> server_rows;
    for (const auto& server : net.graph.nodes) {
        for (const auto& r : rs.results()) {
            if (r.server_delay.count(server)) {
                server_rows.push_back(server);
                break;
            }
        }
    }
    delay_table(out, rs, "Server", server_rows, &NetworkResult::server_delay);

    out += "## Execution time\n\n";
    std::vector<double> times;
    for (const auto& r : rs.results()) times.push_back(r.execution_time);
    DisplayUnit time_unit = pick_unit(times);
    out += "Unit: " + std::string(time_unit.name) + "\n\n";
    out += "| Method | Time |\n| --- | --- |\n";
    for (const auto& r : rs.results()) {
        out += "| " + r.method_label + " | " + round3(r.execution_time / time_unit.factor) + " |\n";
    }
    out += "\n";

    out += "## Network topology\n\n";
    for (const auto& node : net.graph.nodes) {
        const auto& succ = net.graph.edges.at(node);
        out += "- " + node + " -> ";
        if (succ.empty()) {
            out += "(none)";
        } else {
            for (std::size_t i = 0; i < succ.size(); ++i) {
                out += (i ? ", " : "") + succ[i];
            }
        }
        out += "\n";
    }
    out += "\n```dot\ndigraph topology {\n";
    for (const auto& node : net.graph.nodes) {
        for (const auto& to : net.graph.edges.at(node)) {
            out += "    \"" + node + "\" -> \"" + to + "\";\n";
        }
    }
    out += "}\n```\n\n";

    out += "## Flow paths\n\n";
    for (const auto& [flow, path] : net.flow_paths) {
        out += "- " + flow + ": ";
        for (std::size_t i = 0; i < path.size(); ++i) out += (i ? " -> " : "") + path[i];
        out += "\n";
    }
    out += "\n";

    out += "## Link utilization\n\n";
    out += "| Server | Utilization |\n| --- | --- |\n";
    for (const auto& node : net.graph.nodes) {
        out += "| " + node + " | " + format_double(net.utilization.at(node)) + " |\n";
    }
    return out;
}

} // namespace tsnb
