#include "tsnbound.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tsnbound/analysis.hpp"
#include "tsnbound/convert.hpp"
#include "tsnbound/formats.hpp"
#include "tsnbound/generators.hpp"
#include "tsnbound/report.hpp"
#include "tsnbound/units.hpp"

struct tsnb_network {
    tsnb::NetworkDocument doc;
};

struct tsnb_results {
    tsnb::OutputPortNetwork net;
    tsnb::ResultSet set;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
tsnb_status guarded(F&& body) {
    try {
        body();
        return TSNB_OK;
    } catch (const tsnb::ParseError& e) {
        g_last_error = e.what();
        return TSNB_ERR_PARSE;
    } catch (const tsnb::UnstableError& e) {
        g_last_error = e.what();
        return TSNB_ERR_UNSTABLE;
    } catch (const tsnb::DivergenceError& e) {
        g_last_error = e.what();
        return TSNB_ERR_DIVERGED;
    } catch (const tsnb::IoError& e) {
        g_last_error = e.what();
        return TSNB_ERR_IO;
    } catch (const tsnb::DomainError& e) {
        g_last_error = e.what();
        return TSNB_ERR_INVALID_ARG;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TSNB_ERR_INTERNAL;
    }
}

tsnb_status invalid_arg(const char* message) {
    g_last_error = message;
    return TSNB_ERR_INVALID_ARG;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::optional<tsnb::DocumentKind> to_kind(tsnb_format format) {
    switch (format) {
    case TSNB_FORMAT_XML: return tsnb::DocumentKind::PhysicalXml;
    case TSNB_FORMAT_JSON: return tsnb::DocumentKind::OutputPortJson;
    default: return std::nullopt;
    }
}

tsnb::OutputPortNetwork as_output_port(const tsnb::NetworkDocument& doc) {
    if (doc.kind == tsnb::DocumentKind::OutputPortJson) return doc.output_port();
    return tsnb::physical_to_output_port(doc.physical());
}

tsnb::ParamRange parse_range(const char* text, tsnb::Dimension dim, const char* what) {
    if (!text) throw tsnb::DomainError(std::string("generator parameter '") + what + "' is missing");
    std::string s(text);
    std::size_t colon = s.find(':');
    if (colon == std::string::npos) {
        return tsnb::ParamRange(tsnb::parse_quantity(s, dim));
    }
    return tsnb::ParamRange(tsnb::parse_quantity(s.substr(0, colon), dim),
                            tsnb::parse_quantity(s.substr(colon + 1), dim));
}

tsnb::GenParams build_params(const tsnb_gen_params* params) {
    if (!params) throw tsnb::DomainError("generator parameters are missing");
    tsnb::GenParams p;
    p.burst = parse_range(params->burst, tsnb::Dimension::Data, "burst");
    p.arrival_rate = parse_range(params->arrival_rate, tsnb::Dimension::Rate, "arrival_rate");
    p.max_packet_length =
        parse_range(params->max_packet_length, tsnb::Dimension::Data, "max_packet_length");
    p.latency = parse_range(params->latency, tsnb::Dimension::Time, "latency");
    p.service_rate = parse_range(params->service_rate, tsnb::Dimension::Rate, "service_rate");
    if (params->capacity) {
        p.capacity = parse_range(params->capacity, tsnb::Dimension::Rate, "capacity");
    }
    p.seed = params->seed;
    return p;
}

tsnb_status wrap_network(tsnb::OutputPortNetwork net, tsnb_network** out) {
    *out = new tsnb_network{{tsnb::DocumentKind::OutputPortJson, std::move(net)}};
    return TSNB_OK;
}

} // namespace

extern "C" {

const char* tsnb_last_error(void) { return g_last_error.c_str(); }

tsnb_status tsnb_network_parse(const char* text, tsnb_format format, int lenient,
                               tsnb_network** out) {
    if (!text || !out) return invalid_arg("text and out must not be NULL");
    *out = nullptr;
    return guarded([&] {
        tsnb::NetworkDocument doc =
            tsnb::parse_document(text, to_kind(format),
                                 lenient ? tsnb::ParseMode::Lenient : tsnb::ParseMode::Strict);
        *out = new tsnb_network{std::move(doc)};
    });
}

tsnb_status tsnb_network_load(const char* path, tsnb_format format, int lenient,
                              tsnb_network** out) {
    if (!path || !out) return invalid_arg("path and out must not be NULL");
    *out = nullptr;
    return guarded([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw tsnb::IoError(std::string("cannot open '") + path + "'");
        std::ostringstream buffer;
        buffer << in.rdbuf();

        std::optional<tsnb::DocumentKind> kind = to_kind(format);
        if (!kind) {
            std::string name(path);
            if (name.size() >= 4 && name.substr(name.size() - 4) == ".xml") {
                kind = tsnb::DocumentKind::PhysicalXml;
            } else if (name.size() >= 5 && name.substr(name.size() - 5) == ".json") {
                kind = tsnb::DocumentKind::OutputPortJson;
            }
        }
        tsnb::NetworkDocument doc =
            tsnb::parse_document(buffer.str(), kind,
                                 lenient ? tsnb::ParseMode::Lenient : tsnb::ParseMode::Strict);
        *out = new tsnb_network{std::move(doc)};
    });
}

tsnb_status tsnb_network_write(const tsnb_network* net, tsnb_format format, char** out_text) {
    if (!net || !out_text) return invalid_arg("net and out_text must not be NULL");
    *out_text = nullptr;
    return guarded([&] {
        std::optional<tsnb::DocumentKind> kind = to_kind(format);
        tsnb::NetworkDocument doc =
            kind ? tsnb::convert(net->doc, *kind) : net->doc;
        *out_text = dup_string(tsnb::write_document(doc));
    });
}

void tsnb_network_free(tsnb_network* net) { delete net; }

tsnb_status tsnb_network_name(const tsnb_network* net, char** out_text) {
    if (!net || !out_text) return invalid_arg("net and out_text must not be NULL");
    return guarded([&] {
        *out_text = dup_string(net->doc.kind == tsnb::DocumentKind::PhysicalXml
                                   ? net->doc.physical().name
                                   : net->doc.output_port().name);
    });
}

int tsnb_network_server_count(const tsnb_network* net) {
    if (!net) return -1;
    try {
        return static_cast<int>(as_output_port(net->doc).servers.size());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return -1;
    }
}

int tsnb_network_flow_count(const tsnb_network* net) {
    if (!net) return -1;
    try {
        return static_cast<int>(as_output_port(net->doc).flows.size());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return -1;
    }
}

int tsnb_network_is_cyclic(const tsnb_network* net) {
    if (!net) return -1;
    try {
        return tsnb::induced_graph(as_output_port(net->doc)).has_cycle() ? 1 : 0;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return -1;
    }
}

tsnb_status tsnb_generate_interleave(int size, const tsnb_gen_params* params, tsnb_network** out) {
    if (!out) return invalid_arg("out must not be NULL");
    *out = nullptr;
    return guarded([&] { wrap_network(tsnb::generate_interleave(size, build_params(params)), out); });
}

tsnb_status tsnb_generate_ring(int size, const tsnb_gen_params* params, tsnb_network** out) {
    if (!out) return invalid_arg("out must not be NULL");
    *out = nullptr;
    return guarded([&] { wrap_network(tsnb::generate_ring(size, build_params(params)), out); });
}

tsnb_status tsnb_generate_mesh(int size, const tsnb_gen_params* params, tsnb_network** out) {
    if (!out) return invalid_arg("out must not be NULL");
    *out = nullptr;
    return guarded([&] { wrap_network(tsnb::generate_mesh(size, build_params(params)), out); });
}

tsnb_status tsnb_generate_fixed(int num_flows, const char* connections_json,
                                const tsnb_gen_params* params, tsnb_network** out) {
    if (!connections_json || !out) return invalid_arg("connections_json and out must not be NULL");
    *out = nullptr;
    return guarded([&] {
        nlohmann::ordered_json doc;
        try {
            doc = nlohmann::ordered_json::parse(connections_json);
        } catch (const nlohmann::json::exception& e) {
            throw tsnb::ParseError(std::string("connections: ") + e.what());
        }
        if (!doc.is_object()) throw tsnb::ParseError("connections must be a JSON object");
        tsnb::ConnectionMap connections;
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            if (!it.value().is_array()) {
                throw tsnb::ParseError("connections entry '" + it.key() + "' must be an array");
            }
            std::vector<std::string> neighbours;
            for (const auto& n : it.value()) {
                if (!n.is_string()) {
                    throw tsnb::ParseError("connections entry '" + it.key() +
                                           "' must list switch names");
                }
                neighbours.push_back(n.get<std::string>());
            }
            connections.emplace_back(it.key(), std::move(neighbours));
        }
        wrap_network(tsnb::generate_fixed_topology(num_flows, connections, build_params(params)),
                     out);
    });
}

tsnb_status tsnb_results_create(const tsnb_network* net, tsnb_results** out) {
    if (!net || !out) return invalid_arg("net and out must not be NULL");
    *out = nullptr;
    return guarded([&] {
        tsnb::OutputPortNetwork op = as_output_port(net->doc);
        tsnb::ResultSet set(op);
        *out = new tsnb_results{std::move(op), std::move(set)};
    });
}

tsnb_status tsnb_results_run(tsnb_results* results, tsnb_method method,
                             const tsnb_options* overrides) {
    if (!results) return invalid_arg("results must not be NULL");
    return guarded([&] {
        tsnb::AnalysisOptions options = results->net.options;
        if (overrides) {
            if (overrides->multiplexing == 0) options.multiplexing = tsnb::Multiplexing::Fifo;
            if (overrides->multiplexing == 1) options.multiplexing = tsnb::Multiplexing::Arbitrary;
            if (overrides->input_shaping >= 0) options.input_shaping = overrides->input_shaping != 0;
            if (overrides->packetizer >= 0) options.packetizer = overrides->packetizer != 0;
            if (overrides->ceil) {
                std::string ceil(overrides->ceil);
                if (ceil.empty()) {
                    options.ceil_precision.reset();
                } else {
                    double quantum = tsnb::parse_quantity(ceil, tsnb::Dimension::Time);
                    if (quantum <= 0.0) throw tsnb::DomainError("ceil precision must be > 0");
                    options.ceil_precision = quantum;
                }
            }
        }
        tsnb::NetworkResult result = method == TSNB_METHOD_TFA
                                         ? tsnb::analyze_tfa(results->net, options)
                                         : tsnb::analyze_sfa(results->net, options);
        results->set.add(std::move(result));
    });
}

tsnb_status tsnb_results_export_json(const tsnb_results* results, char** out_text) {
    if (!results || !out_text) return invalid_arg("results and out_text must not be NULL");
    *out_text = nullptr;
    return guarded([&] { *out_text = dup_string(tsnb::export_json(results->set)); });
}

tsnb_status tsnb_results_export_markdown(const tsnb_results* results, char** out_text) {
    if (!results || !out_text) return invalid_arg("results and out_text must not be NULL");
    *out_text = nullptr;
    return guarded([&] { *out_text = dup_string(tsnb::export_markdown(results->set)); });
}

void tsnb_results_free(tsnb_results* results) { delete results; }

double tsnb_results_flow_delay(const tsnb_results* results, const char* flow, const char* label) {
    if (!results || !flow || !label) return -1.0;
    for (const auto& r : results->set.results()) {
        if (r.method_label != label) continue;
        auto it = r.flow_e2e_delay.find(flow);
        if (it != r.flow_e2e_delay.end()) return it->second;
    }
    return -1.0;
}

double tsnb_results_server_delay(const tsnb_results* results, const char* server,
                                 const char* label) {
    if (!results || !server || !label) return -1.0;
    for (const auto& r : results->set.results()) {
        if (r.method_label != label) continue;
        auto it = r.server_delay.find(server);
        if (it != r.server_delay.end()) return it->second;
    }
    return -1.0;
}

void tsnb_string_free(char* text) { std::free(text); }

} // extern "C"
