// Command-line front end: analyze network files, convert between the two
// description formats, and generate benchmark topologies.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsnbound.h"

namespace {

namespace fs = std::filesystem;

int exit_code(tsnb_status status) {
    switch (status) {
    case TSNB_OK: return 0;
    case TSNB_ERR_PARSE: return 2;
    case TSNB_ERR_INVALID_ARG: return 2;
    case TSNB_ERR_UNSTABLE: return 3;
    case TSNB_ERR_DIVERGED: return 4;
    case TSNB_ERR_IO: return 5;
    default: return 1;
    }
}

int fail(tsnb_status status) {
    std::cerr << "error: " << tsnb_last_error() << "\n";
    return exit_code(status);
}

struct StringHolder {
    char* text = nullptr;
    ~StringHolder() { tsnb_string_free(text); }
};

using NetworkHolder = std::unique_ptr<tsnb_network, decltype(&tsnb_network_free)>;
using ResultsHolder = std::unique_ptr<tsnb_results, decltype(&tsnb_results_free)>;

tsnb_format parse_format(const std::string& name) {
    if (name == "xml") return TSNB_FORMAT_XML;
    if (name == "json") return TSNB_FORMAT_JSON;
    return TSNB_FORMAT_AUTO;
}

// No partial output files: write next to the target, rename on success.
bool write_file_atomically(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return false;
        out << content;
        if (!out.good()) return false;
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        return false;
    }
    return true;
}

struct AnalyzeArgs {
    std::string input;
    std::string format = "auto";
    std::vector<std::string> methods{"all"};
    std::string multiplexing = "keep";
    std::string shaping = "keep";
    std::string packetizer = "keep";
    std::string ceil;
    std::string out_base;
    bool lenient = false;
};

int run_analyze(const AnalyzeArgs& args) {
    tsnb_network* raw = nullptr;
    tsnb_status status =
        tsnb_network_load(args.input.c_str(), parse_format(args.format), args.lenient, &raw);
    if (status != TSNB_OK) return fail(status);
    NetworkHolder net(raw, &tsnb_network_free);

    tsnb_results* raw_results = nullptr;
    status = tsnb_results_create(net.get(), &raw_results);
    if (status != TSNB_OK) return fail(status);
    ResultsHolder results(raw_results, &tsnb_results_free);

    tsnb_options overrides{};
    overrides.multiplexing = args.multiplexing == "FIFO"       ? 0
                             : args.multiplexing == "ARBITRARY" ? 1
                                                                : -1;
    overrides.input_shaping = args.shaping == "on" ? 1 : args.shaping == "off" ? 0 : -1;
    overrides.packetizer = args.packetizer == "on" ? 1 : args.packetizer == "off" ? 0 : -1;
    overrides.ceil = args.ceil.empty() ? nullptr : args.ceil.c_str();

    std::vector<std::string> methods;
    for (const auto& m : args.methods) {
        if (m == "all") {
            methods = {"TFA", "SFA"};
            break;
        }
        if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
    }

    for (const auto& name : methods) {
        tsnb_method method = name == "TFA" ? TSNB_METHOD_TFA : TSNB_METHOD_SFA;
        auto start = std::chrono::steady_clock::now();
        status = tsnb_results_run(results.get(), method, &overrides);
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              start)
                        .count();
        if (status != TSNB_OK) return fail(status);
        std::printf("%s: ok (%.3f ms)\n", name.c_str(), ms);
    }

    StringHolder json_report;
    status = tsnb_results_export_json(results.get(), &json_report.text);
    if (status != TSNB_OK) return fail(status);
    StringHolder md_report;
    status = tsnb_results_export_markdown(results.get(), &md_report.text);
    if (status != TSNB_OK) return fail(status);

    std::string base = args.out_base.empty() ? fs::path(args.input).stem().string() + "_report"
                                             : args.out_base;
    fs::path json_path = base + ".json";
    fs::path md_path = base + ".md";
    if (!write_file_atomically(json_path, json_report.text) ||
        !write_file_atomically(md_path, md_report.text)) {
        std::cerr << "error: cannot write report files for base '" << base << "'\n";
        return 5;
    }
    std::printf("wrote %s and %s\n", json_path.c_str(), md_path.c_str());
    return 0;
}

struct ConvertArgs {
    std::string input;
    std::string format = "auto";
    std::string to;
    std::string out;
    bool lenient = false;
};

int run_convert(const ConvertArgs& args) {
    tsnb_network* raw = nullptr;
    tsnb_status status =
        tsnb_network_load(args.input.c_str(), parse_format(args.format), args.lenient, &raw);
    if (status != TSNB_OK) return fail(status);
    NetworkHolder net(raw, &tsnb_network_free);

    StringHolder text;
    status = tsnb_network_write(net.get(), parse_format(args.to), &text.text);
    if (status != TSNB_OK) return fail(status);

    std::string out = args.out.empty()
                          ? fs::path(args.input).stem().string() + "." + args.to
                          : args.out;
    if (!write_file_atomically(out, text.text)) {
        std::cerr << "error: cannot write '" << out << "'\n";
        return 5;
    }
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

struct GenerateArgs {
    std::string kind;
    int size = 0;
    int flows = 0;
    std::string connections;
    std::uint64_t seed = 0;
    std::string burst = "10B";
    std::string arrival_rate = "10kbps";
    std::string max_packet_length = "50B";
    std::string latency = "10us";
    std::string service_rate = "1Mbps";
    std::string capacity;
    std::string out;
};

int run_generate(const GenerateArgs& args) {
    tsnb_gen_params params{};
    params.burst = args.burst.c_str();
    params.arrival_rate = args.arrival_rate.c_str();
    params.max_packet_length = args.max_packet_length.c_str();
    params.latency = args.latency.c_str();
    params.service_rate = args.service_rate.c_str();
    params.capacity = args.capacity.empty() ? nullptr : args.capacity.c_str();
    params.seed = args.seed;

    tsnb_network* raw = nullptr;
    tsnb_status status = TSNB_OK;
    if (args.kind == "interleave") {
        status = tsnb_generate_interleave(args.size, &params, &raw);
    } else if (args.kind == "ring") {
        status = tsnb_generate_ring(args.size, &params, &raw);
    } else if (args.kind == "mesh") {
        status = tsnb_generate_mesh(args.size, &params, &raw);
    } else {
        if (args.connections.empty()) {
            std::cerr << "error: fixed topology needs --connections\n";
            return 2;
        }
        std::ifstream in(args.connections, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot open '" << args.connections << "'\n";
            return 5;
        }
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        status = tsnb_generate_fixed(args.flows, text.c_str(), &params, &raw);
    }
    if (status != TSNB_OK) return fail(status);
    NetworkHolder net(raw, &tsnb_network_free);

    StringHolder text;
    status = tsnb_network_write(net.get(), TSNB_FORMAT_JSON, &text.text);
    if (status != TSNB_OK) return fail(status);

    if (!write_file_atomically(args.out, text.text)) {
        std::cerr << "error: cannot write '" << args.out << "'\n";
        return 5;
    }
    std::printf("wrote %s (%d servers, %d flows)\n", args.out.c_str(),
                tsnb_network_server_count(net.get()), tsnb_network_flow_count(net.get()));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Worst-case delay analysis for time-sensitive networks"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand("analyze", "Run delay analyses and export reports");
    analyze->add_option("input", analyze_args.input, "Network file (.xml or .json)")->required();
    analyze->add_option("--format", analyze_args.format, "Input format")
        ->check(CLI::IsMember({"auto", "xml", "json"}));
    analyze->add_option("--methods", analyze_args.methods, "Methods to run (TFA, SFA, all)")
        ->delimiter(',')
        ->check(CLI::IsMember({"TFA", "SFA", "all"}));
    analyze->add_option("--multiplexing", analyze_args.multiplexing, "Override multiplexing")
        ->check(CLI::IsMember({"keep", "FIFO", "ARBITRARY"}));
    analyze->add_option("--shaping", analyze_args.shaping, "Override input shaping")
        ->check(CLI::IsMember({"keep", "on", "off"}));
    analyze->add_option("--packetizer", analyze_args.packetizer, "Override packetizer")
        ->check(CLI::IsMember({"keep", "on", "off"}));
    analyze->add_option("--ceil", analyze_args.ceil,
                        "Fixed-point delay quantum, e.g. 1ns (cyclic networks)");
    analyze->add_option("--out", analyze_args.out_base, "Report base name");
    analyze->add_flag("--lenient", analyze_args.lenient, "Keep unknown fields instead of failing");

    ConvertArgs convert_args;
    CLI::App* convert = app.add_subcommand("convert", "Convert between description formats");
    convert->add_option("input", convert_args.input, "Network file")->required();
    convert->add_option("--format", convert_args.format, "Input format")
        ->check(CLI::IsMember({"auto", "xml", "json"}));
    convert->add_option("--to", convert_args.to, "Target format")
        ->required()
        ->check(CLI::IsMember({"xml", "json"}));
    convert->add_option("--out", convert_args.out, "Output path");
    convert->add_flag("--lenient", convert_args.lenient, "Keep unknown fields instead of failing");

    GenerateArgs generate_args;
    CLI::App* generate = app.add_subcommand("generate", "Generate a network description file");
    generate->add_option("kind", generate_args.kind, "interleave, ring, mesh or fixed")
        ->required()
        ->check(CLI::IsMember({"interleave", "ring", "mesh", "fixed"}));
    generate->add_option("--size", generate_args.size, "Number of servers");
    generate->add_option("--flows", generate_args.flows, "Number of flows (fixed topology)");
    generate->add_option("--connections", generate_args.connections,
                         "JSON file mapping each switch to its reachable switches");
    generate->add_option("--seed", generate_args.seed, "Random seed");
    generate->add_option("--burst", generate_args.burst, "Flow burst (value or low:high)");
    generate->add_option("--arrival-rate", generate_args.arrival_rate, "Flow rate");
    generate->add_option("--max-packet-length", generate_args.max_packet_length, "Flow packet size");
    generate->add_option("--latency", generate_args.latency, "Server latency");
    generate->add_option("--service-rate", generate_args.service_rate, "Server rate");
    generate->add_option("--capacity", generate_args.capacity, "Link capacity (empty: unbounded)");
    generate->add_option("--out", generate_args.out, "Output path")->required();

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) return run_analyze(analyze_args);
    if (convert->parsed()) return run_convert(convert_args);
    return run_generate(generate_args);
}
