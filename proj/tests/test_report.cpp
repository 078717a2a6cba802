#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "support.hpp"
#include "tsnbound/analysis.hpp"
#include "tsnbound/formats.hpp"
#include "tsnbound/report.hpp"

using namespace tsnb;

namespace {

OutputPortNetwork demo() {
    return parse_json(testutil::read_file(testutil::data_path("demo.json")));
}

ResultSet demo_results(bool both_methods) {
    OutputPortNetwork net = demo();
    ResultSet rs(net);
    rs.add(analyze_tfa(net, net.options));
    if (both_methods) rs.add(analyze_sfa(net, net.options));
    return rs;
}

} // namespace

TEST_CASE("machine report carries exact values in the documented units") {
    ResultSet rs = demo_results(false);
    const NetworkResult& tfa = rs.results().front();

    auto doc = nlohmann::json::parse(export_json(rs));
    CHECK(doc["name"] == "demo");
    CHECK(doc["units"]["flow_delay"] == "us");
    CHECK(doc["units"]["server_delay"] == "us");
    CHECK(doc["units"]["execution_time"] == "ms");

    // Lossless: the parsed numbers equal the stored ones bit for bit.
    for (const auto& [flow, delay] : tfa.flow_e2e_delay) {
        CHECK(doc["flow_e2e_delay"][flow]["native_TFA"].get<double>() == delay / 1e-6);
    }
    for (const auto& [server, delay] : tfa.server_delay) {
        CHECK(doc["server_delay"][server]["native_TFA"].get<double>() == delay / 1e-6);
    }
    CHECK(doc["execution_time"]["native_TFA"].get<double>() == tfa.execution_time / 1e-3);

    CHECK(doc["flow_e2e_delay"]["f0"]["native_TFA"].get<double>() ==
          doctest::Approx(100.125).epsilon(1e-9));
    CHECK(doc["server_delay"]["s0-o0"]["native_TFA"].get<double>() ==
          doctest::Approx(50.0).epsilon(1e-9));
}

TEST_CASE("two methods produce two labels per flow") {
    auto doc = nlohmann::json::parse(export_json(demo_results(true)));
    for (const auto& flow : {"f0", "f1", "f2"}) {
        CHECK(doc["flow_e2e_delay"][flow].size() == 2);
        CHECK(doc["flow_e2e_delay"][flow].contains("native_TFA"));
        CHECK(doc["flow_e2e_delay"][flow].contains("native_SFA"));
    }
}

TEST_CASE("markdown report sections and rounding") {
    std::string md = export_markdown(demo_results(true));

    // All six sections in order.
    std::size_t flow_pos = md.find("## Flow end-to-end delay");
    std::size_t server_pos = md.find("## Server delay");
    std::size_t time_pos = md.find("## Execution time");
    std::size_t topo_pos = md.find("## Network topology");
    std::size_t path_pos = md.find("## Flow paths");
    std::size_t util_pos = md.find("## Link utilization");
    REQUIRE(flow_pos != std::string::npos);
    CHECK(flow_pos < server_pos);
    CHECK(server_pos < time_pos);
    CHECK(time_pos < topo_pos);
    CHECK(topo_pos < path_pos);
    CHECK(path_pos < util_pos);

    // Smallest positive delay is 30.125 us, so tables use microseconds with
    // three decimals.
    CHECK(md.find("Unit: us") != std::string::npos);
    CHECK(md.find("| f0 | 100.125 |") != std::string::npos);
    CHECK(md.find("| s0-o0 | 50.000 |") != std::string::npos);

    CHECK(md.find("- s0-o0 -> s1-o0, s1-o1") != std::string::npos);
    CHECK(md.find("digraph topology") != std::string::npos);
    CHECK(md.find("\"s0-o0\" -> \"s1-o0\";") != std::string::npos);
    CHECK(md.find("- f0: s0-o0 -> s1-o0") != std::string::npos);
}

TEST_CASE("markdown min column is the raw row minimum") {
    OutputPortNetwork net = demo();
    ResultSet rs(net);

    NetworkResult a;
    a.method_label = "native_TFA";
    a.flow_e2e_delay = {{"f0", 100.1254e-6}, {"f1", 80e-6}, {"f2", 50e-6}};
    a.server_delay = {{"s0-o0", 50e-6}, {"s1-o0", 50e-6}, {"s1-o1", 30e-6}};
    a.execution_time = 1.5e-3;
    NetworkResult b;
    b.method_label = "native_SFA";
    b.flow_e2e_delay = {{"f0", 100.1246e-6}, {"f1", 90e-6}, {"f2", 40e-6}};
    b.server_delay = a.server_delay;
    b.execution_time = 2.5e-3;
    rs.add(a);
    rs.add(b);

    std::string md = export_markdown(rs);
    // Both round to 100.125 but the min picks the raw smaller one.
    CHECK(md.find("| f0 | 100.125 | 100.125 | 100.125 |") != std::string::npos);
    CHECK(md.find("| f1 | 80.000 | 90.000 | 80.000 |") != std::string::npos);
    CHECK(md.find("| f2 | 50.000 | 40.000 | 40.000 |") != std::string::npos);
}

TEST_CASE("utilization section prints plain ratios") {
    OutputPortNetwork net;
    net.name = "util";
    net.servers.push_back({"n", ConvexCurve(1e4, 1e-3), std::nullopt, {}});
    Flow a;
    a.name = "a";
    a.path = {"n"};
    a.arrival = ConcaveCurve(2e3, 8.0);
    Flow b = a;
    b.name = "b";
    b.arrival = ConcaveCurve(3e3, 8.0);
    net.flows = {a, b};

    ResultSet rs(net);
    rs.add(analyze_tfa(net, net.options));
    std::string md = export_markdown(rs);
    CHECK(md.find("| n | 0.5 |") != std::string::npos);
}

TEST_CASE("degenerate all-zero delays fall back to nanoseconds") {
    OutputPortNetwork net;
    net.name = "zero";
    net.servers.push_back({"n", ConvexCurve(1e6, 0.0), std::nullopt, {}});
    Flow f;
    f.name = "f";
    f.path = {"n"};
    f.arrival = ConcaveCurve(10.0, 0.0);
    net.flows = {f};

    ResultSet rs(net);
    rs.add(analyze_tfa(net, net.options));
    std::string md = export_markdown(rs);
    CHECK(md.find("Unit: ns") != std::string::npos);
    CHECK(md.find("| f | 0.000 | 0.000 |") != std::string::npos);
}

TEST_CASE("a network without flows exports empty delay maps") {
    OutputPortNetwork net;
    net.name = "flowless";
    net.servers.push_back({"s", ConvexCurve(1e6, 0.0), std::nullopt, {}});

    ResultSet rs(net);
    NetworkResult synthetic;
    synthetic.method_label = "native_TFA";
    synthetic.execution_time = 1e-3;
    rs.add(synthetic);

    auto doc = nlohmann::json::parse(export_json(rs));
    CHECK(doc["flow_e2e_delay"] == nlohmann::json::object());
    CHECK(doc["server_delay"] == nlohmann::json::object());
}

TEST_CASE("result accumulation replaces duplicate labels") {
    OutputPortNetwork net = demo();
    ResultSet rs(net);
    rs.add(analyze_tfa(net, net.options));
    rs.add(analyze_tfa(net, net.options));
    CHECK(rs.results().size() == 1);

    ResultSet empty(net);
    CHECK_THROWS_AS(export_json(empty), DomainError);
    CHECK_THROWS_AS(export_markdown(empty), DomainError);
}
