#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tsnbound/network.hpp"

namespace tsnb {

// Inclusive parameter range in canonical units; fixed when lo == hi.
struct ParamRange {
    double lo = 0.0;
    double hi = 0.0;

    ParamRange() = default;
    ParamRange(double v) : lo(v), hi(v) {} // NOLINT: implicit for fixed values
    ParamRange(double lo_, double hi_);

    bool fixed() const { return lo == hi; }
};

struct GenParams {
    ParamRange burst;             // bits, per flow
    ParamRange arrival_rate;      // bits/s, per flow
    ParamRange max_packet_length; // bits, per flow
    ParamRange latency;           // s, per server
    ParamRange service_rate;      // bits/s, per server
    std::optional<ParamRange> capacity; // bits/s, per server; unbounded when absent
    std::uint64_t seed = 0;
};

// Deterministic 64-bit generator (splitmix64) so documents reproduce
// bit-identically across platforms for a given seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    double next_double();                  // uniform in [0, 1)
    std::uint64_t below(std::uint64_t n);  // uniform in [0, n)
    double sample(const ParamRange& r);

private:
    std::uint64_t state_;
};

// Line of n servers; f0 runs the whole line, f_i covers [s_{i-1}, s_i].
// Requires n >= 2 and fixed parameter values.
OutputPortNetwork generate_interleave(int size, const GenParams& p);

// n servers, n flows; flow i visits s_i, s_{i+1 mod n}, ..., length n.
// Requires n >= 2 and fixed parameter values.
OutputPortNetwork generate_ring(int size, const GenParams& p);

// Servers paired (s_0,s_1), (s_2,s_3), ... with a final joint server that has
// twice the service rate; one flow per combination of one server per pair.
// Requires odd n >= 3 and fixed parameter values.
OutputPortNetwork generate_mesh(int size, const GenParams& p);

using ConnectionMap = std::vector<std::pair<std::string, std::vector<std::string>>>;

// Fixed switch topology with seed-deterministic random routing: each flow
// starts at a uniformly random switch and walks `connections` without
// revisiting, stopping with probability 1/2 after each hop past the first or
// when stuck. Range parameters are sampled per server / per flow.
OutputPortNetwork generate_fixed_topology(int num_flows, const ConnectionMap& connections,
                                          const GenParams& p);

} // namespace tsnb
