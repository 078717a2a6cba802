// Shared helpers for the test suites: fixture loading, tolerant comparison,
// seeded random curve generation and grid-based deviation oracles that stay
// independent of the library's corner-candidate computations.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tsnbound/curves.hpp"
#include "tsnbound/generators.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
    const char* dir = std::getenv("TSNBOUND_DATA");
    return (dir ? std::string(dir) : std::string("tests/data")) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline bool rel_close(double a, double b, double rel) {
    if (a == b) return true;
    return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

// Random curves with well-separated parameters (4 significant digits, spread
// over decades) so canonicalization decisions are exact and the raw piece
// list stays pointwise identical to the canonical form.
inline double random_sig4(tsnb::SplitMix64& rng, double lo_exp, double hi_exp) {
    double mantissa = static_cast<double>(1000 + rng.below(9000)) / 1000.0;
    double exponent = static_cast<double>(rng.below(static_cast<std::uint64_t>(hi_exp - lo_exp + 1)));
    return mantissa * std::pow(10.0, lo_exp + exponent);
}

inline std::vector<tsnb::TokenBucket> random_concave_pieces(tsnb::SplitMix64& rng) {
    std::size_t count = 1 + rng.below(4);
    std::vector<tsnb::TokenBucket> pieces;
    for (std::size_t i = 0; i < count; ++i) {
        double rate = random_sig4(rng, 2, 6);
        bool fresh = true;
        for (const auto& p : pieces) {
            if (std::fabs(p.rate - rate) <= 1e-6 * std::max(p.rate, rate)) fresh = false;
        }
        if (!fresh) continue;
        pieces.push_back({rate, random_sig4(rng, 0, 4)});
    }
    if (pieces.empty()) pieces.push_back({random_sig4(rng, 2, 6), random_sig4(rng, 0, 4)});
    return pieces;
}

inline std::vector<tsnb::RateLatency> random_convex_pieces(tsnb::SplitMix64& rng) {
    std::size_t count = 1 + rng.below(4);
    std::vector<tsnb::RateLatency> pieces;
    for (std::size_t i = 0; i < count; ++i) {
        double rate = random_sig4(rng, 5, 8);
        bool fresh = true;
        for (const auto& p : pieces) {
            if (std::fabs(p.rate - rate) <= 1e-6 * std::max(p.rate, rate)) fresh = false;
        }
        if (!fresh) continue;
        pieces.push_back({rate, random_sig4(rng, -6, -2)});
    }
    if (pieces.empty()) pieces.push_back({random_sig4(rng, 5, 8), random_sig4(rng, -6, -2)});
    return pieces;
}

// Stable pair: the service top rate always exceeds the arrival's long-run rate.
inline std::pair<tsnb::ConcaveCurve, tsnb::ConvexCurve> random_stable_pair(tsnb::SplitMix64& rng) {
    tsnb::ConcaveCurve alpha(random_concave_pieces(rng));
    while (true) {
        tsnb::ConvexCurve beta(random_convex_pieces(rng));
        if (alpha.long_run_rate() < 0.9 * beta.top_rate()) return {alpha, beta};
    }
}

// inf{t : curve(t) >= y} done piece by piece, for the oracles below.
inline double oracle_beta_inverse(const tsnb::ConvexCurve& beta, double y) {
    if (y <= 0.0) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : beta.pieces()) best = std::min(best, p.latency + y / p.rate);
    return best;
}

inline double oracle_alpha_inverse(const tsnb::ConcaveCurve& alpha, double y) {
    double t = 0.0;
    for (const auto& p : alpha.pieces()) {
        if (y <= p.burst) continue;
        if (p.rate <= 0.0) return std::numeric_limits<double>::infinity();
        t = std::max(t, (y - p.burst) / p.rate);
    }
    return t;
}

// Sample grid: both curves' breakpoints, the horizontal positions where the
// arrival curve crosses the service corners, and a uniform fill spanning 4x
// the largest breakpoint.
inline std::vector<double> oracle_grid(const tsnb::ConcaveCurve& alpha,
                                       const tsnb::ConvexCurve& beta, std::size_t fill) {
    std::vector<double> grid{0.0};
    double span = 1e-6;
    for (double t : alpha.breakpoints()) {
        grid.push_back(t);
        span = std::max(span, t);
    }
    for (double t : beta.breakpoints()) {
        grid.push_back(t);
        span = std::max(span, t);
        double crossing = oracle_alpha_inverse(alpha, beta.eval(t));
        if (std::isfinite(crossing)) {
            grid.push_back(crossing);
            span = std::max(span, crossing);
        }
    }
    span *= 4.0;
    for (std::size_t i = 0; i <= fill; ++i) {
        grid.push_back(span * static_cast<double>(i) / static_cast<double>(fill));
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

inline double grid_h_dev(const tsnb::ConcaveCurve& alpha, const tsnb::ConvexCurve& beta,
                         std::size_t fill = 20000) {
    double best = 0.0;
    for (double t : oracle_grid(alpha, beta, fill)) {
        best = std::max(best, oracle_beta_inverse(beta, alpha.eval(t)) - t);
    }
    return best;
}

inline double grid_v_dev(const tsnb::ConcaveCurve& alpha, const tsnb::ConvexCurve& beta,
                         std::size_t fill = 20000) {
    double best = 0.0;
    for (double t : oracle_grid(alpha, beta, fill)) {
        best = std::max(best, alpha.eval(t) - beta.eval(t));
    }
    return best;
}

} // namespace testutil
