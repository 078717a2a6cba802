#include "tsnbound/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tsnb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite_nonneg(double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0) {
        throw DomainError(std::string(what) + " must be finite and >= 0");
    }
}

// Lower envelope of lines b_i + r_i*t over t >= 0, as token buckets sorted by
// strictly decreasing rate / strictly increasing burst.
std::vector<TokenBucket> canonical_concave(std::vector<TokenBucket> v) {
    if (v.empty()) {
        throw DomainError("arrival curve needs at least one token bucket");
    }
    for (const auto& p : v) {
        require_finite_nonneg(p.rate, "token-bucket rate");
        require_finite_nonneg(p.burst, "token-bucket burst");
    }
    std::sort(v.begin(), v.end(), [](const TokenBucket& a, const TokenBucket& b) {
        if (a.rate != b.rate) return a.rate > b.rate;
        return a.burst < b.burst;
    });

    // Merge pieces with (nearly) equal rates, keeping the smaller burst.
    std::vector<TokenBucket> merged;
    for (const auto& p : v) {
        if (!merged.empty() && nearly_equal(merged.back().rate, p.rate)) continue;
        merged.push_back(p);
    }

    // Drop pieces dominated by some later piece (smaller-or-equal rate and
    // smaller-or-equal burst means the later line sits below everywhere).
    std::vector<TokenBucket> kept;
    double min_burst_after = kInf;
    for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
        if (it->burst < min_burst_after && !nearly_equal(it->burst, min_burst_after)) {
            kept.push_back(*it);
            min_burst_after = it->burst;
        }
    }
    std::reverse(kept.begin(), kept.end());

    // Envelope scan: remove middle pieces that never go strictly below the
    // minimum of their neighbours.
    std::vector<TokenBucket> env;
    for (const auto& piece : kept) {
        while (env.size() >= 2) {
            const TokenBucket& a = env[env.size() - 2];
            const TokenBucket& b = env.back();
            double x = (piece.burst - a.burst) / (a.rate - piece.rate);
            double v_ac = a.value_at(x);
            double v_b = b.value_at(x);
            if (v_b < v_ac && !nearly_equal(v_b, v_ac)) break;
            env.pop_back();
        }
        env.push_back(piece);
    }
    return env;
}

// Upper envelope of lines R_j*(t - T_j) over t >= 0 with the [.]+ clamp,
// as rate-latency pieces sorted by strictly increasing rate and latency.
std::vector<RateLatency> canonical_convex(std::vector<RateLatency> v) {
    if (v.empty()) {
        throw DomainError("service curve needs at least one rate-latency piece");
    }
    for (const auto& p : v) {
        require_finite_nonneg(p.latency, "rate-latency latency");
        if (!std::isfinite(p.rate) || p.rate <= 0.0) {
            throw DomainError("rate-latency rate must be finite and > 0");
        }
    }
    std::sort(v.begin(), v.end(), [](const RateLatency& a, const RateLatency& b) {
        if (a.rate != b.rate) return a.rate < b.rate;
        return a.latency < b.latency;
    });

    std::vector<RateLatency> merged;
    for (const auto& p : v) {
        if (!merged.empty() && nearly_equal(merged.back().rate, p.rate)) continue;
        merged.push_back(p);
    }

    // A later piece with larger rate and smaller R*T is above everywhere.
    std::vector<RateLatency> kept;
    double min_rt_after = kInf;
    for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
        double rt = it->rate * it->latency;
        if (rt < min_rt_after && !nearly_equal(rt, min_rt_after)) {
            kept.push_back(*it);
            min_rt_after = rt;
        }
    }
    std::reverse(kept.begin(), kept.end());

    // Envelope scan on the unclamped lines.
    std::vector<RateLatency> env;
    for (const auto& piece : kept) {
        while (env.size() >= 2) {
            const RateLatency& a = env[env.size() - 2];
            const RateLatency& b = env.back();
            double x = (piece.rate * piece.latency - a.rate * a.latency) / (piece.rate - a.rate);
            double v_ac = a.rate * (x - a.latency);
            double v_b = b.rate * (x - b.latency);
            if (v_b > v_ac && !nearly_equal(v_b, v_ac)) break;
            env.pop_back();
        }
        env.push_back(piece);
    }

    // Drop leading pieces whose binding interval lies entirely where the
    // envelope is <= 0 (the clamp hides them).
    while (env.size() >= 2) {
        const RateLatency& p0 = env[0];
        const RateLatency& p1 = env[1];
        double x = (p1.rate * p1.latency - p0.rate * p0.latency) / (p1.rate - p0.rate);
        if (p0.rate * (x - p0.latency) <= 0.0) {
            env.erase(env.begin());
        } else {
            break;
        }
    }
    return env;
}

} // namespace

bool nearly_equal(double a, double b, double rel) {
    if (a == b) return true;
    if (!std::isfinite(a) || !std::isfinite(b)) return false;
    return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

ConcaveCurve::ConcaveCurve(std::vector<TokenBucket> pieces)
    : pieces_(canonical_concave(std::move(pieces))) {}

ConcaveCurve::ConcaveCurve(double rate, double burst)
    : ConcaveCurve(std::vector<TokenBucket>{{rate, burst}}) {}

double ConcaveCurve::eval(double t) const {
    if (t < 0.0) throw DomainError("arrival curve evaluated at negative time");
    if (t == 0.0) return burst_at_origin();
    double v = kInf;
    for (const auto& p : pieces_) v = std::min(v, p.value_at(t));
    return v;
}

std::vector<double> ConcaveCurve::breakpoints() const {
    std::vector<double> bps;
    for (std::size_t k = 1; k < pieces_.size(); ++k) {
        const auto& prev = pieces_[k - 1];
        const auto& cur = pieces_[k];
        bps.push_back((cur.burst - prev.burst) / (prev.rate - cur.rate));
    }
    return bps;
}

double ConcaveCurve::inverse(double y) const {
    // min of lines reaches y once every line has: t >= (y - b_i)/r_i.
    double t = 0.0;
    for (const auto& p : pieces_) {
        if (y <= p.burst) continue;
        if (p.rate <= 0.0) return kInf;
        t = std::max(t, (y - p.burst) / p.rate);
    }
    return t;
}

ConvexCurve::ConvexCurve(std::vector<RateLatency> pieces)
    : pieces_(canonical_convex(std::move(pieces))) {}

ConvexCurve::ConvexCurve(double rate, double latency)
    : ConvexCurve(std::vector<RateLatency>{{rate, latency}}) {}

double ConvexCurve::eval(double t) const {
    if (t < 0.0) throw DomainError("service curve evaluated at negative time");
    if (is_unlimited()) return t > 0.0 ? kInf : 0.0;
    double v = 0.0;
    for (const auto& p : pieces_) v = std::max(v, p.value_at(t));
    return v;
}

double ConvexCurve::top_rate() const {
    return is_unlimited() ? kInf : pieces_.back().rate;
}

std::vector<double> ConvexCurve::breakpoints() const {
    std::vector<double> bps;
    if (is_unlimited()) return bps;
    if (pieces_.front().latency > 0.0) bps.push_back(pieces_.front().latency);
    for (std::size_t k = 1; k < pieces_.size(); ++k) {
        const auto& prev = pieces_[k - 1];
        const auto& cur = pieces_[k];
        bps.push_back((cur.rate * cur.latency - prev.rate * prev.latency) / (cur.rate - prev.rate));
    }
    return bps;
}

double ConvexCurve::inverse(double y) const {
    if (y <= 0.0) return 0.0;
    if (is_unlimited()) return 0.0;
    // inf over pieces of the time each line reaches y.
    double t = kInf;
    for (const auto& p : pieces_) t = std::min(t, p.latency + y / p.rate);
    return t;
}

ConcaveCurve add(const ConcaveCurve& a, const ConcaveCurve& b) {
    const auto& pa = a.pieces();
    const auto& pb = b.pieces();
    auto bps_a = a.breakpoints();
    auto bps_b = b.breakpoints();

    std::vector<TokenBucket> out;
    std::size_t ia = 0, ib = 0;
    while (true) {
        out.push_back({pa[ia].rate + pb[ib].rate, pa[ia].burst + pb[ib].burst});
        double next_a = ia < bps_a.size() ? bps_a[ia] : kInf;
        double next_b = ib < bps_b.size() ? bps_b[ib] : kInf;
        if (next_a == kInf && next_b == kInf) break;
        if (next_a <= next_b) ++ia;
        if (next_b <= next_a) ++ib;
    }
    return ConcaveCurve(std::move(out));
}

ConcaveCurve shape(const ConcaveCurve& alpha, const Shaper& sigma) {
    if (sigma.is_unbounded()) return alpha;
    std::vector<TokenBucket> pieces = alpha.pieces();
    pieces.push_back(sigma.bucket());
    return ConcaveCurve(std::move(pieces));
}

ConcaveCurve propagate(const ConcaveCurve& alpha, double delay) {
    if (delay < 0.0 || !std::isfinite(delay)) {
        throw DomainError("propagation delay must be finite and >= 0");
    }
    std::vector<TokenBucket> pieces = alpha.pieces();
    for (auto& p : pieces) p.burst += p.rate * delay;
    return ConcaveCurve(std::move(pieces));
}

namespace {

void require_stable(const ConcaveCurve& alpha, const ConvexCurve& beta) {
    if (!(alpha.long_run_rate() < beta.top_rate())) {
        throw UnstableError("arrival rate reaches the service rate; bound is infinite");
    }
}

} // namespace

double horizontal_deviation(const ConcaveCurve& alpha, const ConvexCurve& beta) {
    if (beta.is_unlimited()) return 0.0;
    require_stable(alpha, beta);

    // The deviation, seen over levels y > 0, is beta^-1(y) - alpha^-1(y): a
    // concave function of y whose supremum sits at a corner level of either
    // curve (taking the right limit towards level 0, where beta^-1 jumps to
    // the start-of-service latency).
    auto beta_inverse_pos = [&](double y) {
        double t = kInf;
        for (const auto& p : beta.pieces()) t = std::min(t, p.latency + y / p.rate);
        return t;
    };

    std::vector<double> levels;
    levels.push_back(alpha.burst_at_origin());
    for (double t : alpha.breakpoints()) levels.push_back(alpha.eval(t));
    for (double x : beta.breakpoints()) levels.push_back(beta.eval(x));

    double best = 0.0;
    for (double y : levels) {
        double reach = alpha.inverse(y);
        if (!std::isfinite(reach)) continue;
        best = std::max(best, beta_inverse_pos(y) - reach);
    }
    return best;
}

double vertical_deviation(const ConcaveCurve& alpha, const ConvexCurve& beta) {
    if (beta.is_unlimited()) return alpha.burst_at_origin();
    require_stable(alpha, beta);

    // alpha - beta is concave; its maximum sits at a corner of either curve
    // or at the origin (right limit).
    double best = alpha.burst_at_origin();
    for (double t : alpha.breakpoints()) best = std::max(best, alpha.eval(t) - beta.eval(t));
    for (double t : beta.breakpoints()) best = std::max(best, alpha.eval(t) - beta.eval(t));
    return best;
}

double intersection_delay(const ConcaveCurve& alpha, const ConvexCurve& beta) {
    if (beta.is_unlimited()) return 0.0;
    require_stable(alpha, beta);

    auto gap = [&](double t) { return beta.eval(t) - alpha.eval(t); };

    // Just after t = 0 the gap is -burst; with no burst its sign follows the
    // initial slopes (the condition holds from the start only when the
    // service rises at least as fast as the arrival).
    if (gap(0.0) >= 0.0) {
        double arrival_slope = alpha.pieces().front().rate;
        double service_slope =
            beta.pieces().front().latency > 0.0 ? 0.0 : beta.pieces().front().rate;
        if (service_slope >= arrival_slope) return 0.0;
    }

    std::vector<double> bps = alpha.breakpoints();
    for (double x : beta.breakpoints()) bps.push_back(x);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    // Bracket the first upcrossing, then bisect down to adjacent doubles so
    // the returned time is the smallest representable one satisfying the
    // condition as evaluated.
    double lo = 0.0;
    double hi = kInf;
    for (double bp : bps) {
        if (gap(bp) >= 0.0) {
            hi = bp;
            break;
        }
        lo = bp;
    }
    if (hi == kInf) {
        double slope = beta.top_rate() - alpha.long_run_rate();
        hi = lo - gap(lo) / slope;
        while (gap(hi) < 0.0) hi = lo + (hi - lo) * 2.0;
    }

    while (true) {
        double mid = lo + (hi - lo) / 2.0;
        if (mid <= lo || mid >= hi) break;
        (gap(mid) >= 0.0 ? hi : lo) = mid;
    }
    return hi;
}

ConvexCurve convolve(const ConvexCurve& a, const ConvexCurve& b) {
    if (a.is_unlimited()) return b;
    if (b.is_unlimited()) return a;

    double final_rate = std::min(a.top_rate(), b.top_rate());

    // Finite segments of both curves (slope, length). Segments at or above
    // the final tail slope are unreachable in the concatenation: they would
    // sort after the infinite tail (an exact tie merges into it seamlessly).
    struct Segment { double slope, length; };
    std::vector<Segment> segs;
    auto collect = [&](const ConvexCurve& c) {
        const auto& pieces = c.pieces();
        double start = pieces.front().latency;
        for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
            const auto& cur = pieces[k];
            const auto& nxt = pieces[k + 1];
            double end = (nxt.rate * nxt.latency - cur.rate * cur.latency) / (nxt.rate - cur.rate);
            if (cur.rate < final_rate) segs.push_back({cur.rate, end - start});
            start = end;
        }
    };
    collect(a);
    collect(b);
    std::stable_sort(segs.begin(), segs.end(),
                     [](const Segment& x, const Segment& y) { return x.slope < y.slope; });

    double t = a.pieces().front().latency + b.pieces().front().latency;
    double y = 0.0;
    std::vector<RateLatency> out;
    for (const auto& s : segs) {
        out.push_back({s.slope, std::max(0.0, t - y / s.slope)});
        t += s.length;
        y += s.slope * s.length;
    }
    out.push_back({final_rate, std::max(0.0, t - y / final_rate)});
    return ConvexCurve(std::move(out));
}

ConvexCurve residual_service(const ConvexCurve& beta, const ConcaveCurve& cross) {
    if (beta.is_unlimited()) return ConvexCurve::unlimited();
    if (!(cross.long_run_rate() < beta.top_rate())) {
        throw UnstableError("cross traffic rate reaches the service rate; residual is empty");
    }

    // d(t) = beta(t) - cross(t) is convex; the closure of [d]+ equals the
    // clamped maximum of the positive-slope segment lines of d.
    std::vector<double> bps = beta.breakpoints();
    for (double x : cross.breakpoints()) bps.push_back(x);
    bps.push_back(0.0);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    auto gap = [&](double t) { return beta.eval(t) - cross.eval(t); };

    std::vector<RateLatency> out;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        double d0 = gap(bps[i]);
        double d1 = gap(bps[i + 1]);
        double slope = (d1 - d0) / (bps[i + 1] - bps[i]);
        if (slope > 0.0) out.push_back({slope, std::max(0.0, bps[i] - d0 / slope)});
    }
    double last = bps.back();
    double slope = beta.top_rate() - cross.long_run_rate();
    out.push_back({slope, std::max(0.0, last - gap(last) / slope)});
    return ConvexCurve(std::move(out));
}

} // namespace tsnb
