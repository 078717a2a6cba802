#pragma once

#include <vector>

#include "tsnbound/errors.hpp"

namespace tsnb {

// Relative tolerance for dominance and merge decisions during canonicalization.
inline constexpr double kCurveTolerance = 1e-9;

// |a - b| <= rel * max(|a|, |b|); exact equality covers zeros.
bool nearly_equal(double a, double b, double rel = kCurveTolerance);

// Affine traffic bound b + r*t (rate in bits/s, burst in bits).
struct TokenBucket {
    double rate = 0.0;
    double burst = 0.0;

    double value_at(double t) const { return burst + rate * t; }
};

// Service bound R*[t - T]+ (rate in bits/s, latency in seconds).
struct RateLatency {
    double rate = 0.0;
    double latency = 0.0;

    double value_at(double t) const { return t > latency ? rate * (t - latency) : 0.0; }
};

// Concave piecewise-linear arrival bound: minimum of token buckets.
//
// Canonical form: pieces sorted by strictly decreasing rate and strictly
// increasing burst, no piece dominated by the pointwise minimum of the others.
// The curve value is min_i(b_i + r_i*t) for t > 0. Evaluation at t = 0 returns
// the right-limit min_i b_i, so that the burst is visible to deviation
// computations.
class ConcaveCurve {
public:
    // The zero curve: one token bucket with no rate and no burst.
    ConcaveCurve() : pieces_{{0.0, 0.0}} {}
    explicit ConcaveCurve(std::vector<TokenBucket> pieces);
    ConcaveCurve(double rate, double burst);

    static ConcaveCurve zero() { return ConcaveCurve(); }

    const std::vector<TokenBucket>& pieces() const { return pieces_; }

    double eval(double t) const;
    double burst_at_origin() const { return pieces_.front().burst; }
    double long_run_rate() const { return pieces_.back().rate; }

    // Positive positions where the binding piece changes, ascending.
    std::vector<double> breakpoints() const;

    // inf{t >= 0 : value(t) >= y}, +infinity when y is never reached.
    double inverse(double y) const;

private:
    std::vector<TokenBucket> pieces_;
};

// Convex piecewise-linear service bound: maximum of rate-latency curves.
//
// Canonical form: pieces sorted by strictly increasing rate and strictly
// increasing latency, no dominated piece. An explicit "unlimited" variant
// (empty piece list) acts as the identity of convolve(); canonical piece
// lists never contain floating infinities.
class ConvexCurve {
public:
    // Default-constructed service is unlimited.
    ConvexCurve() = default;
    explicit ConvexCurve(std::vector<RateLatency> pieces);
    ConvexCurve(double rate, double latency);

    static ConvexCurve unlimited() { return ConvexCurve(); }
    bool is_unlimited() const { return pieces_.empty(); }

    const std::vector<RateLatency>& pieces() const { return pieces_; }

    double eval(double t) const;
    double top_rate() const;

    // Positions where the curve shape changes (start of service, then piece
    // handovers), ascending; excludes t = 0 unless the curve starts there.
    std::vector<double> breakpoints() const;

    // inf{t >= 0 : value(t) >= y}.
    double inverse(double y) const;

private:
    std::vector<RateLatency> pieces_;
};

// Greedy shaper attached to a link: a token bucket gamma_{C,L}, or unbounded
// when the link carries no capacity limit. Unbounded is the identity of
// shape().
class Shaper {
public:
    Shaper(double rate, double burst) : has_bucket_(true), bucket_{rate, burst} {}

    static Shaper unbounded() { return Shaper(); }
    bool is_unbounded() const { return !has_bucket_; }
    const TokenBucket& bucket() const { return bucket_; }

private:
    Shaper() = default;

    bool has_bucket_ = false;
    TokenBucket bucket_{};
};

// Pointwise sum of two arrival bounds, re-canonicalized.
ConcaveCurve add(const ConcaveCurve& a, const ConcaveCurve& b);

// Tightest arrival bound after a greedy shaper: min(alpha, sigma).
ConcaveCurve shape(const ConcaveCurve& alpha, const Shaper& sigma);

// Output bound after a server with delay bound d: alpha(t + d).
ConcaveCurve propagate(const ConcaveCurve& alpha, double delay);

// Maximum horizontal distance between alpha and beta: the FIFO delay bound.
double horizontal_deviation(const ConcaveCurve& alpha, const ConvexCurve& beta);

// Maximum vertical distance between alpha and beta: the backlog bound.
double vertical_deviation(const ConcaveCurve& alpha, const ConvexCurve& beta);

// Smallest t > 0 with beta(t) >= alpha(t): the arbitrary-multiplexing delay
// bound (time to clear the buffer). Returns the smallest representable time
// satisfying the condition.
double intersection_delay(const ConcaveCurve& alpha, const ConvexCurve& beta);

// Min-plus convolution of two service bounds (tandem concatenation).
ConvexCurve convolve(const ConvexCurve& a, const ConvexCurve& b);

// Left-over service under blind multiplexing: the non-decreasing closure of
// [beta(t) - cross(t)]+.
ConvexCurve residual_service(const ConvexCurve& beta, const ConcaveCurve& cross);

} // namespace tsnb
