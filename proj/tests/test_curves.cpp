#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tsnbound/curves.hpp"

using namespace tsnb;
using testutil::rel_close;

namespace {

bool same_pieces(const ConcaveCurve& a, const ConcaveCurve& b, double rel = 1e-12) {
    if (a.pieces().size() != b.pieces().size()) return false;
    for (std::size_t i = 0; i < a.pieces().size(); ++i) {
        if (!rel_close(a.pieces()[i].rate, b.pieces()[i].rate, rel)) return false;
        if (!rel_close(a.pieces()[i].burst, b.pieces()[i].burst, rel)) return false;
    }
    return true;
}

bool same_pieces(const ConvexCurve& a, const ConvexCurve& b, double rel = 1e-12) {
    if (a.is_unlimited() != b.is_unlimited()) return false;
    if (a.pieces().size() != b.pieces().size()) return false;
    for (std::size_t i = 0; i < a.pieces().size(); ++i) {
        if (!rel_close(a.pieces()[i].rate, b.pieces()[i].rate, rel)) return false;
        if (!rel_close(a.pieces()[i].latency, b.pieces()[i].latency, rel)) return false;
    }
    return true;
}

} // namespace

TEST_CASE("concave evaluation") {
    ConcaveCurve two_piece({{1e4, 80.0}, {5e5, 16000.0}});
    CHECK(two_piece.eval(1.0) == doctest::Approx(10080.0).epsilon(1e-12));

    ConcaveCurve zero_burst(1e4, 0.0);
    CHECK(zero_burst.eval(0.0) == 0.0);

    ConcaveCurve f0(1e4, 80.0);
    CHECK(f0.eval(50e-6) == doctest::Approx(80.5).epsilon(1e-12));
    CHECK(f0.eval(0.0) == 80.0); // right limit: the burst is visible at 0+

    CHECK_THROWS_AS(f0.eval(-1e-9), DomainError);
}

TEST_CASE("concave canonical form") {
    // The steeper, larger-burst piece never binds for t > 0.
    ConcaveCurve dominated({{1e4, 80.0}, {5e5, 16000.0}});
    REQUIRE(dominated.pieces().size() == 1);
    CHECK(dominated.pieces()[0].rate == 1e4);

    // Equal bursts: only the shallower line survives.
    ConcaveCurve equal_burst({{2.0, 5.0}, {1.0, 5.0}});
    REQUIRE(equal_burst.pieces().size() == 1);
    CHECK(equal_burst.pieces()[0].rate == 1.0);

    // A middle piece above the envelope of its neighbours disappears.
    ConcaveCurve middle({{10.0, 0.0}, {5.0, 100.0}, {1.0, 110.0}});
    CHECK(middle.pieces().size() == 2);

    CHECK_THROWS_AS(ConcaveCurve(std::vector<TokenBucket>{}), DomainError);
    CHECK_THROWS_AS(ConcaveCurve(-1.0, 0.0), DomainError);
}

TEST_CASE("convex evaluation") {
    ConvexCurve single(4e6, 10e-6);
    CHECK(single.eval(10e-6) == 0.0);
    CHECK(single.eval(50e-6) == doctest::Approx(160.0).epsilon(1e-12));

    ConvexCurve two_piece({{4e6, 10e-6}, {5e7, 1e-3}});
    CHECK(two_piece.eval(2e-3) == doctest::Approx(50000.0).epsilon(1e-12));

    CHECK_THROWS_AS(single.eval(-1e-9), DomainError);
    CHECK_THROWS_AS(ConvexCurve(0.0, 1.0), DomainError);
}

TEST_CASE("convex canonical form drops hidden pieces") {
    // The shallow piece is entirely below zero where it would bind.
    ConvexCurve hidden({{50.0, 0.1}, {4.0, 0.2}});
    REQUIRE(hidden.pieces().size() == 1);
    CHECK(hidden.pieces()[0].rate == 50.0);

    // Equal-rate pieces collapse to the smaller latency.
    ConvexCurve equal_rate({{10.0, 2.0}, {10.0, 1.0}});
    REQUIRE(equal_rate.pieces().size() == 1);
    CHECK(equal_rate.pieces()[0].latency == 1.0);
}

TEST_CASE("addition of arrival bounds") {
    ConcaveCurve f0(1e4, 80.0);
    ConcaveCurve sum = add(f0, f0);
    REQUIRE(sum.pieces().size() == 1);
    CHECK(sum.pieces()[0].rate == doctest::Approx(2e4).epsilon(1e-12));
    CHECK(sum.pieces()[0].burst == doctest::Approx(160.0).epsilon(1e-12));

    CHECK(same_pieces(add(f0, ConcaveCurve::zero()), f0));

    ConcaveCurve left({{1.0, 10.0}, {0.5, 12.0}});
    ConcaveCurve right(1.0, 5.0);
    ConcaveCurve expected({{2.0, 15.0}, {1.5, 17.0}});
    CHECK(same_pieces(add(left, right), expected));
}

TEST_CASE("shaping") {
    ConcaveCurve aggregate(2e4, 160.5);
    CHECK(same_pieces(shape(aggregate, Shaper(1e8, 400.0)), aggregate));

    ConcaveCurve any({{1e4, 80.0}, {5e3, 120.0}});
    CHECK(same_pieces(shape(any, Shaper::unbounded()), any));

    ConcaveCurve big(1e6, 1e6);
    ConcaveCurve shaped = shape(big, Shaper(1e7, 100.0));
    ConcaveCurve expected({{1e7, 100.0}, {1e6, 1e6}});
    CHECK(same_pieces(shaped, expected));
}

TEST_CASE("horizontal deviation") {
    ConvexCurve demo_service({{4e6, 10e-6}, {5e7, 1e-3}});
    CHECK(rel_close(horizontal_deviation(ConcaveCurve(2e4, 160.0), demo_service), 50e-6, 1e-12));
    CHECK(rel_close(horizontal_deviation(ConcaveCurve(2e4, 160.5), demo_service), 50.125e-6, 1e-12));

    // Zero burst leaves only the latency.
    CHECK(rel_close(horizontal_deviation(ConcaveCurve(1e4, 0.0), ConvexCurve(4e6, 10e-6)), 10e-6,
                    1e-12));

    // The maximum can sit at a service-curve corner, not an arrival corner.
    ConcaveCurve steady(5.0, 1.0);
    ConvexCurve kinked({{1.0, 0.0}, {10.0, 1.0}});
    CHECK(rel_close(horizontal_deviation(steady, kinked), 49.0 / 45.0, 1e-12));

    CHECK_THROWS_AS(horizontal_deviation(ConcaveCurve(10.0, 5.0), ConvexCurve(10.0, 1.0)),
                    UnstableError);
    CHECK(horizontal_deviation(steady, ConvexCurve::unlimited()) == 0.0);
}

TEST_CASE("vertical deviation") {
    CHECK(rel_close(vertical_deviation(ConcaveCurve(2e4, 160.0), ConvexCurve(4e6, 10e-6)), 160.2,
                    1e-12));
    CHECK(vertical_deviation(ConcaveCurve(3.0, 42.0), ConvexCurve(5.0, 0.0)) == 42.0);
    CHECK(rel_close(vertical_deviation(ConcaveCurve(1.0, 10.0), ConvexCurve(2.0, 5.0)), 15.0,
                    1e-12));
    CHECK_THROWS_AS(vertical_deviation(ConcaveCurve(10.0, 5.0), ConvexCurve(10.0, 1.0)),
                    UnstableError);
}

TEST_CASE("intersection delay") {
    double expected = 200.0 / 3.98e6;
    CHECK(rel_close(intersection_delay(ConcaveCurve(2e4, 160.0), ConvexCurve(4e6, 10e-6)),
                    expected, 1e-9));
    CHECK(rel_close(intersection_delay(ConcaveCurve(1.0, 4.0), ConvexCurve(2.0, 0.0)), 4.0, 1e-9));

    // With zero burst the crossing sits at R*T/(R - r), reaching T as r -> 0.
    CHECK(rel_close(intersection_delay(ConcaveCurve(1.0, 0.0), ConvexCurve(4.0, 3.0)),
                    4.0 * 3.0 / (4.0 - 1.0), 1e-9));

    // Defining property at the returned point.
    ConcaveCurve alpha(2e4, 160.0);
    ConvexCurve beta({{4e6, 10e-6}, {5e7, 1e-3}});
    double t = intersection_delay(alpha, beta);
    CHECK(beta.eval(t) >= alpha.eval(t));
    double eps = 1e-12 * t;
    CHECK(beta.eval(t - eps) < alpha.eval(t - eps));

    CHECK_THROWS_AS(intersection_delay(ConcaveCurve(10.0, 5.0), ConvexCurve(10.0, 1.0)),
                    UnstableError);
}

TEST_CASE("propagation through a delay") {
    ConcaveCurve f0(1e4, 80.0);
    ConcaveCurve shifted = propagate(f0, 50e-6);
    REQUIRE(shifted.pieces().size() == 1);
    CHECK(shifted.pieces()[0].burst == doctest::Approx(80.5).epsilon(1e-12));

    CHECK(same_pieces(propagate(f0, 0.0), f0));

    ConcaveCurve multi({{2.0, 1.0}, {1.0, 3.0}});
    ConcaveCurve expected({{2.0, 3.0}, {1.0, 4.0}});
    CHECK(same_pieces(propagate(multi, 1.0), expected));

    CHECK_THROWS_AS(propagate(f0, -1e-9), DomainError);
}

TEST_CASE("service convolution") {
    ConvexCurve a(4e6, 10e-6);
    ConvexCurve b(5e7, 1e-3);
    ConvexCurve tandem = convolve(a, b);
    REQUIRE(tandem.pieces().size() == 1);
    CHECK(tandem.pieces()[0].rate == doctest::Approx(4e6).epsilon(1e-12));
    CHECK(tandem.pieces()[0].latency == doctest::Approx(1.01e-3).epsilon(1e-12));

    CHECK(same_pieces(convolve(a, ConvexCurve::unlimited()), a));
    CHECK(same_pieces(convolve(ConvexCurve::unlimited(), b), b));

    ConvexCurve equal = convolve(ConvexCurve(2.0, 1.0), ConvexCurve(2.0, 2.0));
    REQUIRE(equal.pieces().size() == 1);
    CHECK(equal.pieces()[0].latency == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("residual service") {
    ConvexCurve beta(4e6, 10e-6);
    ConvexCurve left_over = residual_service(beta, ConcaveCurve(1e4, 80.0));
    REQUIRE(left_over.pieces().size() == 1);
    CHECK(left_over.pieces()[0].rate == doctest::Approx(3.99e6).epsilon(1e-12));
    CHECK(left_over.pieces()[0].latency == doctest::Approx(120.0 / 3.99e6).epsilon(1e-12));

    CHECK(same_pieces(residual_service(beta, ConcaveCurve::zero()), beta));

    ConvexCurve simple = residual_service(ConvexCurve(2.0, 0.0), ConcaveCurve(1.0, 2.0));
    REQUIRE(simple.pieces().size() == 1);
    CHECK(simple.pieces()[0].rate == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(simple.pieces()[0].latency == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(residual_service(ConvexCurve(2.0, 0.0), ConcaveCurve(2.0, 1.0)),
                    UnstableError);
}

TEST_CASE("convolution interleaves multi-piece segments by slope") {
    // max(b_{1,0}, b_{2,1}) convolved with b_{3,0.5}: the slope-1 segment of
    // length 2 runs first from the summed latency, then the slope-2 tail.
    ConvexCurve a({{1.0, 0.0}, {2.0, 1.0}});
    ConvexCurve b(3.0, 0.5);
    ConvexCurve tandem = convolve(a, b);
    REQUIRE(tandem.pieces().size() == 2);
    CHECK(tandem.pieces()[0].rate == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tandem.pieces()[0].latency == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tandem.pieces()[1].rate == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(tandem.pieces()[1].latency == doctest::Approx(1.5).epsilon(1e-12));

    // Spot check against the defining infimum.
    CHECK(tandem.eval(1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tandem.eval(3.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("residual service against a multi-bucket cross flow") {
    // d(t) = 2t - min(2+t, 3+0.5t) stays below zero until t = 2 and then
    // rises with slope 1.5; the slope-1 stretch is hidden by the clamp.
    ConvexCurve beta(2.0, 0.0);
    ConcaveCurve cross({{1.0, 2.0}, {0.5, 3.0}});
    ConvexCurve left_over = residual_service(beta, cross);
    REQUIRE(left_over.pieces().size() == 1);
    CHECK(left_over.pieces()[0].rate == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(left_over.pieces()[0].latency == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("canonicalization is idempotent") {
    SplitMix64 rng(2024);
    for (int i = 0; i < 500; ++i) {
        ConcaveCurve alpha(testutil::random_concave_pieces(rng));
        ConcaveCurve again(alpha.pieces());
        CHECK(same_pieces(alpha, again, 0.0));

        ConvexCurve beta(testutil::random_convex_pieces(rng));
        ConvexCurve beta_again(beta.pieces());
        CHECK(same_pieces(beta, beta_again, 0.0));
    }
}

TEST_CASE("canonical form evaluates like the raw piece list") {
    SplitMix64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        auto raw_concave = testutil::random_concave_pieces(rng);
        ConcaveCurve alpha(raw_concave);
        auto raw_convex = testutil::random_convex_pieces(rng);
        ConvexCurve beta(raw_convex);
        for (int k = 0; k < 100; ++k) {
            double t = rng.next_double() * 10.0;
            double raw_min = std::numeric_limits<double>::infinity();
            for (const auto& p : raw_concave) raw_min = std::min(raw_min, p.value_at(t));
            if (t == 0.0) continue;
            CHECK(rel_close(alpha.eval(t), raw_min, 1e-12));

            double raw_max = 0.0;
            for (const auto& p : raw_convex) raw_max = std::max(raw_max, p.value_at(t));
            CHECK(rel_close(beta.eval(t), raw_max, 1e-12));
        }
    }
}

TEST_CASE("deviations match the dense-grid oracles") {
    SplitMix64 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto [alpha, beta] = testutil::random_stable_pair(rng);
        CHECK(rel_close(horizontal_deviation(alpha, beta), testutil::grid_h_dev(alpha, beta, 4000),
                        1e-6));
        CHECK(rel_close(vertical_deviation(alpha, beta), testutil::grid_v_dev(alpha, beta, 4000),
                        1e-6));
    }
}

TEST_CASE("shaping conserves service at the bound level") {
    SplitMix64 rng(13);
    for (int i = 0; i < 300; ++i) {
        auto [alpha, beta] = testutil::random_stable_pair(rng);
        Shaper sigma(testutil::random_sig4(rng, 5, 8), testutil::random_sig4(rng, 0, 4));
        ConcaveCurve shaped = shape(alpha, sigma);

        for (double t : testutil::oracle_grid(alpha, beta, 200)) {
            CHECK(shaped.eval(t) <= alpha.eval(t) * (1.0 + 1e-12));
        }
        if (shaped.long_run_rate() < beta.top_rate()) {
            CHECK(horizontal_deviation(shaped, beta) <=
                  horizontal_deviation(alpha, beta) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("deviation monotonicity") {
    SplitMix64 rng(17);
    for (int i = 0; i < 300; ++i) {
        auto [alpha, beta] = testutil::random_stable_pair(rng);
        // alpha' >= alpha pointwise.
        ConcaveCurve bigger = add(alpha, ConcaveCurve(testutil::random_sig4(rng, 0, 2),
                                                      testutil::random_sig4(rng, 0, 3)));
        if (bigger.long_run_rate() < beta.top_rate()) {
            CHECK(horizontal_deviation(alpha, beta) <=
                  horizontal_deviation(bigger, beta) * (1.0 + 1e-12));
        }
        // beta' >= beta pointwise: one extra strong piece.
        auto pieces = beta.pieces();
        pieces.push_back({beta.top_rate() * 2.0, beta.pieces().front().latency / 2.0});
        ConvexCurve better(pieces);
        CHECK(horizontal_deviation(alpha, better) <=
              horizontal_deviation(alpha, beta) * (1.0 + 1e-12));
    }
}

TEST_CASE("FIFO bound never exceeds the arbitrary-multiplexing bound") {
    SplitMix64 rng(19);
    for (int i = 0; i < 300; ++i) {
        auto [alpha, beta] = testutil::random_stable_pair(rng);
        CHECK(horizontal_deviation(alpha, beta) <=
              intersection_delay(alpha, beta) * (1.0 + 1e-9));
    }
}

TEST_CASE("convolution is commutative and associative") {
    SplitMix64 rng(23);
    for (int i = 0; i < 300; ++i) {
        ConvexCurve a(testutil::random_convex_pieces(rng));
        ConvexCurve b(testutil::random_convex_pieces(rng));
        ConvexCurve c(testutil::random_convex_pieces(rng));
        CHECK(same_pieces(convolve(a, b), convolve(b, a)));
        CHECK(same_pieces(convolve(convolve(a, b), c), convolve(a, convolve(b, c))));
    }
}
