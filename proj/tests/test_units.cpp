#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "support.hpp"
#include "tsnbound/generators.hpp"
#include "tsnbound/units.hpp"

using namespace tsnb;

TEST_CASE("quantity parsing normalizes exactly") {
    CHECK(parse_quantity("10us", Dimension::Time) == 10e-6);
    CHECK(parse_quantity("4Mbps", Dimension::Rate) == 4e6);
    CHECK(parse_quantity(10.0, Dimension::Time, "us") == 10e-6);
    CHECK(parse_quantity("0s", Dimension::Time) == 0.0);
    CHECK(parse_quantity("2kB", Dimension::Data) == 16000.0);
    CHECK(parse_quantity("10B", Dimension::Data) == 80.0);
    CHECK(parse_quantity("10kbps", Dimension::Rate) == 1e4);
    CHECK(parse_quantity(" 50Mbps ", Dimension::Rate) == 5e7);
    CHECK(parse_quantity("0.5", Dimension::Rate, "kbps") == 500.0);
}

TEST_CASE("quantity parsing failures") {
    CHECK_THROWS_AS(parse_quantity("10parsec", Dimension::Time), ParseError);
    // Known unit of the wrong dimension.
    CHECK_THROWS_AS(parse_quantity("10us", Dimension::Rate), ParseError);
    CHECK_THROWS_AS(parse_quantity("10B", Dimension::Time), ParseError);
    // Bare number with nothing in scope.
    CHECK_THROWS_AS(parse_quantity(10.0, Dimension::Time), ParseError);
    CHECK_THROWS_AS(parse_quantity("10", Dimension::Time), ParseError);
    CHECK_THROWS_AS(parse_quantity("", Dimension::Time), ParseError);
    CHECK_THROWS_AS(parse_quantity("abc", Dimension::Time, "us"), ParseError);
    CHECK_THROWS_AS(parse_quantity("-5us", Dimension::Time), ParseError);
    // Case matters: b is bits, B is bytes, Mb != MB.
    CHECK(parse_quantity("1Mb", Dimension::Data) == 1e6);
    CHECK(parse_quantity("1MB", Dimension::Data) == 8e6);
    CHECK_THROWS_AS(parse_quantity("1mb", Dimension::Data), ParseError);
}

TEST_CASE("formatted quantities parse back to the same value") {
    SplitMix64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        double value = testutil::random_sig4(rng, -9, 9);
        for (Dimension dim : {Dimension::Time, Dimension::Data, Dimension::Rate}) {
            const char* pretty = dim == Dimension::Time ? "us"
                                 : dim == Dimension::Data ? "B"
                                                          : "Mbps";
            std::string text = format_quantity(value, dim, pretty);
            CHECK(parse_quantity(text, dim) == value);
        }
    }
}

TEST_CASE("format_double is shortest round-trip") {
    SplitMix64 rng(123);
    for (int i = 0; i < 5000; ++i) {
        double v = rng.next_double() * std::pow(10.0, static_cast<double>(rng.below(20)) - 10.0);
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(100.0) == "100");
}
