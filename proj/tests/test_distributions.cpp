#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <numeric>

#include "deltaq/distributions.hpp"

using namespace deltaq;

TEST_CASE("exponential fractional moments are gamma values") {
    const auto d = ServiceDistribution::exponential(1.0);
    CHECK(d.moment(0.5) == doctest::Approx(0.88622692545275801365).epsilon(1e-14));
    CHECK(d.moment(1.5) == doctest::Approx(1.3293403881791370205).epsilon(1e-14));
    CHECK(d.moment(2.5) == doctest::Approx(3.3233509704478425512).epsilon(1e-14));
    CHECK(d.moment(0.0) == 1.0);
    CHECK(ServiceDistribution::exponential(2.0).moment(2.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("hyperexponential moments") {
    const auto d = ServiceDistribution::hyperexponential({0.5, 0.5}, {0.501, 250.5});
    CHECK(d.mean() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.moment(0.5) == doctest::Approx(0.65402832310419116476).epsilon(1e-13));
    CHECK(d.moment(1.5) == doctest::Approx(1.8745130058592101581).epsilon(1e-13));
    CHECK(d.moment(2.0) == doctest::Approx(3.9840638085107230648).epsilon(1e-13));
    CHECK(d.moment(3.0) == doctest::Approx(23.856574276596507584).epsilon(1e-13));
}

TEST_CASE("deterministic moments") {
    const auto d = ServiceDistribution::deterministic(2.0);
    CHECK(d.moment(1.5) == doctest::Approx(std::pow(2.0, 1.5)));
    Engine rng(1);
    CHECK(d.draw(rng) == 2.0);
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(ServiceDistribution::exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ServiceDistribution::deterministic(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(ServiceDistribution::hyperexponential({0.5, 0.4}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(ServiceDistribution::hyperexponential({0.5}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(ServiceDistribution::exponential(1.0).moment(3.5), std::domain_error);
    CHECK_THROWS_AS(ServiceDistribution::exponential(1.0).moment(-0.5), std::domain_error);
}

TEST_CASE("parse and round trip through to_string") {
    for (const char* spec : {"det:1", "exp:1", "hyperexp:0.5,0.5:0.501,250.5"}) {
        const auto d = ServiceDistribution::parse(spec);
        const auto again = ServiceDistribution::parse(d.to_string());
        CHECK(again.moment(1.5) == d.moment(1.5));
    }
    CHECK_THROWS(ServiceDistribution::parse("weibull:2"));
    CHECK_THROWS(ServiceDistribution::parse("exp:"));
}

TEST_CASE("sample mean matches the analytic mean") {
    Engine rng = substream(11, 0);
    const auto d = ServiceDistribution::hyperexponential({0.5, 0.5}, {0.501, 250.5});
    const auto s = d.sample(400000, rng);
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    // sd of S is about 1.996
    CHECK(std::abs(mean - 1.0) < 4.0 * 1.996 / std::sqrt(400000.0));
}
