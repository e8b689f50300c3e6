#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "deltaq/errors.hpp"
#include "deltaq/fpt_density.hpp"
#include "deltaq/scaling.hpp"
#include "deltaq/series_acceleration.hpp"

using namespace deltaq;

namespace {

DiffusionParams make(double q, double beta, double gamma, double sigma2) {
    DiffusionParams p;
    p.q = q;
    p.beta = beta;
    p.gamma = gamma;
    p.sigma = std::sqrt(sigma2);
    return p;
}

}  // namespace

TEST_CASE("density matches high-precision reference values") {
    // 30-digit quadrature of the Airy representation.
    const FptDensity f(make(1.0, 1.0, 0.5, 2.0));
    CHECK(f.density(0.05) == doctest::Approx(0.103297092314140).epsilon(1e-9));
    CHECK(f.density(0.2) == doctest::Approx(0.562044670056407).epsilon(1e-9));
    CHECK(f.density(1.0) == doctest::Approx(0.208547309946482).epsilon(1e-9));
    CHECK(f.evaluate(1.0).abs_error < 1e-8);
}

TEST_CASE("density is zero at and before the origin and decays") {
    const FptDensity f(make(1.0, 1.0, 0.5, 2.0));
    CHECK(f.density(0.0) == 0.0);
    CHECK(f.density(-1.0) == 0.0);
    CHECK(f.density(1e-3) < 1e-9);
    CHECK(f.density(50.0) < 1e-30);
}

TEST_CASE("density integrates to one") {
    const auto h = ServiceDistribution::hyperexponential({0.5, 0.5}, {0.501, 250.5});
    const auto e = ServiceDistribution::exponential(1.0);
    for (const auto& p : {make(1.0, 1.0, 0.5, 2.0), make(1.0, 1.0, 0.5, 1.0), make(1.0, 1.0, 1.5, 1.5),
                          make(0.3, -2.0, 0.5, 2.0), make(2.0, 3.0, 0.2, 0.5),
                          diffusion_params(h, 1.0, analytic_lambda(h, 1.0), 1.0, 1.0),
                          diffusion_params(e, 0.5, analytic_lambda(e, 0.5), 1.0, 1.0)}) {
        CAPTURE(p.gamma);
        CAPTURE(p.sigma);
        CHECK(std::abs(FptDensity(p).total_mass() - 1.0) < 1e-6);
    }
}

TEST_CASE("means of the limit busy period") {
    CHECK(FptDensity(make(1.0, 1.0, 0.5, 1.0)).mean() == doctest::Approx(2.33844).epsilon(5e-5));
    CHECK(FptDensity(make(1.0, 1.0, 0.5, 2.0)).mean() == doctest::Approx(2.00405).epsilon(5e-5));
    CHECK(FptDensity(make(1.0, 1.0, 1.5, 1.5)).mean() == doctest::Approx(1.04409).epsilon(5e-5));
}

TEST_CASE("cdf is consistent with the density") {
    const FptDensity f(make(1.0, 1.0, 0.5, 2.0));
    const double h = 1e-4;
    for (double t : {0.3, 1.0, 2.5}) {
        CAPTURE(t);
        const double slope = (f.cdf(t + h) - f.cdf(t - h)) / (2.0 * h);
        CHECK(slope == doctest::Approx(f.density(t)).epsilon(1e-6));
    }
    const TabulatedCdf table = f.tabulate_cdf();
    double prev = 0.0;
    for (double t = 0.0; t < 12.0; t += 0.137) {
        const double v = table(t);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(table(1.7) == doctest::Approx(f.cdf(1.7)).epsilon(1e-7));
    CHECK(table(-1.0) == 0.0);
    CHECK(table(1e6) == 1.0);
}

TEST_CASE("time scaling for general gamma") {
    // Doubling gamma and sigma^2 together with q, beta rescaled by tau maps
    // onto the same standardized problem.
    const FptDensity a(make(1.0, 1.0, 0.5, 2.0));
    const FptDensity b(make(1.0, 1.0, 4.0, 2.0));
    CHECK(a.tau() == doctest::Approx(1.0));
    CHECK(b.tau() == doctest::Approx(0.5));
    CHECK(b.standard_q() == doctest::Approx(2.0));
    CHECK(b.standard_beta() == doctest::Approx(0.5));
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(FptDensity(make(0.0, 1.0, 0.5, 2.0)), std::invalid_argument);
    CHECK_THROWS_AS(FptDensity(make(1.0, 1.0, 0.5, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(FptDensity(make(1.0, 1.0, 0.0, 2.0)), std::invalid_argument);
}

TEST_CASE("Wynn epsilon accelerates an alternating series") {
    WynnEpsilon acc;
    double partial = 0.0;
    for (int k = 1; k <= 20; ++k) {
        partial += (k % 2 ? 1.0 : -1.0) / k;
        acc.push(partial);
    }
    CHECK(std::abs(partial - std::log(2.0)) > 1e-2);
    CHECK(std::abs(acc.estimate() - std::log(2.0)) < 1e-10);
    CHECK(acc.size() == 20);
}
