#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <cstdlib>
#include <sstream>

#include "deltaq/io.hpp"

using namespace deltaq;

TEST_CASE("doubles round-trip with 17 significant digits") {
    for (double x : {0.1, 1.0 / 3.0, 2.0038, 1e-300, -123456.789012345678}) {
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(INFINITY) == "inf");
}

TEST_CASE("path CSV") {
    EmbeddedPath p;
    p.arrivals = {0, 2, 0};
    p.unreflected = {1, 2, 1};
    p.queue = {1, 2, 1};
    p.served_order = {-1, 5, 0};
    p.parent = {5, -1, -1, -1, -1, -1};
    std::ostringstream os;
    write_path_csv(os, p);
    CHECK(os.str() == "k,A,N,Q,served_index,parent_index\n0,0,1,1,-1,-1\n1,2,2,2,5,-1\n2,0,1,1,0,5\n");
}

TEST_CASE("busy-period CSV") {
    std::vector<BusyPeriodRecord> r(2);
    r[0].customers_served = 3;
    r[0].scaled_value = 0.5;
    r[1].customers_served = 7;
    r[1].scaled_value = 7.0 / 3.0;
    std::ostringstream os;
    write_busy_periods_csv(os, r);
    CHECK(os.str() == "replication,bp,scaled_bp\n0,3,0.5\n1,7,2.3333333333333335\n");
}

TEST_CASE("column CSV checks shapes") {
    std::ostringstream os;
    write_columns_csv(os, {"t", "f"}, {{0.0, 1.0}, {0.5, 0.25}});
    CHECK(os.str() == "t,f\n0,0.5\n1,0.25\n");
    CHECK_THROWS(write_columns_csv(os, {"t"}, {{0.0}, {1.0}}));
    CHECK_THROWS(write_columns_csv(os, {"t", "f"}, {{0.0}, {1.0, 2.0}}));
}

TEST_CASE("distribution JSON") {
    const auto h = ServiceDistribution::hyperexponential({0.5, 0.5}, {0.501, 250.5});
    const nlohmann::json j = distribution_to_json(h);
    CHECK(j.at("kind") == "hyperexponential");
    CHECK(j.at("rates")[1] == 250.5);
    CHECK(distribution_from_json(j).moment(2.0) == h.moment(2.0));
    CHECK(distribution_from_json(nlohmann::json("exp:2")).mean() == doctest::Approx(0.5));
    CHECK(distribution_from_json(nlohmann::json::parse(R"({"kind":"deterministic","value":3})")).mean() == 3.0);
    CHECK_THROWS(distribution_from_json(nlohmann::json::parse(R"({"kind":"pareto"})")));
}

TEST_CASE("diffusion parameters and summary JSON") {
    DiffusionParams p;
    p.q = 2.0;
    p.beta = -1.0;
    p.gamma = 0.25;
    p.sigma = 1.5;
    const nlohmann::json j = p;
    CHECK(j.dump() == R"({"beta":-1.0,"gamma":0.25,"q":2.0,"sigma":1.5})");
    const auto back = j.get<DiffusionParams>();
    CHECK(back.q == 2.0);
    CHECK(back.sigma == 1.5);
    McSummary s;
    s.count = 1;
    s.mean = 3.0;
    const nlohmann::json js = s;
    CHECK(js.at("degenerate_ci") == true);
    CHECK(js.at("ci95").size() == 2);
}
