#include <doctest.h>

#include "rbm/errors.hpp"
#include "rbm/mc.hpp"
#include "support.hpp"

using namespace rbm;
using namespace rbm::test;

namespace {

SimConfig small(std::uint64_t paths)
{
    SimConfig c;
    c.paths = paths;
    c.step = 2e-3;
    c.stop_left = 10.0;
    return c;
}

} // namespace

TEST_CASE("seeded runs are bit-identical, whatever the thread count")
{
    const auto p = params(-1.0, -1.0, 0.0);
    FunctionalSet fs;
    fs.boxes.push_back({{-0.5, 0.0}, {0.5, 1.0}});
    fs.intervals.push_back({-2.0, 1.0});
    fs.f_thetas.push_back({1.0, 0.0});
    fs.g_thetas.push_back(1.0);
    auto cfg = small(600);
    const auto a = simulate(p, cfg, fs);
    const auto b = simulate(p, cfg, fs);
    cfg.threads = 3;
    const auto c = simulate(p, cfg, fs);
    for (const auto* e : {&b, &c}) {
        CHECK(e->boxes[0].value == a.boxes[0].value);
        CHECK(e->boxes[0].std_error == a.boxes[0].std_error);
        CHECK(e->intervals[0].value == a.intervals[0].value);
        CHECK(e->f_values[0].value == a.f_values[0].value);
        CHECK(e->g_values[0].value == a.g_values[0].value);
        CHECK(e->g_values[0].std_error == a.g_values[0].std_error);
    }
    cfg.seed = 43;
    const auto d = simulate(p, cfg, fs);
    CHECK(d.boxes[0].value != a.boxes[0].value);
}

TEST_CASE("paths stay in the half-plane, local time never decreases, and Z1 drifts left")
{
    for (const auto& p : {params(-1.0, -1.0, 0.0), params(-0.3, -2.0, -0.1, {1.0, 0.5}),
                          params(-1.0, 0.5, 1.5)}) {
        SimConfig cfg;
        double mean_end = 0.0, mean_l = 0.0;
        const int n = 20;
        for (int i = 0; i < n; ++i) {
            const auto tr = trace_path(p, cfg, static_cast<std::uint64_t>(i), 20000);
            REQUIRE(tr.z.size() == tr.local_time.size());
            for (std::size_t k = 0; k < tr.z.size(); ++k) {
                CHECK(tr.z[k][1] >= 0.0);
                if (k > 0)
                    CHECK(tr.local_time[k] >= tr.local_time[k - 1]);
            }
            mean_end += tr.z.back()[0] / n;
            mean_l += tr.local_time.back() / n;
        }
        CHECK(mean_end < p.x[0] - 2.0);
        CHECK(mean_l >= 0.0);
        if (p.mu[1] < 0)
            CHECK(mean_l > 0.0);
    }
}

TEST_CASE("degenerate functionals are exactly zero")
{
    const auto p = params(-1.0, -1.0, 0.0);
    const auto cfg = small(200);
    const auto e = estimate_occupancy(p, cfg, {{0.0, 0.0}, {0.0, 1.0}});
    CHECK(e.value == 0.0);
    CHECK(e.std_error == 0.0);
    const auto i = estimate_boundary(p, cfg, {1.0, 1.0});
    CHECK(i.value == 0.0);
    CHECK(i.std_error == 0.0);
}

TEST_CASE("invalid requests are rejected")
{
    const auto p = params(-1.0, -1.0, 0.0);
    auto cfg = small(200);
    CHECK_THROWS_AS(estimate_occupancy(p, cfg, {{-40.0, 0.0}, {-35.0, 1.0}}), Error);
    CHECK_THROWS_AS(estimate_boundary(p, cfg, {-50.0, -40.0}), Error);
    try {
        estimate_mgf(p, cfg, {1 + sqrt2 + 1, 0.0}, MgfKind::TimeIntegral);
        FAIL("expected ThetaOutsideConvergence");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ThetaOutsideConvergence);
    }
    cfg.step = 0.5;
    CHECK_THROWS_AS(estimate_boundary(p, cfg, {0.0, 1.0}), Error);
    cfg = small(200);
    cfg.t_max = 1.0;
    try {
        estimate_boundary(p, cfg, {0.0, 1.0});
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
}

TEST_CASE("standard errors shrink like one over root N")
{
    const auto p = params(-1.0, -1.0, 0.0);
    const Box box{{-1.0, 0.0}, {1.0, 1.0}};
    const auto a = estimate_occupancy(p, small(1000), box);
    const auto b = estimate_occupancy(p, small(4000), box);
    const double ratio = b.std_error / a.std_error;
    CHECK(ratio > 0.5 * 0.8);
    CHECK(ratio < 0.5 * 1.2);
}

TEST_CASE("halving the step keeps f(1, 0) within two combined standard errors")
{
    const auto p = params(-1.0, -1.0, 0.0);
    auto cfg = small(2000);
    cfg.step = 2e-3;
    const auto a = estimate_mgf(p, cfg, {1.0, 0.0}, MgfKind::TimeIntegral);
    cfg.step = 1e-3;
    const auto b = estimate_mgf(p, cfg, {1.0, 0.0}, MgfKind::TimeIntegral);
    CHECK(std::abs(a.value - b.value) < 2.0 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("estimates agree with closed forms on a small run")
{
    const auto p = params(-1.0, -1.0, 0.0);
    FunctionalSet fs;
    fs.f_thetas.push_back({1.0, 0.0});
    fs.g_thetas.push_back(1.0);
    fs.intervals.push_back({-5.0, -4.0});
    const auto e = simulate(p, small(4000), fs);
    // Loose bands: the small run is only a smoke test of the estimators.
    CHECK(std::abs(e.f_values[0].value - 2.0) < 5 * e.f_values[0].std_error + 0.1);
    CHECK(std::abs(e.g_values[0].value - (1 + sqrt2)) < 5 * e.g_values[0].std_error + 0.15);
    CHECK(std::abs(e.intervals[0].value - 1.0) < 5 * e.intervals[0].std_error + 0.05);
    CHECK(e.f_values[0].paths == 4000);
    CHECK_FALSE(e.f_values[0].truncation_flagged);
}
