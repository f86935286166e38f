#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <vector>

#include "suprad/bifurcation.hpp"

using namespace suprad;
using Catch::Approx;

namespace {

bool throws_kind(errc want, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const error& e) {
        return e.kind() == want;
    }
    return false;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

} // namespace

TEST_CASE("sweep traces the closed exponential branch") {
    const growth_model model = growth_model::pure_exp();
    const weight w = weight::constant();
    const branch br = sweep(model, w, linspace(0.1, 6.0, 60));

    REQUIRE(br.size() == 60);
    for (std::size_t i = 0; i < br.size(); ++i) {
        const branch_point& pt = br.points[i];
        if (i > 0) CHECK(pt.mu > br.points[i - 1].mu);
        const double a = std::exp(0.5 * pt.mu) - 1.0;
        const double lam_ref = 8.0 * a / ((1.0 + a) * (1.0 + a));
        CHECK(std::exp(pt.log_lambda) == Approx(lam_ref).epsilon(1e-9));
        CHECK(pt.total_energy == Approx(4.0 * a / (1.0 + a)).epsilon(1e-8));
        CHECK(pt.bubble_count == 1);
        CHECK(pt.residual < 1e-9);
    }

    // the branch leaves the origin with slope 4
    const branch toe = sweep(model, w, {0.001, 0.002});
    for (const branch_point& pt : toe.points)
        CHECK(std::exp(pt.log_lambda) / (4.0 * pt.mu) == Approx(1.0).margin(3e-3));

    CHECK(sweep(model, w, {}).size() == 0);
}

TEST_CASE("sweep is deterministic across thread counts") {
    const growth_model model = growth_model::pure_exp();
    const weight w = weight::constant();
    const std::vector<double> grid = linspace(0.5, 4.0, 12);

    const branch par = sweep(model, w, grid);
    ::setenv("SUPRAD_THREADS", "1", 1);
    const branch ser = sweep(model, w, grid);
    ::unsetenv("SUPRAD_THREADS");

    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par.points[i].log_lambda == ser.points[i].log_lambda);
        CHECK(par.points[i].total_energy == ser.points[i].total_energy);
    }
}

TEST_CASE("sweep rejects malformed grids and annotates shot failures") {
    const growth_model model = growth_model::pure_exp();
    const weight w = weight::constant();

    CHECK(throws_kind(errc::domain, [&] { (void)sweep(model, w, {1.0, 1.0}); }));
    CHECK(throws_kind(errc::domain, [&] { (void)sweep(model, w, {2.0, 1.0}); }));
    CHECK(throws_kind(errc::domain, [&] {
        (void)sweep(model, w, {std::nan(""), 1.0});
    }));

    try {
        (void)sweep(model, w, {1.0, 2000.0});
        FAIL("expected a budget failure");
    } catch (const error& e) {
        CHECK(e.kind() == errc::precision);
        CHECK(std::string(e.what()).rfind("mu=2e+03: ", 0) == 0);
    }
}

TEST_CASE("closed-family turning point lands on the known apex") {
    const growth_model model = growth_model::pure_exp();
    const weight w = weight::constant();
    const branch br = sweep(model, w, linspace(0.1, 6.0, 60));
    const auto tps = turning_points(br, model, w);

    REQUIRE(tps.size() == 1);
    const turning_point& tp = tps[0];
    CHECK(tp.mu == Approx(2.0 * std::log(2.0)).margin(1e-4));
    CHECK(std::exp(tp.log_lambda) == Approx(2.0).margin(1e-6));
    CHECK(tp.shots <= 40);
    CHECK(tp.bracket_hi - tp.bracket_lo < 1.01e-5);
    CHECK(tp.bracket_lo <= tp.mu);
    CHECK(tp.mu <= tp.bracket_hi);
    // apex certificate: rising into the point, falling out of it
    CHECK(tp.slope_lo > 0.0);
    CHECK(tp.slope_hi < 0.0);

    CHECK(throws_kind(errc::domain, [&] {
        branch two;
        two.points = {br.points[0], br.points[1]};
        (void)turning_points(two, model, w);
    }));
    CHECK(throws_kind(errc::domain, [&] {
        turning_options bad;
        bad.mu_width = 0.0;
        (void)turning_points(br, model, w, {}, bad);
    }));
    CHECK(throws_kind(errc::domain, [&] {
        turning_options bad;
        bad.max_shots = 4;
        (void)turning_points(br, model, w, {}, bad);
    }));
}

TEST_CASE("oscillating branch certifies a fall and a rise") {
    const growth_model model = growth_model::power_exp(3.0);
    const weight w = weight::constant();
    const branch br = sweep(model, w, linspace(1.2, 5.2, 81));
    const auto tps = turning_points(br, model, w);

    REQUIRE(tps.size() >= 2);
    // first extremum is a trough, second a crest, lambda staying positive
    CHECK(tps[0].slope_lo < 0.0);
    CHECK(tps[0].slope_hi > 0.0);
    CHECK(tps[1].slope_lo > 0.0);
    CHECK(tps[1].slope_hi < 0.0);
    CHECK(tps[0].mu < tps[1].mu);
    CHECK(std::exp(tps[0].log_lambda) > 0.8);
    CHECK(std::exp(tps[0].log_lambda) < 0.9);
    CHECK(std::exp(tps[1].log_lambda) > 1.8);
    CHECK(std::exp(tps[1].log_lambda) < 1.9);
    for (const turning_point& tp : tps) CHECK(tp.shots <= 40);

    // layer count grows across the swept range
    CHECK(br.points.front().bubble_count == 1);
    CHECK(br.points.back().bubble_count == 2);
}

TEST_CASE("monotone tail has no turning points") {
    const growth_model model = growth_model::power_exp(1.5);
    const weight w = weight::constant();
    const branch br = sweep(model, w, linspace(14.0, 54.0, 21));

    for (std::size_t i = 1; i < br.size(); ++i)
        CHECK(br.points[i].log_lambda < br.points[i - 1].log_lambda);
    CHECK(turning_points(br, model, w).empty());
}

TEST_CASE("slow-growth report approaches its limits monotonically") {
    const growth_model model = growth_model::power_exp(1.5);
    const weight w = weight::constant();
    std::vector<double> ladder;
    for (double g : {50.0, 120.0, 250.0, 400.0}) ladder.push_back(std::pow(g, 1.0 / 1.5));
    const subcritical_report rep = subcritical_check(model, w, ladder, {0.25, 0.5, 0.75});

    CHECK(rep.p == Approx(1.5));
    CHECK(rep.lambda_exponent_target == Approx(0.25));
    CHECK(rep.monotone);
    CHECK(rep.detail.empty());
    REQUIRE(rep.rows.size() == 4);
    REQUIRE(rep.radii.size() == 3);

    const subcritical_row& last = rep.rows.back();
    CHECK(std::abs(last.lambda_exponent - 0.25) < 0.05);
    CHECK(last.mass_f == Approx(4.0).margin(0.3));
    CHECK(last.mass_fprime == Approx(4.0).margin(0.3));
    for (double ratio : last.green_ratio) CHECK(ratio == Approx(1.0).margin(0.05));

    // away from the bubble the profile is already logarithmic, so the ratio
    // barely depends on the sample radius
    for (const subcritical_row& row : rep.rows) {
        REQUIRE(row.green_ratio.size() == 3);
        CHECK(std::abs(row.green_ratio[0] - row.green_ratio[2]) < 1e-3);
        CHECK(row.mass_f > 4.0);
        CHECK(row.mass_fprime > 4.0);
        CHECK(row.lambda_exponent > 0.25);
    }
}

TEST_CASE("slow-growth checks reject fast or malformed input") {
    const weight w = weight::constant();
    const std::vector<double> ladder = {10.0, 20.0};

    CHECK(throws_kind(errc::domain, [&] {
        (void)subcritical_check(growth_model::pure_exp(), w, ladder, {0.5});
    }));
    CHECK(throws_kind(errc::domain, [&] {
        (void)subcritical_check(growth_model::power_exp(3.0), w, ladder, {0.5});
    }));
    CHECK(throws_kind(errc::domain, [&] {
        (void)subcritical_check(growth_model::multi_exp(2), w, ladder, {0.5});
    }));

    const growth_model slow = growth_model::power_exp(1.5);
    CHECK(throws_kind(errc::domain, [&] { (void)subcritical_check(slow, w, {}, {0.5}); }));
    CHECK(throws_kind(errc::domain, [&] {
        (void)subcritical_check(slow, w, {20.0, 10.0}, {0.5});
    }));
    CHECK(throws_kind(errc::domain, [&] {
        (void)subcritical_check(slow, w, ladder, {1.0});
    }));
    CHECK(throws_kind(errc::domain, [&] {
        (void)subcritical_check(slow, w, ladder, {0.0});
    }));
}
