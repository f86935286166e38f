#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "suprad/growth.hpp"

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
} // namespace

TEST_CASE("factories validate parameter ranges") {
    CHECK(throws_kind(errc::domain, [] { (void)growth_model::power_exp(1.0); }));
    CHECK(throws_kind(errc::domain, [] { (void)growth_model::power_exp(0.5); }));
    CHECK(throws_kind(errc::domain, [] { (void)growth_model::power_exp_log(2.0, -0.1); }));
    CHECK(throws_kind(errc::domain, [] { (void)growth_model::multi_exp(1); }));
    CHECK(throws_kind(errc::domain, [] { (void)growth_model::multi_exp(5); }));
    CHECK(throws_kind(errc::domain, [] { (void)growth_model::multi_exp(2, 0.5); }));
    CHECK(throws_kind(errc::domain, [] { (void)growth_model::multi_exp(2, 1.0, -1.0); }));
    // every admissible family constructs, including the deepest tower
    CHECK_NOTHROW(growth_model::multi_exp(4));
    CHECK_NOTHROW(growth_model::multi_exp(3, 1.5, 0.5));
    CHECK_NOTHROW(growth_model::multi_exp(2, 2.0, 1.0));
    CHECK_NOTHROW(growth_model::power_exp_log(2.0, 1.0));
}

TEST_CASE("spec grammar round-trips and rejects malformed input") {
    CHECK(growth_model::parse("power-exp:p=3").spec_string() == "power-exp:p=3");
    CHECK(growth_model::parse("power-exp-log:p=2,l=1").spec_string() == "power-exp-log:p=2,l=1");
    CHECK(growth_model::parse("power-exp-log:p=2").param_l() == 0.0);
    CHECK(growth_model::parse("multi-exp:k=2").spec_string() == "multi-exp:k=2,m=1,l=0");
    CHECK(growth_model::parse("pure-exp").family() == growth_family::pure_exp);

    const growth_model deep = growth_model::parse("multi-exp:k=3,m=1.5,l=0.5");
    CHECK(deep.param_k() == 3);
    CHECK(deep.param_m() == 1.5);
    CHECK(deep.param_l() == 0.5);
    CHECK(growth_model::parse(deep.spec_string()).spec_string() == deep.spec_string());

    CHECK(throws_kind(errc::usage, [] { (void)growth_model::parse("power-exp"); }));
    CHECK(throws_kind(errc::usage, [] { (void)growth_model::parse("power-exp:q=3"); }));
    CHECK(throws_kind(errc::usage, [] { (void)growth_model::parse("power-exp:p=3,p=4"); }));
    CHECK(throws_kind(errc::usage, [] { (void)growth_model::parse("power-exp:p=abc"); }));
    CHECK(throws_kind(errc::usage, [] { (void)growth_model::parse("power-exp:p"); }));
    CHECK(throws_kind(errc::usage, [] { (void)growth_model::parse("power-exp:=3"); }));
    CHECK(throws_kind(errc::usage, [] { (void)growth_model::parse("gauss:p=1"); }));
    CHECK(throws_kind(errc::usage, [] { (void)growth_model::parse("multi-exp:k=2.5"); }));
    CHECK(throws_kind(errc::usage, [] { (void)growth_model::parse("pure-exp:v=1"); }));
    CHECK(throws_kind(errc::domain, [] { (void)growth_model::parse("power-exp:p=1"); }));
    CHECK(throws_kind(errc::domain, [] { (void)growth_model::parse("multi-exp:k=7"); }));
}

TEST_CASE("closed-form evaluation of the power families") {
    const growth_model pe3 = growth_model::power_exp(3.0);
    const growth_eval e = pe3.evaluate(2.0);
    CHECK(e.g == 8.0);
    CHECK(e.g_prime == 12.0);
    CHECK(e.g_second == 12.0);
    CHECK(pe3.t0() == 0.0);
    CHECK(pe3.q() == Approx(1.5).epsilon(1e-15));
    CHECK(pe3.p() == 3.0);
    CHECK(pe3.Q(5.0) == 1.5);                     // exact at every argument
    CHECK(pe3.log_P(7.0) == std::log(3.0));       // P = p identically
    CHECK(pe3.log_g(2.0) == Approx(std::log(8.0)).epsilon(1e-15));
    CHECK(pe3.log_g_prime(2.0) == Approx(std::log(12.0)).epsilon(1e-15));

    // t^2.5 (log t)^1.5 at t = 30 against an independent high-precision eval
    const growth_model pel = growth_model::power_exp_log(2.5, 1.5);
    CHECK(pel.t0() == Approx(std::exp(2.5)).epsilon(1e-15));
    const growth_eval w = pel.evaluate(30.0);
    CHECK(w.g == Approx(30920.8120473592789494).epsilon(1e-13));
    CHECK(w.g_prime == Approx(3031.29207941615732125).epsilon(1e-13));
    CHECK(w.g_second == Approx(191.671855601781857104).epsilon(1e-13));

    // closed-form Q for p=2, l=1 at t = e^3: (2L+1)^2 / (2L^2+3L) with L=3
    const growth_model pel21 = growth_model::power_exp_log(2.0, 1.0);
    CHECK(pel21.Q(std::exp(3.0)) == Approx(49.0 / 27.0).epsilon(1e-12));
    CHECK(pel21.log_P(std::exp(2.0)) == Approx(std::log(2.5)).epsilon(1e-14));
    CHECK(pel21.q() == 2.0);
    CHECK(pel21.p() == 2.0);
}

TEST_CASE("exponential towers evaluate through the log domain") {
    const growth_model me2 = growth_model::multi_exp(2);
    CHECK(me2.t0() == 1.5);
    const growth_eval e = me2.evaluate(3.0);
    CHECK(e.g == Approx(std::exp(3.0)).epsilon(1e-15));
    CHECK(e.g_prime == Approx(std::exp(3.0)).epsilon(1e-15));
    CHECK(e.g_second == Approx(std::exp(3.0)).epsilon(1e-15));
    CHECK(me2.log_g(3.0) == 3.0);
    CHECK(me2.log_g_prime(3.0) == 3.0);
    CHECK(me2.q() == 1.0);
    CHECK(std::isinf(me2.p()));

    const growth_model me3 = growth_model::multi_exp(3);
    const growth_eval t3 = me3.evaluate(1.8);
    CHECK(t3.g == Approx(423.963541460311489573).epsilon(1e-13));
    CHECK(t3.g_prime == Approx(2564.82996359890648819).epsilon(1e-13));
    CHECK(t3.g_second == Approx(18081.1470495353787555).epsilon(1e-13));
    CHECK(me3.log_g(1.8) == std::exp(1.8)); // tower stage, computed without exp of g
    CHECK(me3.log_g_prime(1.8) == Approx(7.8496474644129463627).epsilon(1e-14));
    CHECK(me3.Q(2.0) == Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-14));
    CHECK(me3.log_P(2.0) == Approx(std::log(2.0) + 2.0).epsilon(1e-14));

    const growth_model mix = growth_model::multi_exp(2, 1.5, 0.5);
    const growth_eval x = mix.evaluate(4.0);
    CHECK(x.g == Approx(12323.7081761539611762).epsilon(1e-12));
    CHECK(x.g_prime == Approx(53996.9665778739872621).epsilon(1e-12));
    CHECK(x.g_second == Approx(246321.403855649346951).epsilon(1e-12));
    CHECK(me2.Q(6.0) == 1.0); // curvature ratio of the inner argument is zero
}

TEST_CASE("log-domain accessors stay usable past the overflow of g itself") {
    const growth_model me4 = growth_model::multi_exp(4);
    // g = exp(exp(exp(t))) overflows binary64 at t = 3 but log g does not
    CHECK(throws_kind(errc::precision, [&] { (void)me4.evaluate(3.0); }));
    CHECK(me4.log_g(3.0) == std::exp(std::exp(3.0)));
    CHECK(me4.log_g_prime(3.0) ==
          Approx(3.0 + std::exp(3.0) + std::exp(std::exp(3.0))).epsilon(1e-15));
    try {
        (void)me4.evaluate(3.0);
        FAIL("expected a precision error");
    } catch (const error& e) {
        CHECK(std::string(e.what()).find("wider scalar type than binary64") != std::string::npos);
    }
}

TEST_CASE("strict accessors reject arguments below the threshold") {
    const growth_model pel = growth_model::power_exp_log(2.0, 1.0);
    CHECK(throws_kind(errc::domain, [&] { (void)pel.evaluate(2.0); }));
    CHECK_NOTHROW(pel.evaluate(7.39));
    const growth_model mix = growth_model::multi_exp(2, 1.5, 0.5);
    CHECK(mix.t0() == Approx(std::exp(1.0 + 0.5 / 1.5)).epsilon(1e-15));
    CHECK(throws_kind(errc::domain, [&] { (void)mix.evaluate(3.0); }));
    const growth_model me2 = growth_model::multi_exp(2);
    CHECK(throws_kind(errc::domain, [&] { (void)me2.evaluate(1.49); }));
    CHECK_NOTHROW(me2.evaluate(1.5));
    CHECK(throws_kind(errc::domain, [&] { (void)me2.log_g(0.0); }));
}

TEST_CASE("extended accessors continue g below the threshold with a C1 line") {
    const growth_model pe2 = growth_model::power_exp(2.0);
    CHECK(pe2.g_extended(-1.0) == 0.0);
    CHECK(pe2.g_prime_extended(-1.0) == 0.0);
    CHECK(pe2.g_extended(0.5) == 0.25);
    CHECK(pe2.g_second_extended(-0.5) == 0.0);

    const growth_model pel = growth_model::power_exp_log(2.0, 1.0);
    const double edge_g = 4.0 * std::log(2.0);
    const double edge_slope = 2.0 * (2.0 * std::log(2.0) + 1.0);
    CHECK(pel.g_extended(2.0) == Approx(edge_g).epsilon(1e-15));
    CHECK(pel.g_extended(1.5) == Approx(edge_g - 0.5 * edge_slope).epsilon(1e-14));
    CHECK(pel.g_prime_extended(1.0) == Approx(edge_slope).epsilon(1e-15));
    const double fd =
        (pel.g_extended(2.0 + 1e-6) - pel.g_extended(2.0 - 1e-6)) / 2e-6;
    CHECK(fd == Approx(edge_slope).margin(1e-5)); // slope continuous across the edge
    CHECK(pel.g_second_extended(2.0) == 0.0);
    CHECK(pel.g_second_extended(2.1) > 0.0);

    // the plain exponential tower needs no completion: e^t is entire
    const growth_model me2 = growth_model::multi_exp(2);
    CHECK(me2.g_extended(-5.0) == Approx(std::exp(-5.0)).epsilon(1e-15));
    CHECK(me2.g_prime_extended(-5.0) == Approx(std::exp(-5.0)).epsilon(1e-15));

    // towers with a shaped inner argument switch to the line below t = 2
    const growth_model sq = growth_model::multi_exp(2, 2.0, 0.0);
    CHECK(sq.t0() >= 2.0); // strict range never overlaps the completion
    const double s = sq.g_prime_extended(1.0);
    CHECK(s == Approx(4.0 * std::exp(4.0)).epsilon(1e-14)); // slope frozen at t = 2
    CHECK(sq.g_extended(0.0) == Approx(std::exp(4.0) - 2.0 * s).epsilon(1e-13));
}

TEST_CASE("antiderivative F matches independent quadrature oracles") {
    const growth_model pure = growth_model::pure_exp();
    CHECK(pure.log_F(10.0) == Approx(9.99995459903962924386).epsilon(1e-12));
    CHECK(pure.log_F(0.0) == -std::numeric_limits<double>::infinity());
    CHECK(throws_kind(errc::domain, [&] { (void)pure.log_F(-1.0); }));

    const growth_model pe2 = growth_model::power_exp(2.0);
    CHECK(pe2.log_F(1.0) == Approx(0.38025105262664982142).epsilon(1e-10));
    CHECK(pe2.log_F(3.0) == Approx(7.27554975714267637699).epsilon(1e-10));
    CHECK(growth_model::power_exp(3.0).log_F(2.0) ==
          Approx(5.62348627551107060896).epsilon(1e-10));
    CHECK(growth_model::multi_exp(2).log_F(3.0) ==
          Approx(17.1397286726588937711).epsilon(1e-10));
    // includes the linear completion segment below the edge
    CHECK(growth_model::power_exp_log(2.0, 1.0).log_F(4.0) ==
          Approx(19.4936647797685047578).epsilon(1e-10));

    // monotone in t, deterministic across separately cached instances
    CHECK(pe2.log_F(2.0) < pe2.log_F(2.5));
    CHECK(pe2.log_F(2.5) < pe2.log_F(3.0));
    const growth_model twin = growth_model::power_exp(2.0);
    CHECK(pe2.log_F(2.7) == twin.log_F(2.7));

    // F g'/f -> 1: the leading asymptotic used throughout the energy estimates
    const double dev = std::exp(pe2.log_F(10.0) + pe2.log_g_prime(10.0) - 100.0) - 1.0;
    CHECK(dev == Approx(0.00507694375197056090021).epsilon(1e-6));
    const growth_model me2 = growth_model::multi_exp(2);
    const double dev2 =
        std::exp(me2.log_F(6.0) + me2.log_g_prime(6.0) - me2.evaluate(6.0).g) - 1.0;
    CHECK(std::abs(dev2) < 0.01);

    CHECK(throws_kind(errc::precision, [&] { (void)pe2.log_F(30.0); }));
}

TEST_CASE("growth condition report certifies the shipped families") {
    for (const char* spec : {"power-exp:p=2", "power-exp:p=3", "power-exp-log:p=3,l=0.3",
                             "power-exp-log:p=2,l=1", "multi-exp:k=2", "multi-exp:k=3",
                             "multi-exp:k=4", "multi-exp:k=2,m=1.5,l=0.5"}) {
        CAPTURE(spec);
        const h1_report rep = growth_model::parse(spec).check_h1();
        CHECK(rep.positivity.ok);
        CHECK(rep.limits.ok);
        CHECK(rep.clause_ii.ok);
        CHECK(rep.all_ok());
    }
    CHECK(growth_model::power_exp(2.0).check_h1().clause_ii.vacuous);
    CHECK_FALSE(growth_model::multi_exp(2).check_h1().clause_ii.vacuous);
    CHECK(throws_kind(errc::domain, [] { (void)growth_model::pure_exp().check_h1(); }));
}

TEST_CASE("Q and P estimates converge to the declared pair") {
    const growth_model pe4 = growth_model::power_exp(4.0);
    const qp_table t = pe4.q_p_estimate({10.0, 100.0, 1000.0});
    REQUIRE(t.rows.size() == 3);
    CHECK(t.q_last == Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(t.p_last == Approx(4.0).epsilon(1e-14));
    CHECK(t.q_drift_last_decade < 1e-12);
    CHECK(t.p_drift_last_decade < 1e-12);

    const growth_model me2 = growth_model::multi_exp(2);
    const qp_table m = me2.q_p_estimate({10.0, 40.0, 80.0, 160.0});
    CHECK(m.q_last == 1.0);
    CHECK(m.p_last == Approx(160.0).epsilon(1e-13)); // P = t g'/g = t for e^{e^t}
    CHECK(m.p_drift_last_decade < 0.03);             // 1/P at the decade knee

    const growth_model pel = growth_model::power_exp_log(3.0, 0.3);
    const qp_table w = pel.q_p_estimate({20.0, 200.0, 2000.0});
    CHECK(w.q_last == Approx(1.5).margin(0.02));
    CHECK(1.0 / w.p_last == Approx(1.0 / 3.0).margin(0.005)); // log tail decays slowly

    CHECK(throws_kind(errc::domain, [&] { (void)pe4.q_p_estimate({}); }));
    CHECK(throws_kind(errc::domain, [] { (void)growth_model::pure_exp().q_p_estimate({1.0}); }));
}

TEST_CASE("asymptotic residual tables shrink along the probe list") {
    SECTION("power-exp") {
        const growth_model pe3 = growth_model::power_exp(3.0);
        const std::vector<double> ts = pe3.default_lemma_t_list();
        REQUIRE(ts == std::vector<double>{25.0, 50.0, 100.0, 200.0});
        const lemma_table tab = pe3.verify_growth_lemmas(ts);
        REQUIRE(tab.rows.size() == 4);
        std::vector<double> g1, ratio;
        for (const auto& r : tab.rows) {
            g1.push_back(r.g1);
            ratio.push_back(r.ratio);
        }
        CHECK(residuals_decreasing(g1));
        CHECK(residuals_decreasing(ratio));
        // linearization residual is y^2 (p-1)/(2 p t^p) to leading order
        CHECK(g1.front() == Approx(9.0 * 2.0 / (2.0 * 3.0 * 15625.0)).epsilon(0.05));
        CHECK(ratio.back() < 1e-15); // exact power law, rounding floor only
        CHECK(tab.ku_target == Approx(1.0 / 3.0).epsilon(1e-15));
        // probe points sit beyond the F horizon; the summary probe sits inside
        for (const auto& r : tab.rows) CHECK_FALSE(r.ku_feasible);
        REQUIRE(tab.ku_best_feasible);
        CHECK(tab.ku_best_slope == Approx(1.0 / 3.0).margin(0.02));
    }
    SECTION("plain double exponential") {
        const growth_model me2 = growth_model::multi_exp(2);
        const std::vector<double> ts = me2.default_lemma_t_list();
        REQUIRE(ts.size() >= 3);
        CHECK(ts.front() == Approx(1.6));
        const lemma_table tab = me2.verify_growth_lemmas(ts);
        std::vector<double> g1, ratio;
        for (const auto& r : tab.rows) {
            g1.push_back(r.g1);
            ratio.push_back(r.ratio);
        }
        CHECK(residuals_decreasing(g1));
        CHECK(residuals_decreasing(ratio));
        CHECK(g1.back() < 1e-3);
        CHECK(ratio.back() < 1e-2);
        CHECK(tab.ku_target == 0.0);
        REQUIRE(tab.ku_best_feasible);
        CHECK(std::abs(tab.ku_best_slope) < 0.02);
    }
    SECTION("triple exponential stays honest inside its narrow window") {
        const growth_model me3 = growth_model::multi_exp(3);
        const std::vector<double> ts = me3.default_lemma_t_list();
        REQUIRE(ts.size() >= 3);
        const lemma_table tab = me3.verify_growth_lemmas(ts);
        std::vector<double> g1, ratio;
        for (const auto& r : tab.rows) {
            g1.push_back(r.g1);
            ratio.push_back(r.ratio);
        }
        CHECK(residuals_decreasing(g1));
        CHECK(residuals_decreasing(ratio));
        // the F horizon sits at t < 1.9: the limiting slope is not yet visible
        CHECK(tab.ku_best_feasible);
        CHECK(std::isfinite(tab.ku_best_slope));
    }
    SECTION("power-exp-log") {
        const growth_model pel = growth_model::power_exp_log(3.0, 0.3);
        const lemma_table tab = pel.verify_growth_lemmas(pel.default_lemma_t_list());
        std::vector<double> g1, ratio;
        for (const auto& r : tab.rows) {
            g1.push_back(r.g1);
            ratio.push_back(r.ratio);
        }
        CHECK(residuals_decreasing(g1));
        CHECK(residuals_decreasing(ratio));
        REQUIRE(tab.ku_best_feasible);
        CHECK(tab.ku_best_slope == Approx(1.0 / 3.0).margin(0.02));
    }
}

TEST_CASE("lemma verification validates its inputs") {
    const growth_model pe2 = growth_model::power_exp(2.0);
    CHECK(throws_kind(errc::domain, [&] { (void)pe2.verify_growth_lemmas({}); }));
    CHECK(throws_kind(errc::domain, [&] { (void)pe2.verify_growth_lemmas({5.0, 5.0}); }));
    CHECK(throws_kind(errc::domain, [&] { (void)pe2.verify_growth_lemmas({3.0, 2.0}); }));
    CHECK(throws_kind(errc::domain,
                      [&] { (void)pe2.verify_growth_lemmas({25.0}, 3.0, {1.2}); }));
    CHECK(throws_kind(errc::domain,
                      [&] { (void)pe2.verify_growth_lemmas({25.0}, 3.0, {-0.5}); }));
    // rescaled probe x*t must stay above the evaluation threshold
    const growth_model pel = growth_model::power_exp_log(2.0, 1.0);
    CHECK(throws_kind(errc::domain,
                      [&] { (void)pel.verify_growth_lemmas({13.0}, 3.0, {0.5}); }));
    CHECK(throws_kind(errc::domain,
                      [] { (void)growth_model::pure_exp().verify_growth_lemmas({1.0}); }));
}

TEST_CASE("residual monotonicity helper") {
    CHECK_FALSE(residuals_decreasing({}));
    CHECK(residuals_decreasing({5.0}));
    CHECK(residuals_decreasing({3.0, 2.0, 2.0000000000009}));
    CHECK_FALSE(residuals_decreasing({1.0, 2.0}));
    CHECK_FALSE(residuals_decreasing({1.0, std::numeric_limits<double>::quiet_NaN()}));
}

TEST_CASE("radial weight parsing and evaluation") {
    const weight one = weight::parse("const");
    CHECK(one.h(0.3) == 1.0);
    CHECK(one.h_prime(0.3) == 0.0);
    CHECK(one.is_constant());
    CHECK(one.spec_string() == "const");

    const weight two5 = weight::parse("const:v=2.5");
    CHECK(two5.h(0.9) == 2.5);
    CHECK(two5.log_h(0.9) == Approx(std::log(2.5)).epsilon(1e-15));
    CHECK(two5.is_constant());
    CHECK(two5.spec_string() == "const:v=2.5");

    const weight dip = weight::parse("quad:a=-0.5");
    CHECK(dip.h(0.0) == 1.0);
    CHECK(dip.h(1.0) == 0.5);
    CHECK(dip.h_prime(1.0) == -1.0);
    CHECK(dip.log_h(1.0) == Approx(std::log(0.5)).epsilon(1e-15));
    CHECK_FALSE(dip.is_constant());
    CHECK(dip.spec_string() == "quad:a=-0.5");

    CHECK(throws_kind(errc::domain, [] { (void)weight::quadratic(-1.0); }));
    CHECK(throws_kind(errc::domain, [] { (void)weight::constant(0.0); }));
    CHECK(throws_kind(errc::domain, [] { (void)weight::parse("const:v=-1"); }));
    CHECK(throws_kind(errc::usage, [] { (void)weight::parse("quad"); }));
    CHECK(throws_kind(errc::usage, [] { (void)weight::parse("const:x=1"); }));
    CHECK(throws_kind(errc::usage, [] { (void)weight::parse("tri:a=1"); }));
}

TEST_CASE("derivatives agree with central differences") {
    struct probe {
        growth_model mdl;
        double t;
    };
    const probe probes[] = {
        {growth_model::power_exp(2.5), 6.0},
        {growth_model::power_exp_log(2.0, 1.0), 9.0},
        {growth_model::multi_exp(2), 2.5},
        {growth_model::multi_exp(2, 2.0, 1.0), 5.0},
    };
    for (const auto& [mdl, t] : probes) {
        CAPTURE(mdl.spec_string(), t);
        const growth_eval e = mdl.evaluate(t);
        const double h = 1e-6 * t;
        const double fd1 = (mdl.evaluate(t + h).g - mdl.evaluate(t - h).g) / (2.0 * h);
        const double fd2 =
            (mdl.evaluate(t + h).g_prime - mdl.evaluate(t - h).g_prime) / (2.0 * h);
        CHECK(e.g_prime == Approx(fd1).epsilon(1e-8));
        CHECK(e.g_second == Approx(fd2).epsilon(1e-7));
        // log-domain accessors are consistent with the direct values
        CHECK(mdl.log_g(t) == Approx(std::log(e.g)).epsilon(1e-13));
        CHECK(mdl.log_g_prime(t) == Approx(std::log(e.g_prime)).epsilon(1e-13));
    }
}

TEST_CASE("pure exponential is a validation-only family") {
    const growth_model pure = growth_model::pure_exp();
    CHECK_FALSE(pure.h1_certified());
    CHECK(growth_model::power_exp(2.0).h1_certified());
    const growth_eval e = pure.evaluate(5.0);
    CHECK(e.g == 5.0);
    CHECK(e.g_prime == 1.0);
    CHECK(e.g_second == 0.0);
    CHECK(pure.g_extended(-3.0) == -3.0);
    CHECK(throws_kind(errc::domain, [&] { (void)pure.q(); }));
    CHECK(throws_kind(errc::domain, [&] { (void)pure.p(); }));
    CHECK(throws_kind(errc::domain, [&] { (void)pure.Q(1.0); }));
    CHECK(pure.spec_string() == "pure-exp");
}
