#include "suprad/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "suprad/analysis.hpp"
#include "suprad/errors.hpp"
#include "suprad/format.hpp"

namespace suprad {

namespace {

unsigned pool_width(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 4;
    if (const char* env = std::getenv("SUPRAD_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(std::min(v, 64L));
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, jobs));
}

// runs fn(i) for i in [0, jobs) on a striped pool; the lowest-index failure
// is rethrown on the caller
template <typename Fn>
void parallel_for(std::size_t jobs, Fn&& fn) {
    const unsigned width = pool_width(jobs);
    if (width <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> failures(jobs);
    std::vector<std::thread> pool;
    pool.reserve(width);
    for (unsigned t = 0; t < width; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < jobs; i += width) {
                try {
                    fn(i);
                } catch (...) {
                    failures[i] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : failures)
        if (e) std::rethrow_exception(e);
}

template <typename Fn>
auto annotate_mu(double mu, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const error& e) {
        fail(e.kind(), "mu=" + format_shortest(mu) + ": " + e.what());
    }
}

branch_point shoot_point(const growth_model& model, const weight& w, double mu,
                         const solver_config& cfg) {
    return annotate_mu(mu, [&] {
        const radial_solution sol = shoot_unit_lambda(model, w, mu, cfg);
        const scaling_diagnostics diag = compute_diagnostics(sol, model, w);
        branch_point pt;
        pt.mu = mu;
        pt.log_lambda = sol.log_lambda;
        pt.total_energy = total_energy(sol, model, w);
        pt.bubble_count = static_cast<int>(detect_bubbles(diag, sol, model, w).size());
        pt.residual =
            std::max({sol.diagnostics.id1, sol.diagnostics.id2, sol.diagnostics.pohozaev});
        return pt;
    });
}

struct extremum_bracket {
    double lo;
    double hi;
    bool maximum;
};

// golden section on lambda(mu) inside a sign-change bracket, then a
// three-shot slope certificate around the refined abscissa
turning_point refine(const growth_model& model, const weight& w, const solver_config& cfg,
                     const turning_options& opts, const extremum_bracket& br) {
    int shots = 0;
    const auto lam = [&](double mu) {
        ++shots;
        return annotate_mu(
            mu, [&] { return std::exp(shoot_unit_lambda(model, w, mu, cfg).log_lambda); });
    };
    const double sign = br.maximum ? -1.0 : 1.0;

    constexpr double invphi = 0.6180339887498948482;
    double lo = br.lo, hi = br.hi;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = sign * lam(x1);
    double f2 = sign * lam(x2);
    while (hi - lo > opts.mu_width && shots + 4 <= opts.max_shots) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = sign * lam(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = sign * lam(x2);
        }
    }

    turning_point tp;
    tp.mu = 0.5 * (lo + hi);
    tp.bracket_lo = lo;
    tp.bracket_hi = hi;
    const double d = std::min(opts.certificate_delta, 0.25 * (br.hi - br.lo));
    const double l_lo = lam(tp.mu - d);
    const double l_mid = lam(tp.mu);
    const double l_hi = lam(tp.mu + d);
    tp.log_lambda = std::log(l_mid);
    tp.slope_lo = (l_mid - l_lo) / d;
    tp.slope_hi = (l_hi - l_mid) / d;
    tp.shots = shots;
    return tp;
}

} // namespace

branch sweep(const growth_model& model, const weight& w, const std::vector<double>& mu_grid,
             const solver_config& cfg) {
    for (std::size_t i = 0; i < mu_grid.size(); ++i) {
        if (!std::isfinite(mu_grid[i])) fail(errc::domain, "sweep grid must be finite");
        if (i > 0 && !(mu_grid[i] > mu_grid[i - 1]))
            fail(errc::domain, "sweep grid must be strictly increasing");
    }
    branch br;
    br.points.resize(mu_grid.size());
    parallel_for(mu_grid.size(),
                 [&](std::size_t i) { br.points[i] = shoot_point(model, w, mu_grid[i], cfg); });
    return br;
}

std::vector<turning_point> turning_points(const branch& br, const growth_model& model,
                                          const weight& w, const solver_config& cfg,
                                          const turning_options& opts) {
    if (br.points.size() < 3)
        fail(errc::domain, "turning point scan needs at least 3 branch points");
    if (!(opts.mu_width > 0.0) || !(opts.certificate_delta > 0.0) || opts.max_shots < 8)
        fail(errc::domain, "turning point options out of range");

    std::vector<extremum_bracket> brackets;
    const auto& pts = br.points;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double s_prev = pts[i].log_lambda - pts[i - 1].log_lambda;
        const double s_next = pts[i + 1].log_lambda - pts[i].log_lambda;
        if (s_prev * s_next < 0.0) brackets.push_back({pts[i - 1].mu, pts[i + 1].mu, s_prev > 0.0});
    }

    std::vector<turning_point> out(brackets.size());
    parallel_for(brackets.size(),
                 [&](std::size_t i) { out[i] = refine(model, w, cfg, opts, brackets[i]); });
    // a certificate that no longer flips sign marks a grid-noise ghost
    std::erase_if(out,
                  [](const turning_point& tp) { return !(tp.slope_lo * tp.slope_hi < 0.0); });
    return out;
}

subcritical_report subcritical_check(const growth_model& model, const weight& w,
                                     const std::vector<double>& mu_ladder,
                                     const std::vector<double>& sample_radii,
                                     const solver_config& cfg) {
    if (model.family() == growth_family::pure_exp || !(model.q() > 2.0))
        fail(errc::domain, "slow-growth checks need growth ratio q > 2");
    if (mu_ladder.empty()) fail(errc::domain, "mu ladder must not be empty");
    for (std::size_t i = 0; i < mu_ladder.size(); ++i) {
        if (!std::isfinite(mu_ladder[i])) fail(errc::domain, "mu ladder must be finite");
        if (i > 0 && !(mu_ladder[i] > mu_ladder[i - 1]))
            fail(errc::domain, "mu ladder must be strictly increasing");
    }
    for (double r : sample_radii)
        if (!(r > 0.0) || !(r < 1.0)) fail(errc::domain, "sample radii must lie in (0, 1)");

    subcritical_report rep;
    rep.p = model.p();
    rep.lambda_exponent_target = 0.5 * (2.0 - rep.p);
    rep.radii = sample_radii;
    rep.rows.resize(mu_ladder.size());
    parallel_for(mu_ladder.size(), [&](std::size_t i) {
        const double mu = mu_ladder[i];
        annotate_mu(mu, [&] {
            const radial_solution sol = shoot_unit_lambda(model, w, mu, cfg);
            const double gp_mu = std::exp(model.log_g_prime(mu));
            subcritical_row& row = rep.rows[i];
            row.mu = mu;
            row.g_mu = model.g_extended(mu);
            row.mass_f = gp_mu * total_f_mass(sol, model, w);
            row.mass_fprime = total_energy(sol, model, w);
            row.lambda_exponent = -sol.log_lambda / row.g_mu;
            for (double r : sample_radii) {
                const double t = std::log(1.0 / r);
                row.green_ratio.push_back(gp_mu * sample_u(sol, t) / (4.0 * t));
            }
        });
    });

    std::ostringstream detail;
    const auto shrinking = [&](const std::string& name, auto&& gap) {
        bool ok = true;
        for (std::size_t i = 1; i < rep.rows.size(); ++i)
            if (!(gap(rep.rows[i]) <= gap(rep.rows[i - 1]) + 1e-12)) ok = false;
        if (!ok) detail << (detail.tellp() > 0 ? " " : "") << name;
        return ok;
    };
    bool mono = shrinking("mass_f",
                          [](const subcritical_row& r) { return std::abs(r.mass_f - 4.0); });
    mono &= shrinking("mass_fprime",
                      [](const subcritical_row& r) { return std::abs(r.mass_fprime - 4.0); });
    mono &= shrinking("lambda_exponent", [&](const subcritical_row& r) {
        return std::abs(r.lambda_exponent - rep.lambda_exponent_target);
    });
    for (std::size_t j = 0; j < sample_radii.size(); ++j)
        mono &= shrinking("green[r=" + format_shortest(sample_radii[j]) + "]",
                          [&](const subcritical_row& r) { return std::abs(r.green_ratio[j] - 1.0); });
    rep.monotone = mono;
    rep.detail = detail.str();
    return rep;
}

} // namespace suprad
