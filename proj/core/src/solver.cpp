#include "suprad/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "suprad/format.hpp"
#include "suprad/numerics.hpp"

namespace suprad {
namespace {

// Dormand-Prince 5(4) tableau
constexpr double kC2 = 0.2, kC3 = 0.3, kC4 = 0.8, kC5 = 8.0 / 9.0;
constexpr double kA21 = 0.2;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kD1 = 71.0 / 57600.0, kD3 = -71.0 / 16695.0, kD4 = 71.0 / 1920.0,
                 kD5 = -17253.0 / 339200.0, kD6 = 22.0 / 525.0, kD7 = -1.0 / 40.0;

struct deriv {
    double u;
    double m;
};

// the radial problem in sigma = log r: u_sigma = -m,
// m_sigma = exp(log lambda + g(u) + log h(r) + 2 sigma)
struct ode {
    const growth_model& model;
    const weight& w;
    double log_lambda;
    double cap;

    [[nodiscard]] double log_rhs(double sigma, double u) const {
        return log_lambda + model.g_extended(u) + w.log_h(std::exp(sigma)) + 2.0 * sigma;
    }
    [[nodiscard]] deriv operator()(double sigma, double u, double m) const {
        return {-m, guarded_exp(log_rhs(sigma, u), cap)};
    }
    // d(log_rhs)/dt at a sample, t = -sigma
    [[nodiscard]] double slope_t(double sigma, double u, double m) const {
        const double r = std::exp(sigma);
        return model.g_prime_extended(u) * m - r * w.h_prime(r) / w.h(r) - 2.0;
    }
};

struct raw_shot {
    std::vector<double> sigma, u, m, log_rhs, rhs_slope;
    bool crossed = false;
    double sigma_z = 0;
    double m_z = 0;
    std::size_t accepted = 0;
    double min_step = std::numeric_limits<double>::infinity();
};

void validate_config(const solver_config& cfg) {
    if (!(cfg.start_factor > 0.0) || cfg.start_factor > 0.1)
        throw error(errc::domain, "start_factor must lie in (0, 0.1], got " +
                                      format_shortest(cfg.start_factor));
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
        throw error(errc::domain, "integrator tolerances must be positive");
    if (!(cfg.exponent_cap > 0.0) || cfg.exponent_cap > 709.0)
        throw error(errc::domain, "exponent cap must lie in (0, 709]");
    if (!(cfg.t_padding >= 0.0))
        throw error(errc::domain, "t_padding must be nonnegative");
    if (!(cfg.max_step > 0.0) || !(cfg.initial_step > 0.0))
        throw error(errc::domain, "step bounds must be positive");
    if (cfg.max_steps < 100)
        throw error(errc::domain, "max_steps must allow at least 100 attempts");
}

void require_mu_above_t0(const growth_model& model, double mu) {
    if (!(mu > model.t0()))
        throw error(errc::domain, "mu = " + format_shortest(mu) +
                                      " must exceed the model threshold t0 = " +
                                      format_shortest(model.t0()));
}

void require_budget(double budget, double cap) {
    if (!(budget <= cap))
        throw error(errc::precision,
                    "exponent budget " + format_shortest(budget) + " exceeds the cap " +
                        format_shortest(cap) +
                        "; reduce mu or use a wider scalar type than binary64");
}

// zero of the quintic patch on (0, 1]: secant with a bisection bracket
double refine_crossing(const quintic_hermite& q, double abs_tol) {
    double xa = 0.0, fa = q.value(0.0);
    double xb = 1.0, fb = q.value(1.0);
    double x0 = xa, f0 = fa, x1 = xb, f1 = fb;
    for (int i = 0; i < 60; ++i) {
        if (std::abs(f1) < abs_tol) return x1;
        double xn = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!std::isfinite(xn) || xn <= xa || xn >= xb) xn = 0.5 * (xa + xb);
        const double fn = q.value(xn);
        if ((fn > 0.0) == (fa > 0.0)) {
            xa = xn;
            fa = fn;
        } else {
            xb = xn;
            fb = fn;
        }
        x0 = x1;
        f0 = f1;
        x1 = xn;
        f1 = fn;
        if (xb - xa < 1e-17) break;
    }
    // the bracket collapsed; the midpoint is the best binary64 answer
    return std::abs(fa) < std::abs(fb) ? xa : xb;
}

// integrate from (sigma0, u0, m0) up to sigma_max; when stop_at_crossing,
// break at the first u = 0 crossing instead of reaching sigma_max
raw_shot integrate(const ode& f, double sigma0, double u0, double m0, double sigma_max,
                   const solver_config& cfg, bool stop_at_crossing) {
    raw_shot out;
    const auto push = [&](double s, double u, double m) {
        out.sigma.push_back(s);
        out.u.push_back(u);
        out.m.push_back(m);
        out.log_rhs.push_back(f.log_rhs(s, u));
        out.rhs_slope.push_back(f.slope_t(s, u, m));
    };

    double s = sigma0, u = u0, m = m0;
    deriv k1 = f(s, u, m);
    push(s, u, m);

    double h = std::min(cfg.initial_step, cfg.max_step);
    double err_prev = 1.0;
    bool rejected = false;
    constexpr double kAlpha = 0.17, kBeta = 0.04; // PI control for the 5(4) pair
    std::size_t attempts = 0;

    while (sigma_max - s > 1e-12) {
        if (++attempts > cfg.max_steps)
            throw error(errc::nontermination, "integrator exceeded max_steps = " +
                                                  std::to_string(cfg.max_steps) +
                                                  " before finishing the shot");
        const bool clamped = h >= sigma_max - s;
        const double hs = clamped ? sigma_max - s : h;

        const deriv k2 = f(s + kC2 * hs, u + hs * kA21 * k1.u, m + hs * kA21 * k1.m);
        const deriv k3 = f(s + kC3 * hs, u + hs * (kA31 * k1.u + kA32 * k2.u),
                           m + hs * (kA31 * k1.m + kA32 * k2.m));
        const deriv k4 = f(s + kC4 * hs, u + hs * (kA41 * k1.u + kA42 * k2.u + kA43 * k3.u),
                           m + hs * (kA41 * k1.m + kA42 * k2.m + kA43 * k3.m));
        const deriv k5 =
            f(s + kC5 * hs, u + hs * (kA51 * k1.u + kA52 * k2.u + kA53 * k3.u + kA54 * k4.u),
              m + hs * (kA51 * k1.m + kA52 * k2.m + kA53 * k3.m + kA54 * k4.m));
        const deriv k6 =
            f(s + hs,
              u + hs * (kA61 * k1.u + kA62 * k2.u + kA63 * k3.u + kA64 * k4.u + kA65 * k5.u),
              m + hs * (kA61 * k1.m + kA62 * k2.m + kA63 * k3.m + kA64 * k4.m + kA65 * k5.m));
        const double u5 =
            u + hs * (kB1 * k1.u + kB3 * k3.u + kB4 * k4.u + kB5 * k5.u + kB6 * k6.u);
        const double m5 =
            m + hs * (kB1 * k1.m + kB3 * k3.m + kB4 * k4.m + kB5 * k5.m + kB6 * k6.m);
        const deriv k7 = f(s + hs, u5, m5);

        const double eu =
            hs * (kD1 * k1.u + kD3 * k3.u + kD4 * k4.u + kD5 * k5.u + kD6 * k6.u + kD7 * k7.u);
        const double em =
            hs * (kD1 * k1.m + kD3 * k3.m + kD4 * k4.m + kD5 * k5.m + kD6 * k6.m + kD7 * k7.m);
        const double sc_u = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(u), std::abs(u5));
        const double sc_m = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(m), std::abs(m5));
        const double err =
            std::sqrt(0.5 * ((eu / sc_u) * (eu / sc_u) + (em / sc_m) * (em / sc_m)));

        if (!(err <= 1.0)) {
            const double fac =
                std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5) : 0.1;
            h = hs * fac;
            if (h < 1e-13)
                throw error(errc::internal, "integrator step collapsed below resolution at t = " +
                                                format_shortest(-s));
            rejected = true;
            continue;
        }

        if (!(m5 >= m - 1e-13 * std::max(1.0, m)) || u5 > u + 1e-12 * std::max(1.0, std::abs(u)))
            throw error(errc::internal,
                        "integrator produced a nonmonotone step at t = " + format_shortest(-s));

        if (stop_at_crossing && u5 <= 0.0) {
            // u, u', u'' at both ends of the step pin the crossing
            const quintic_hermite uq({u, -m, -k1.m}, {u5, -m5, -k7.m}, hs);
            const double x = refine_crossing(uq, cfg.abs_tol);
            out.sigma_z = s + x * hs;
            out.m_z = -uq.derivative(x);
            out.crossed = true;
            ++out.accepted;
            return out;
        }

        s += hs;
        u = u5;
        m = m5;
        k1 = k7;
        ++out.accepted;
        push(s, u, m);
        if (!clamped) out.min_step = std::min(out.min_step, hs);

        double fac = 0.9 * std::pow(std::max(err, 1e-16), -kAlpha) * std::pow(err_prev, kBeta);
        if (rejected) fac = std::min(fac, 1.0);
        h = std::min(cfg.max_step, hs * std::clamp(fac, 0.2, 5.0));
        err_prev = std::max(err, 1e-10);
        rejected = false;
    }

    if (stop_at_crossing)
        throw error(errc::nontermination,
                    "no zero crossing of u down to r = e^" + format_shortest(sigma_max) +
                        "; raise t_padding or check the model");
    return out;
}

struct center_start {
    double sigma0;
    double u0;
    double m0;
};

// Taylor data at r0 = eps0 gamma0: u = mu - c r^2/4 + c^2 g' r^4/64 with
// c = lambda h(0) f(mu); everything is assembled in log scale first
center_start make_start(const growth_model& model, const weight& w, double mu, double log_lambda,
                        const solver_config& cfg) {
    const double log_h0 = w.log_h(0.0);
    const double log_gp = model.log_g_prime(mu);
    const double budget = log_lambda + model.g_extended(mu) + log_gp + log_h0;
    require_budget(budget, cfg.exponent_cap);
    const double log_gamma0 = -0.5 * budget;
    const double sigma0 = std::log(cfg.start_factor) + log_gamma0;
    const double log_c = log_lambda + log_h0 + model.g_extended(mu);
    const double cr2 = std::exp(log_c + 2.0 * sigma0); // c r0^2 = eps0^2 / g'(mu)
    const double gp = std::exp(log_gp);
    return {sigma0, mu - cr2 / 4.0 + cr2 * cr2 * gp / 64.0, cr2 / 2.0 - cr2 * cr2 * gp / 16.0};
}

radial_solution assemble(const raw_shot& raw, const growth_model& model, const weight& w,
                         double mu, double log_lambda, double sigma_shift, double r_zero_pre) {
    radial_solution sol;
    sol.mu = mu;
    sol.log_lambda = log_lambda;
    const std::size_t n = raw.sigma.size();
    sol.t.resize(n);
    for (std::size_t i = 0; i < n; ++i) sol.t[i] = sigma_shift - raw.sigma[i];
    sol.u = raw.u;
    sol.m = raw.m;
    sol.log_rhs = raw.log_rhs;
    sol.rhs_slope = raw.rhs_slope;
    sol.r_zero = 1.0;
    sol.r_zero_pre_rescale = r_zero_pre;
    sol.steps = raw.accepted;
    sol.min_accepted_step = raw.min_step;
    sol.model_spec = model.spec_string();
    sol.weight_spec = w.spec_string();
    return sol;
}

} // namespace

radial_solution shoot_unit_lambda(const growth_model& model, const weight& w, double mu,
                                  const solver_config& cfg) {
    validate_config(cfg);
    if (!w.is_constant())
        throw error(errc::domain,
                    "unit-lambda shooting requires a constant weight; use shoot_general");
    require_mu_above_t0(model, mu);

    const center_start start = make_start(model, w, mu, 0.0, cfg);
    const ode f{model, w, 0.0, cfg.exponent_cap};
    raw_shot raw = integrate(f, start.sigma0, start.u0, start.m0, cfg.t_padding, cfg, true);

    // rescale r -> r / r_z: the crossing lands on r = 1 and lambda = r_z^2.
    // log_rhs is invariant because log lambda + 2 sigma does not change.
    raw.sigma.push_back(raw.sigma_z);
    raw.u.push_back(0.0);
    raw.m.push_back(raw.m_z);
    raw.log_rhs.push_back(f.log_rhs(raw.sigma_z, 0.0));
    raw.rhs_slope.push_back(f.slope_t(raw.sigma_z, 0.0, raw.m_z));

    radial_solution sol = assemble(raw, model, w, mu, 2.0 * raw.sigma_z, raw.sigma_z,
                                   std::exp(raw.sigma_z));
    sol.diagnostics = identity_residuals(sol, model, w);
    return sol;
}

radial_solution shoot_general(const growth_model& model, const weight& w, double mu,
                              lambda_bracket bracket, const solver_config& cfg) {
    validate_config(cfg);
    require_mu_above_t0(model, mu);
    if (!std::isfinite(bracket.lo) || !std::isfinite(bracket.hi) || !(bracket.lo > 0.0) ||
        !(bracket.hi > 0.0))
        throw error(errc::domain, "lambda bracket must be positive and finite");
    if (!(bracket.lo < bracket.hi))
        throw error(errc::bracketing, "lambda bracket [" + format_shortest(bracket.lo) + ", " +
                                          format_shortest(bracket.hi) +
                                          "] is degenerate or reversed");
    const double log_h_max = std::max(w.log_h(0.0), w.log_h(1.0));
    require_budget(std::log(bracket.hi) + model.g_extended(mu) + model.log_g_prime(mu) + log_h_max,
                   cfg.exponent_cap);

    const auto boundary_value = [&](double lam, raw_shot& raw) {
        const double log_lambda = std::log(lam);
        const center_start start = make_start(model, w, mu, log_lambda, cfg);
        const ode f{model, w, log_lambda, cfg.exponent_cap};
        raw = integrate(f, start.sigma0, start.u0, start.m0, 0.0, cfg, false);
        return raw.u.back();
    };

    // raw always holds the most recent shot, so it matches lam on exit
    raw_shot raw;
    double lo = bracket.lo, hi = bracket.hi;
    const double f_lo = boundary_value(lo, raw);
    double lam = lo, f_cur = f_lo;
    if (!(std::abs(f_cur) < cfg.abs_tol)) {
        const double f_hi = boundary_value(hi, raw);
        lam = hi;
        f_cur = f_hi;
        if (!(std::abs(f_cur) < cfg.abs_tol) && (f_lo > 0.0) == (f_hi > 0.0))
            throw error(errc::bracketing,
                        "u(1; lambda) does not change sign over the bracket: u(1; " +
                            format_shortest(lo) + ") = " + format_shortest(f_lo) + ", u(1; " +
                            format_shortest(hi) + ") = " + format_shortest(f_hi));
        const bool lo_positive = f_lo > 0.0;
        double prev_lam = lo, f_prev = f_lo;
        for (int iter = 0; !(std::abs(f_cur) < cfg.abs_tol); ++iter) {
            if (iter >= 200)
                throw error(errc::internal, "lambda iteration failed to converge in 200 steps");
            if (hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() * hi)
                throw error(errc::precision,
                            "boundary value |u(1)| = " + format_shortest(std::abs(f_cur)) +
                                " cannot reach abs_tol = " + format_shortest(cfg.abs_tol) +
                                "; the lambda bracket collapsed to machine resolution");
            double next = lam - f_cur * (lam - prev_lam) / (f_cur - f_prev);
            if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
            const double f_next = boundary_value(next, raw);
            // u(1; lambda) decreases in lambda: keep the sign-change bracket
            if ((f_next > 0.0) == lo_positive)
                lo = next;
            else
                hi = next;
            prev_lam = lam;
            f_prev = f_cur;
            lam = next;
            f_cur = f_next;
        }
    }

    radial_solution sol = assemble(raw, model, w, mu, std::log(lam), 0.0, 1.0);
    sol.diagnostics = identity_residuals(sol, model, w);
    return sol;
}

namespace {

// cubic Hermite value for the log_rhs channel
double cubic_value(double ya, double da, double yb, double db, double h, double x) {
    const double x2 = x * x, x3 = x2 * x;
    return ya * (1.0 - 3.0 * x2 + 2.0 * x3) + h * da * (x - 2.0 * x2 + x3) +
           yb * (3.0 * x2 - 2.0 * x3) + h * db * (x3 - x2);
}

// interval index i_hi such that t[i_hi - 1] >= tq >= t[i_hi] on the
// strictly decreasing grid
std::size_t locate(const radial_solution& sol, double tq) {
    if (sol.size() < 2) throw error(errc::domain, "solution has too few samples to interpolate");
    if (!(tq <= sol.t.front()) || !(tq >= sol.t.back()))
        throw error(errc::domain, "sample point t = " + format_shortest(tq) +
                                      " lies outside the solution grid");
    const auto it =
        std::lower_bound(sol.t.begin(), sol.t.end(), tq, std::greater<double>());
    std::size_t i_hi = static_cast<std::size_t>(it - sol.t.begin());
    if (i_hi == 0) i_hi = 1;
    if (i_hi >= sol.size()) i_hi = sol.size() - 1;
    return i_hi;
}

} // namespace

double sample_u(const radial_solution& sol, double t) {
    const std::size_t hi = locate(sol, t);
    const std::size_t lo = hi - 1; // larger t
    const double h = sol.t[lo] - sol.t[hi];
    const double x = (t - sol.t[hi]) / h;
    // left endpoint is the smaller t; du/dt = m, d2u/dt2 = -e^{log_rhs}
    const quintic_hermite q({sol.u[hi], sol.m[hi], -std::exp(sol.log_rhs[hi])},
                            {sol.u[lo], sol.m[lo], -std::exp(sol.log_rhs[lo])}, h);
    return q.value(x);
}

double sample_m(const radial_solution& sol, double t) {
    const std::size_t hi = locate(sol, t);
    const std::size_t lo = hi - 1;
    const double h = sol.t[lo] - sol.t[hi];
    const double x = (t - sol.t[hi]) / h;
    const double e_hi = std::exp(sol.log_rhs[hi]);
    const double e_lo = std::exp(sol.log_rhs[lo]);
    // dm/dt = -e^{log_rhs}, d2m/dt2 = -e^{log_rhs} d(log_rhs)/dt
    const quintic_hermite q({sol.m[hi], -e_hi, -e_hi * sol.rhs_slope[hi]},
                            {sol.m[lo], -e_lo, -e_lo * sol.rhs_slope[lo]}, h);
    return q.value(x);
}

double sample_log_rhs(const radial_solution& sol, double t) {
    const std::size_t hi = locate(sol, t);
    const std::size_t lo = hi - 1;
    const double h = sol.t[lo] - sol.t[hi];
    const double x = (t - sol.t[hi]) / h;
    return cubic_value(sol.log_rhs[hi], sol.rhs_slope[hi], sol.log_rhs[lo], sol.rhs_slope[lo], h,
                       x);
}

residual_set identity_residuals(const radial_solution& sol, const growth_model& model,
                                const weight& w) {
    if (sol.size() < 100)
        throw error(errc::domain, "identity residuals need at least 100 samples, got " +
                                      std::to_string(sol.size()));
    const std::size_t n = sol.size();
    const double log_lambda = sol.log_lambda;

    // work in sigma = -t, ascending with the sample index
    const auto sigma_at = [&](std::size_t i) { return -sol.t[i]; };

    // quintic u patch on interval [i, i+1] in sigma
    const auto u_patch = [&](std::size_t i) {
        const double h = sigma_at(i + 1) - sigma_at(i);
        return quintic_hermite({sol.u[i], -sol.m[i], -std::exp(sol.log_rhs[i])},
                               {sol.u[i + 1], -sol.m[i + 1], -std::exp(sol.log_rhs[i + 1])}, h);
    };

    // integrate kernel(sigma) * lambda h f(u) r^2 over [ia, ib] sample range
    const auto quad_f = [&](std::size_t ia, std::size_t ib, const auto& kernel) {
        double acc = 0.0;
        for (std::size_t i = ia; i < ib; ++i) {
            const double sa = sigma_at(i), sb = sigma_at(i + 1);
            const quintic_hermite q = u_patch(i);
            acc += gauss_panel(
                kGauss7,
                [&](double s) {
                    const double uu = q.value((s - sa) / (sb - sa));
                    const double r = std::exp(s);
                    const double lf =
                        log_lambda + w.log_h(r) + model.g_extended(uu) + 2.0 * s;
                    return std::exp(lf) * kernel(s);
                },
                sa, sb);
        }
        return acc;
    };

    const double sigma_first = sigma_at(0);
    const double mu = sol.mu;

    // id1 at r = 1: mu - u(1) = int lambda h f(u) s log(1/s) ds, with the
    // analytic center patch int_0^{r0} c s log(1/s) ds added on
    const double center_id1 = std::exp(sol.log_rhs.front()) * (0.25 - 0.5 * sigma_first);
    const double i1 = quad_f(0, n - 1, [](double s) { return -s; }) + center_id1;
    residual_set out;
    out.id1 = std::abs(mu - sol.u.back() - i1) / mu;

    // id2 between two interior radii ra < rb:
    // u(ra) - u(rb) = log(rb/ra) m(ra) + int_{ra}^{rb} lambda h f(u) s log(rb/s) ds
    const std::size_t ia = (n * 11) / 20;
    const std::size_t ib = std::min((n * 9) / 10, n - 2);
    const double sa = sigma_at(ia), sb = sigma_at(ib);
    const double rhs2 =
        (sb - sa) * sol.m[ia] + quad_f(ia, ib, [&](double s) { return sb - s; });
    const double du = sol.u[ia] - sol.u[ib];
    out.id2 = std::abs(du - rhs2) / std::max(du, 1e-300);

    // Pohozaev at r = 1:
    // m(1)^2 = 4 int lambda (1 + s h'/(2h)) h F(u) s ds - 2 lambda h(1) F(u(1))
    const auto quad_po = [&](std::size_t lo_i, std::size_t hi_i) {
        double acc = 0.0;
        for (std::size_t i = lo_i; i < hi_i; ++i) {
            const double s0 = sigma_at(i), s1 = sigma_at(i + 1);
            const quintic_hermite q = u_patch(i);
            acc += gauss_panel(
                kGauss7,
                [&](double s) {
                    const double uu = q.value((s - s0) / (s1 - s0));
                    if (!(uu > 0.0)) return 0.0;
                    const double r = std::exp(s);
                    const double wfac = 1.0 + r * w.h_prime(r) / (2.0 * w.h(r));
                    return wfac *
                           std::exp(log_lambda + w.log_h(r) + model.log_F(uu) + 2.0 * s);
                },
                s0, s1);
        }
        return acc;
    };
    const double center_po =
        0.5 * std::exp(log_lambda + w.log_h(0.0) + model.log_F(mu) + 2.0 * sigma_first);
    const double u_end = sol.u.back();
    const double boundary =
        u_end > 0.0 ? 2.0 * std::exp(log_lambda) * w.h(1.0) * std::exp(model.log_F(u_end)) : 0.0;
    const double p = 4.0 * (quad_po(0, n - 1) + center_po) - boundary;
    const double flux = sol.m.back() * sol.m.back();
    out.pohozaev = std::abs(flux - p) / flux;
    return out;
}

} // namespace suprad
