#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "suprad/errors.hpp"
#include "suprad/growth.hpp"

namespace suprad {

/// Shooting solver controls. All lengths are in t = log(1/r).
struct solver_config {
    double start_factor = 1e-3;   ///< eps0: start radius r0 = eps0 * gamma0
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t max_steps = 1000000; ///< attempted integrator steps per shot
    double exponent_cap = 700.0;     ///< budget for any formed exponent
    double t_padding = 6.0;    ///< keep searching for the crossing down to t = -t_padding
    double max_step = 0.02;    ///< bubbles are unit width in t; keep them densely sampled
    double initial_step = 1e-3;
};

/// Green and Pohozaev identity residuals, all relative.
struct residual_set {
    double id1 = 0;      ///< center value vs weighted log-kernel mass at r = 1
    double id2 = 0;      ///< two-radius Green identity on an interior pair
    double pohozaev = 0; ///< boundary flux squared vs weighted F mass
};

/// Positive lambda interval expected to bracket u(1; lambda) = 0.
struct lambda_bracket {
    double lo;
    double hi;
};

/// One radial shot: samples of u and m = -r u' on a strictly decreasing
/// grid in t = log(1/r), center first. log_rhs carries
/// log(lambda h f(u) r^2), the mass equation right-hand side, and
/// rhs_slope its t-derivative, so u, m, and the right-hand side can all be
/// re-interpolated to quintic accuracy without re-integrating.
struct radial_solution {
    double mu = 0;
    double log_lambda = 0;
    std::vector<double> t;
    std::vector<double> u;       ///< strictly decreasing along the grid
    std::vector<double> m;       ///< nonnegative, nondecreasing along the grid
    std::vector<double> log_rhs;
    std::vector<double> rhs_slope;
    double r_zero = 1.0;              ///< u crosses zero here; 1 after rescale
    double r_zero_pre_rescale = 1.0;  ///< crossing radius of the lambda = 1 shot
    std::size_t steps = 0;            ///< accepted integrator steps
    double min_accepted_step = 0;     ///< smallest accepted step in t
    std::string scalar_mode = "binary64";
    residual_set diagnostics{};
    std::string model_spec;
    std::string weight_spec;
    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
};

/// Shot for a constant weight: integrate once with lambda = 1 from
/// r0 = eps0 gamma0 (gamma0 from lambda h(0) f'(mu) gamma0^2 = 1), locate
/// the zero crossing of u at radius R, then rescale r -> r/R, which turns
/// the crossing into u(1) = 0 and sets lambda = R^2. Errors: domain for a
/// nonconstant weight or mu <= t0, precision when the exponent budget
/// log lambda + g(mu) + log g'(mu) + log h exceeds the cap, nontermination
/// when no crossing appears at r <= e^{t_padding}, internal on a monotone
/// violation.
[[nodiscard]] radial_solution shoot_unit_lambda(const growth_model& model, const weight& w,
                                                double mu, const solver_config& cfg = {});

/// Shot for a general weight: secant-accelerated bisection on lambda until
/// |u(1; lambda)| < abs_tol. The bracket must contain a sign change of
/// u(1; lambda), else a bracketing error.
[[nodiscard]] radial_solution shoot_general(const growth_model& model, const weight& w, double mu,
                                            lambda_bracket bracket,
                                            const solver_config& cfg = {});

/// Recompute the identity residuals of a solution produced by the model
/// and weight given. Needs at least 100 samples.
[[nodiscard]] residual_set identity_residuals(const radial_solution& sol,
                                              const growth_model& model, const weight& w);

/// Quintic Hermite interpolation of u, m on the sampled grid; cubic for
/// log_rhs. Domain error outside [t.back(), t.front()].
[[nodiscard]] double sample_u(const radial_solution& sol, double t);
[[nodiscard]] double sample_m(const radial_solution& sol, double t);
[[nodiscard]] double sample_log_rhs(const radial_solution& sol, double t);

} // namespace suprad
