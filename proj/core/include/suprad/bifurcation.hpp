#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "suprad/growth.hpp"
#include "suprad/solver.hpp"

namespace suprad {

/// One shot on the lambda(mu) branch.
struct branch_point {
    double mu = 0.0;
    double log_lambda = 0.0;
    double total_energy = 0.0; ///< integral of lambda h f'(u) r dr over the disc
    int bubble_count = 0;
    double residual = 0.0; ///< worst of the shot's identity residuals
};

/// Extremum of lambda(mu), refined and certified by fresh shots. The two
/// flanking discrete slopes must carry opposite signs.
struct turning_point {
    double mu = 0.0;
    double log_lambda = 0.0;
    double bracket_lo = 0.0; ///< final golden bracket on mu
    double bracket_hi = 0.0;
    double slope_lo = 0.0; ///< certified slope just below mu
    double slope_hi = 0.0; ///< certified slope just above mu
    int shots = 0;         ///< fresh shots spent on this point
};

/// lambda(mu) traced over an increasing mu grid. The shooting map makes the
/// branch a graph over mu, so turning points are extrema of the trace.
struct branch {
    std::vector<branch_point> points;
    std::vector<turning_point> turning;

    [[nodiscard]] std::size_t size() const { return points.size(); }
};

struct turning_options {
    double mu_width = 1e-5;         ///< refinement stops below this mu bracket
    int max_shots = 40;             ///< fresh-shot budget per turning point
    double certificate_delta = 1e-3; ///< flank offset for the slope certificate
};

/// One rung of the slow-growth limit report.
struct subcritical_row {
    double mu = 0.0;
    double g_mu = 0.0;
    double mass_f = 0.0;          ///< g'(mu) * integral of lambda h f(u) r dr, target 4
    double mass_fprime = 0.0;     ///< integral of lambda h f'(u) r dr, target 4
    double lambda_exponent = 0.0; ///< log(1/lambda) / g(mu), target (2 - p)/2
    std::vector<double> green_ratio; ///< g'(mu) u(r) / (4 log(1/r)) per radius, target 1
};

struct subcritical_report {
    double p = 0.0;
    double lambda_exponent_target = 0.0;
    std::vector<double> radii;
    std::vector<subcritical_row> rows;
    bool monotone = false; ///< every gap series shrinks along the ladder
    std::string detail;    ///< names of series that break monotonicity
};

/// Shoots once per grid point (in parallel; SUPRAD_THREADS caps the pool)
/// and assembles the branch with energies and bubble counts attached.
/// Solver failures are rethrown with the offending mu prefixed. An empty
/// grid yields an empty branch; the grid must be strictly increasing.
[[nodiscard]] branch sweep(const growth_model& model, const weight& w,
                           const std::vector<double>& mu_grid, const solver_config& cfg = {});

/// Locates discrete slope sign changes on a branch of at least 3 points and
/// refines each by golden section on mu with fresh shots. Only points whose
/// post-refinement flanking slopes keep opposite signs are reported.
[[nodiscard]] std::vector<turning_point> turning_points(const branch& br,
                                                        const growth_model& model,
                                                        const weight& w,
                                                        const solver_config& cfg = {},
                                                        const turning_options& opts = {});

/// Slow-growth limit checks for models with growth ratio q > 2: source and
/// linearized masses against 4, the scaled profile against the logarithmic
/// Green function at each sample radius, and the lambda decay exponent
/// against (2 - p)/2, with per-series monotonicity of the gaps.
[[nodiscard]] subcritical_report subcritical_check(const growth_model& model, const weight& w,
                                                   const std::vector<double>& mu_ladder,
                                                   const std::vector<double>& sample_radii,
                                                   const solver_config& cfg = {});

} // namespace suprad
