#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "suprad/growth.hpp"
#include "suprad/recurrence.hpp"
#include "suprad/solver.hpp"

namespace suprad {

/// Per-sample scaling and energy functions along a solution, on the
/// solution's own grid. phi(r) = lambda r^2 h(r) f'(u(r)) measures how far
/// the local scale is from unity; psi(r) = g'(u(r)) m(r) is the flux seen
/// through the nonlinearity. Samples with u below the model threshold t0
/// are flagged invalid instead of extrapolated.
struct scaling_diagnostics {
    std::vector<double> phi;
    std::vector<double> psi;
    std::vector<char> valid;
    [[nodiscard]] std::size_t size() const noexcept { return phi.size(); }
};

/// One concentration layer: an interior local maximum of phi together with
/// its window, scale, energies, and distance to the matching limit profile.
struct concentration_event {
    std::size_t k = 0;      ///< 1-based, ordered by decreasing center height
    double t_center = 0;    ///< log(1/r) of the refined peak
    double r_center = 0;
    double u_center = 0;    ///< u at the refined peak
    double phi_peak = 0;
    double psi_at_peak = 0;
    double gamma = 0;       ///< scale: lambda h(r_c) f'(u(r_c)) gamma^2 = 1
    double window_lo = 0;   ///< inner window radius (0 for the first event)
    double window_hi = 0;   ///< outer window radius
    double energy_fprime = 0;   ///< integral of lambda h f'(u) r dr over the window
    double energy_f_scaled = 0; ///< g'(u_c) integral of lambda h f(u) r dr
    double gap_energy = 0;      ///< g'(mu)-scaled mass between this window and the next
    double height_ratio = 0;    ///< u_c / mu
    double height_log = 0;      ///< (mu - u_c) g'(mu) / g(mu)
    double position_ratio = 0;  ///< log(1/r_c) / g(mu)
    double profile_target_a = 0; ///< exponent of the comparison profile (NaN if unknown)
    double profile_mismatch = 0; ///< sup |z_scaled - z_profile| over the window
};

struct detect_options {
    double peak_floor = 1e-3; ///< ignore phi maxima at or below this level
};

/// A concentration window mapped to profile coordinates rho = r / gamma.
struct window_scaling {
    std::vector<double> rho;
    std::vector<double> z;  ///< g'(u_c) (u(gamma rho) - u_c)
    double mismatch = 0;    ///< sup |z - z_profile(rho)|
    double phi_shape = 0;   ///< sup |phi(gamma rho) / (rho^2 e^{z_profile}) - 1|
};

struct window_energy {
    double fprime = 0;
    double f_scaled = 0;
    double gap_to_next = 0;
};

/// One event row of the trend report: absolute distance of each measured
/// quantity from its predicted limit.
struct trend_row {
    std::size_t k = 0;
    double phi_peak_err = 0;  ///< |phi_peak - a_k^2 / 2|
    double psi_err = 0;       ///< |psi_at_peak - 2|
    double height_err = 0;    ///< vs delta_k (finite p) or log(1/eta_k) (limit)
    double position_err = 0;  ///< |position_ratio - eta_k / 2|
    double profile_mismatch = 0;
};

struct run_report {
    double mu = 0;
    double log_lambda = 0;
    double first_window_energy = 0; ///< target 4
    double lambda_exponent = 0;     ///< log(1/lambda) / g(mu)
    double lambda_exponent_err = 0;
    double total_energy = 0;        ///< integral of lambda h f'(u) r dr over the disc
    double sum_2a_target = 0;       ///< sum of 2 a_i over the detected events
    std::vector<trend_row> rows;
};

/// Trend report over a mu-ladder: per-run rows plus a net-improvement
/// verdict for every tracked error series (last run vs first run).
struct trend_report {
    std::vector<run_report> runs;
    bool improving = false;
    std::string detail; ///< series that failed to improve, empty when none
};

/// Computes phi and psi on the solution grid. Where u < t0 the strict
/// accessors are undefined and the sample is flagged invalid.
[[nodiscard]] scaling_diagnostics compute_diagnostics(const radial_solution& sol,
                                                      const growth_model& model, const weight& w);

/// Finds the interior local maxima of phi above opts.peak_floor and builds
/// one event per peak: golden-section refinement of the peak on the dense
/// interpolants, windows cut at the phi minimum between adjacent peaks
/// (the first window opens at r = 0; the last closes where phi falls below
/// the floor, or at r = 1), window energies, and the profile comparison.
/// The recurrence table supplies the comparison exponent a_k; it may be
/// null, in which case only the first event (a_1 = 2) gets a profile, and
/// later events carry NaN targets. Returns an empty list when phi has no
/// qualifying interior maximum.
[[nodiscard]] std::vector<concentration_event> detect_bubbles(
    const scaling_diagnostics& diag, const radial_solution& sol, const growth_model& model,
    const weight& w, const recurrence_table* table = nullptr, const detect_options& opts = {});

/// Maps the event window to profile coordinates and measures the sup-norm
/// distance to the comparison profile of exponent event.profile_target_a,
/// plus the phi-shape check on the same window. Requires at least 10 grid
/// samples inside the window (domain error otherwise).
[[nodiscard]] window_scaling rescale_window(const radial_solution& sol,
                                            const concentration_event& event,
                                            const growth_model& model);

/// Window quadratures: integral of lambda h f'(u) r dr and the g'(u_c)
/// scaled integral of lambda h f(u) r dr over [window_lo, window_hi], and
/// the g'(mu)-scaled mass between window_hi and next_window_lo (zero when
/// next_window_lo <= window_hi).
[[nodiscard]] window_energy window_energies(const radial_solution& sol,
                                            const concentration_event& event,
                                            const growth_model& model, const weight& w,
                                            double next_window_lo);

/// Total concentration mass of the run: integral of lambda h f'(u) r dr
/// over the whole disc, including the analytic center head.
[[nodiscard]] double total_energy(const radial_solution& sol, const growth_model& model,
                                  const weight& w);

/// Unscaled source mass: integral of lambda h f(u) r dr over the whole disc.
[[nodiscard]] double total_f_mass(const radial_solution& sol, const growth_model& model,
                                  const weight& w);

/// Assembles the asymptotic trend report for a ladder of at least 3 runs
/// with strictly increasing mu. Targets come from the recurrence table and
/// the model's (q, p); the improving flag records whether every tracked
/// error series ends lower than it starts.
[[nodiscard]] trend_report asymptotics_report(
    const std::vector<std::pair<const radial_solution*, const std::vector<concentration_event>*>>&
        runs,
    const growth_model& model, const recurrence_table& table);

} // namespace suprad
