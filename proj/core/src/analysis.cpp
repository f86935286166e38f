#include "suprad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "suprad/format.hpp"
#include "suprad/numerics.hpp"
#include "suprad/profiles.hpp"

namespace suprad {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// log phi on the dense interpolants; the extended g' keeps it defined
// through the below-threshold boundary layer where it equals the actual
// right-hand side of the shot
double log_phi_at(const radial_solution& sol, const growth_model& model, double t) {
    return sample_log_rhs(sol, t) + std::log(model.g_prime_extended(sample_u(sol, t)));
}

// integral of exp(log lambda + log h + g(u) + 2 sigma) * kernel(u) dsigma
// over radii [r_lo, r_hi]; r_lo = 0 adds the analytic center head
template <typename Kernel>
double window_mass(const radial_solution& sol, const growth_model& model, const weight& w,
                   double r_lo, double r_hi, Kernel&& kernel) {
    const std::size_t n = sol.size();
    const double s_lo = r_lo > 0.0 ? std::log(r_lo) : -std::numeric_limits<double>::infinity();
    const double s_hi = std::log(r_hi);
    double acc = 0.0;
    if (!(s_lo > -sol.t.front()))
        acc += 0.5 * std::exp(sol.log_rhs.front()) * kernel(sol.u.front());
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double sa = -sol.t[i], sb = -sol.t[i + 1];
        const double lo = std::max(sa, s_lo), hi = std::min(sb, s_hi);
        if (!(lo < hi)) continue;
        const quintic_hermite q({sol.u[i], -sol.m[i], -std::exp(sol.log_rhs[i])},
                                {sol.u[i + 1], -sol.m[i + 1], -std::exp(sol.log_rhs[i + 1])},
                                sb - sa);
        acc += gauss_panel(
            kGauss7,
            [&](double s) {
                const double uu = q.value((s - sa) / (sb - sa));
                const double lf = sol.log_lambda + w.log_h(std::exp(s)) + model.g_extended(uu) +
                                  2.0 * s;
                return std::exp(lf) * kernel(uu);
            },
            lo, hi);
    }
    return acc;
}

// refined minimum of log phi between two grid times (t_hi > t_lo)
double refine_phi_min(const radial_solution& sol, const growth_model& model, double t_lo,
                      double t_hi) {
    return golden_minimize([&](double t) { return log_phi_at(sol, model, t); }, t_lo, t_hi,
                           1e-7);
}

} // namespace

scaling_diagnostics compute_diagnostics(const radial_solution& sol, const growth_model& model,
                                        const weight& w) {
    (void)w;
    const std::size_t n = sol.size();
    scaling_diagnostics diag;
    diag.phi.assign(n, 0.0);
    diag.psi.assign(n, 0.0);
    diag.valid.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(sol.u[i] >= model.t0())) continue;
        const double gp = model.g_prime_extended(sol.u[i]);
        diag.valid[i] = 1;
        diag.phi[i] = guarded_exp(sol.log_rhs[i] + std::log(gp));
        diag.psi[i] = gp * sol.m[i];
    }
    return diag;
}

std::vector<concentration_event> detect_bubbles(const scaling_diagnostics& diag,
                                                const radial_solution& sol,
                                                const growth_model& model, const weight& w,
                                                const recurrence_table* table,
                                                const detect_options& opts) {
    const std::size_t n = sol.size();
    if (diag.size() != n)
        throw error(errc::domain, "diagnostics grid does not match the solution grid");
    if (!(opts.peak_floor > 0.0))
        throw error(errc::domain, "peak_floor must be positive");
    if (n < 3) return {};

    // discrete candidates: interior maxima of phi over valid samples, plus
    // the boundary sample when phi is still rising into r = 1 (the single
    // peak can sit on the rim for slowly growing models)
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!diag.valid[i - 1] || !diag.valid[i] || !diag.valid[i + 1]) continue;
        if (diag.phi[i] <= opts.peak_floor) continue;
        if (diag.phi[i] > diag.phi[i - 1] && diag.phi[i] >= diag.phi[i + 1]) peaks.push_back(i);
    }
    if (diag.valid[n - 1] && diag.valid[n - 2] && diag.phi[n - 1] > opts.peak_floor &&
        diag.phi[n - 1] >= diag.phi[n - 2] && (peaks.empty() || peaks.back() + 1 < n - 1))
        peaks.push_back(n - 1);
    if (peaks.empty()) return {};

    const double mu = sol.mu;
    const double g_mu = model.g_extended(mu);
    const double gp_mu = model.g_prime_extended(mu);

    std::vector<concentration_event> events(peaks.size());
    for (std::size_t j = 0; j < peaks.size(); ++j) {
        concentration_event& ev = events[j];
        ev.k = j + 1;
        const std::size_t i = peaks[j];
        const double t_lo = i + 1 < n ? sol.t[i + 1] : sol.t[n - 1];
        const double t_hi = sol.t[i - 1];
        ev.t_center =
            golden_minimize([&](double t) { return -log_phi_at(sol, model, t); }, t_lo, t_hi,
                            1e-9);
        ev.r_center = std::exp(-ev.t_center);
        ev.u_center = sample_u(sol, ev.t_center);
        const double log_phi = log_phi_at(sol, model, ev.t_center);
        ev.phi_peak = std::exp(log_phi);
        ev.psi_at_peak = model.g_prime_extended(ev.u_center) * sample_m(sol, ev.t_center);
        ev.gamma = std::exp(-ev.t_center - 0.5 * log_phi);
        ev.height_ratio = ev.u_center / mu;
        ev.height_log = (mu - ev.u_center) * gp_mu / g_mu;
        ev.position_ratio = ev.t_center / g_mu;
        ev.profile_target_a =
            ev.k == 1 ? 2.0
                      : (table != nullptr && ev.k <= table->size() ? table->a[ev.k - 1] : kNaN);
    }

    // windows tile the disc: cut at the phi minimum between adjacent peaks,
    // open the first window at r = 0, close the last where phi falls under
    // the floor (or at the rim)
    events.front().window_lo = 0.0;
    for (std::size_t j = 0; j + 1 < events.size(); ++j) {
        const double t_cut =
            refine_phi_min(sol, model, events[j + 1].t_center, events[j].t_center);
        events[j].window_hi = std::exp(-t_cut);
        events[j + 1].window_lo = events[j].window_hi;
    }
    {
        concentration_event& last = events.back();
        double hi = 1.0;
        const double log_floor = std::log(opts.peak_floor);
        for (std::size_t i = peaks.back(); i + 1 < n; ++i) {
            const double la = sol.log_rhs[i] + std::log(model.g_prime_extended(sol.u[i]));
            const double lb =
                sol.log_rhs[i + 1] + std::log(model.g_prime_extended(sol.u[i + 1]));
            if (lb < log_floor) {
                const double x = (la - log_floor) / (la - lb);
                hi = std::exp(-(sol.t[i] + x * (sol.t[i + 1] - sol.t[i])));
                break;
            }
        }
        last.window_hi = hi;
    }

    for (std::size_t j = 0; j < events.size(); ++j) {
        const double next_lo =
            j + 1 < events.size() ? events[j + 1].window_lo : events[j].window_hi;
        const window_energy en = window_energies(sol, events[j], model, w, next_lo);
        events[j].energy_fprime = en.fprime;
        events[j].energy_f_scaled = en.f_scaled;
        events[j].gap_energy = en.gap_to_next;
        if (std::isnan(events[j].profile_target_a)) {
            events[j].profile_mismatch = kNaN;
            continue;
        }
        try {
            events[j].profile_mismatch = rescale_window(sol, events[j], model).mismatch;
        } catch (const error&) {
            events[j].profile_mismatch = kNaN;
        }
    }
    return events;
}

window_scaling rescale_window(const radial_solution& sol, const concentration_event& event,
                              const growth_model& model) {
    if (!(event.gamma > 0.0) || !(event.window_hi > event.window_lo))
        throw error(errc::domain, "event window is degenerate");
    if (std::isnan(event.profile_target_a))
        throw error(errc::domain, "event has no comparison profile exponent");
    const bubble_profile prof = bubble_profile::tower(event.profile_target_a);
    const double gp_c = model.g_prime_extended(event.u_center);

    window_scaling out;
    const std::size_t n = sol.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::exp(-sol.t[i]);
        if (r < event.window_lo || r > event.window_hi) continue;
        const double rho = r / event.gamma;
        const double z = gp_c * (sol.u[i] - event.u_center);
        out.rho.push_back(rho);
        out.z.push_back(z);
        const double z_prof = prof.evaluate(rho).z;
        out.mismatch = std::max(out.mismatch, std::abs(z - z_prof));
        const double phi =
            std::exp(sol.log_rhs[i] + std::log(model.g_prime_extended(sol.u[i])));
        out.phi_shape =
            std::max(out.phi_shape, std::abs(phi / prof.r2_ez(rho) - 1.0));
    }
    if (out.rho.size() < 10)
        throw error(errc::domain, "window holds fewer than 10 samples; nothing to compare");
    return out;
}

window_energy window_energies(const radial_solution& sol, const concentration_event& event,
                              const growth_model& model, const weight& w, double next_window_lo) {
    window_energy out;
    out.fprime = window_mass(sol, model, w, event.window_lo, event.window_hi,
                             [&](double u) { return model.g_prime_extended(u); });
    out.f_scaled = model.g_prime_extended(event.u_center) *
                   window_mass(sol, model, w, event.window_lo, event.window_hi,
                               [](double) { return 1.0; });
    out.gap_to_next =
        next_window_lo > event.window_hi
            ? model.g_prime_extended(sol.mu) *
                  window_mass(sol, model, w, event.window_hi, next_window_lo,
                              [](double) { return 1.0; })
            : 0.0;
    return out;
}

double total_energy(const radial_solution& sol, const growth_model& model, const weight& w) {
    return window_mass(sol, model, w, 0.0, 1.0,
                       [&](double u) { return model.g_prime_extended(u); });
}

double total_f_mass(const radial_solution& sol, const growth_model& model, const weight& w) {
    return window_mass(sol, model, w, 0.0, 1.0, [](double) { return 1.0; });
}

trend_report asymptotics_report(
    const std::vector<std::pair<const radial_solution*, const std::vector<concentration_event>*>>&
        runs,
    const growth_model& model, const recurrence_table& table) {
    if (runs.size() < 3)
        throw error(errc::domain, "trend report needs at least 3 runs, got " +
                                      std::to_string(runs.size()));
    for (std::size_t i = 0; i < runs.size(); ++i)
        if (runs[i].first == nullptr || runs[i].second == nullptr)
            throw error(errc::domain, "trend report received a null run");
    for (std::size_t i = 1; i < runs.size(); ++i)
        if (!(runs[i].first->mu > runs[i - 1].first->mu))
            throw error(errc::domain, "trend report needs strictly increasing mu");
    if (table.size() == 0) throw error(errc::domain, "trend report needs a populated table");

    const bool limit_family = model.family() == growth_family::pure_exp;
    const double q = limit_family ? 1.0 : model.q();
    const double p = limit_family ? std::numeric_limits<double>::infinity() : model.p();
    const bool p_finite = std::isfinite(p);

    trend_report rep;
    rep.runs.reserve(runs.size());
    for (const auto& [sol, events] : runs) {
        run_report row;
        row.mu = sol->mu;
        row.log_lambda = sol->log_lambda;
        const double g_mu = model.g_extended(sol->mu);
        row.lambda_exponent = -sol->log_lambda / g_mu;
        row.lambda_exponent_err = q < 2.0   ? std::abs(row.lambda_exponent)
                                  : q > 2.0 ? std::abs(row.lambda_exponent - 0.5 * (2.0 - p))
                                            : kNaN;
        row.first_window_energy = events->empty() ? kNaN : events->front().energy_fprime;
        row.total_energy = total_energy(*sol, model, weight::parse(sol->weight_spec));
        row.sum_2a_target = 0.0;
        for (const concentration_event& ev : *events) {
            if (ev.k <= table.size()) row.sum_2a_target += 2.0 * table.a[ev.k - 1];
            trend_row tr;
            tr.k = ev.k;
            tr.profile_mismatch = ev.profile_mismatch;
            if (ev.k <= table.size()) {
                const double a_k = table.a[ev.k - 1];
                tr.phi_peak_err = std::abs(ev.phi_peak - 0.5 * a_k * a_k);
                tr.height_err = p_finite
                                    ? std::abs(ev.height_ratio - table.delta[ev.k - 1])
                                    : std::abs(ev.height_log + table.log_eta[ev.k - 1]);
                tr.position_err = std::abs(ev.position_ratio - 0.5 * table.eta[ev.k - 1]);
            } else {
                tr.phi_peak_err = kNaN;
                tr.height_err = kNaN;
                tr.position_err = kNaN;
            }
            tr.psi_err = std::abs(ev.psi_at_peak - 2.0);
            row.rows.push_back(tr);
        }
        rep.runs.push_back(std::move(row));
    }

    // net improvement: each tracked series must end at or below its start
    rep.improving = true;
    const auto check = [&](const std::string& name, const std::function<double(const run_report&)>&
                                                        pick) {
        const double first = pick(rep.runs.front());
        const double last = pick(rep.runs.back());
        if (std::isnan(first) || std::isnan(last)) return;
        if (last > first + 1e-12) {
            rep.improving = false;
            if (!rep.detail.empty()) rep.detail += ", ";
            rep.detail += name;
        }
    };
    check("first_window_energy", [](const run_report& r) {
        return std::isnan(r.first_window_energy) ? kNaN : std::abs(r.first_window_energy - 4.0);
    });
    check("lambda_exponent", [](const run_report& r) { return r.lambda_exponent_err; });
    std::size_t k_common = rep.runs.front().rows.size();
    for (const run_report& r : rep.runs) k_common = std::min(k_common, r.rows.size());
    for (std::size_t k = 1; k <= k_common; ++k) {
        const auto field = [k](const std::function<double(const trend_row&)>& f) {
            return [k, f](const run_report& r) { return f(r.rows[k - 1]); };
        };
        const std::string tag = "[k=" + std::to_string(k) + "]";
        check("phi_peak" + tag, field([](const trend_row& t) { return t.phi_peak_err; }));
        check("psi" + tag, field([](const trend_row& t) { return t.psi_err; }));
        check("height" + tag, field([](const trend_row& t) { return t.height_err; }));
        check("position" + tag, field([](const trend_row& t) { return t.position_err; }));
        check("profile" + tag, field([](const trend_row& t) { return t.profile_mismatch; }));
    }
    return rep;
}

} // namespace suprad
