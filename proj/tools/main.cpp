#include <cmath>
#include <cstddef>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "suprad/analysis.hpp"
#include "suprad/bifurcation.hpp"
#include "suprad/errors.hpp"
#include "suprad/format.hpp"
#include "suprad/growth.hpp"
#include "suprad/io.hpp"
#include "suprad/profiles.hpp"
#include "suprad/recurrence.hpp"
#include "suprad/solver.hpp"

namespace {

using suprad::errc;
using suprad::error;

int exit_code_for(errc kind) {
    switch (kind) {
        case errc::usage:
        case errc::io: return 1;
        case errc::internal: return 3;
        default: return 2;
    }
}

void print_error_json(const error& e) {
    nlohmann::ordered_json j;
    j["error"] = {{"kind", suprad::errc_name(e.kind())}, {"message", e.what()}};
    std::cerr << j.dump() << '\n';
}

// one line per check; returns the failure count
class check_list {
  public:
    void operator()(const std::string& name, bool ok, double value, double limit) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "  value=" << suprad::format_shortest(value)
                  << " limit=" << suprad::format_shortest(limit) << '\n';
        if (!ok) ++failures_;
        ++total_;
    }
    [[nodiscard]] int failures() const { return failures_; }
    [[nodiscard]] int total() const { return total_; }

  private:
    int failures_ = 0;
    int total_ = 0;
};

void verify_recurrence(check_list& check) {
    using suprad::build_table;
    const suprad::recurrence_table t = build_table(1.5, 8);
    const double root3 = std::sqrt(3.0);
    check("a_2 closed form (q=1.5)", std::abs(t.a[1] - (2.0 * root3 - 2.0)) < 1e-12,
          std::abs(t.a[1] - (2.0 * root3 - 2.0)), 1e-12);
    check("delta_2/delta_1 closed form (q=1.5)",
          std::abs(t.delta[1] / t.delta[0] - 0.5 * (root3 - 1.0)) < 1e-12,
          std::abs(t.delta[1] / t.delta[0] - 0.5 * (root3 - 1.0)), 1e-12);
    for (double q : {1.0, 1.5}) {
        const suprad::recurrence_table tab = build_table(q, 50);
        double worst = 0.0;
        for (std::size_t k = 0; k < tab.size(); ++k) {
            double sum = 0.0;
            for (std::size_t i = 0; i <= k; ++i)
                sum += 2.0 * tab.a[i] * std::exp(tab.log_eta_tilde[k] - tab.log_eta_tilde[i]);
            worst = std::max(worst, std::abs(sum - (2.0 + tab.a[k])));
        }
        check("mass partition identity (q=" + suprad::format_shortest(q) + ", k<=50)",
              worst < 1e-10, worst, 1e-10);
    }
}

void verify_profiles(check_list& check) {
    for (double a : {2.0, 1.4641, 1.0, 0.5, 0.1}) {
        const suprad::bubble_profile pr = suprad::bubble_profile::tower(a);
        const double mass_err = std::abs(pr.mass_quadrature() - 2.0 * a) / (2.0 * a);
        check("tower mass a=" + suprad::format_shortest(a), mass_err < 1e-8, mass_err, 1e-8);
        std::vector<double> grid;
        for (int i = 0; i <= 50; ++i)
            grid.push_back(0.05 * a * std::pow(400.0, i / 50.0));
        const double res = pr.ode_residual(grid);
        check("tower field equation a=" + suprad::format_shortest(a), res < 1e-9, res, 1e-9);
        const suprad::profile_normalization norm = pr.normalization();
        const double norm_err = std::max(std::abs(norm.z_at), std::abs(norm.slope_at + 2.0));
        check("tower normalization a=" + suprad::format_shortest(a), norm_err < 1e-10, norm_err,
              1e-10);
    }
    const suprad::bubble_profile reg = suprad::bubble_profile::regular0();
    const double reg_err = std::abs(reg.mass_quadrature() - 4.0) / 4.0;
    check("regular profile mass", reg_err < 1e-8, reg_err, 1e-8);
}

void verify_identities(check_list& check) {
    const suprad::growth_model exp_model = suprad::growth_model::pure_exp();
    const suprad::weight w = suprad::weight::constant();
    for (double mu : {1.0, 2.0 * std::log(2.0), 3.0}) {
        const suprad::radial_solution sol = suprad::shoot_unit_lambda(exp_model, w, mu);
        const double alpha = std::exp(0.5 * mu) - 1.0;
        const double lam_ref = 8.0 * alpha / ((1.0 + alpha) * (1.0 + alpha));
        const double lam_err = std::abs(std::exp(sol.log_lambda) / lam_ref - 1.0);
        check("closed-family lambda mu=" + suprad::format_shortest(mu), lam_err < 1e-8, lam_err,
              1e-8);
        const double res = std::max({sol.diagnostics.id1, sol.diagnostics.id2,
                                     sol.diagnostics.pohozaev});
        check("identity residuals mu=" + suprad::format_shortest(mu), res < 1e-6, res, 1e-6);
    }
    const suprad::radial_solution fast = suprad::shoot_unit_lambda(
        suprad::growth_model::power_exp(3.0), w, std::cbrt(200.0));
    const double res = std::max({fast.diagnostics.id1, fast.diagnostics.id2,
                                 fast.diagnostics.pohozaev});
    check("identity residuals power growth", res < 1e-6, res, 1e-6);
}

void verify_growth(check_list& check) {
    const std::vector<std::string> specs = {"power-exp:p=3", "power-exp:p=1.5",
                                            "power-exp-log:p=3,l=0.3", "multi-exp:k=2"};
    for (const std::string& spec : specs) {
        const suprad::growth_model model = suprad::growth_model::parse(spec);
        check("hypothesis report " + spec, model.check_h1().all_ok(), 0.0, 0.0);
        const suprad::lemma_table tab = model.verify_growth_lemmas(model.default_lemma_t_list());
        std::vector<double> g1, ratio;
        for (const suprad::lemma_row& row : tab.rows) {
            g1.push_back(row.g1);
            ratio.push_back(row.ratio);
        }
        check("tail estimate decreasing " + spec, suprad::residuals_decreasing(g1), g1.back(),
              g1.front());
        check("growth ratio decreasing " + spec, suprad::residuals_decreasing(ratio),
              ratio.back(), ratio.front());
        const double ku_err = std::abs(tab.ku_best_slope - tab.ku_target);
        check("mass slope " + spec, tab.ku_best_feasible && ku_err <= 0.02, ku_err, 0.02);
    }
    // the limit family has no certified (q, p); check the derivative channel
    const suprad::growth_model exp_model = suprad::growth_model::pure_exp();
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
        const double d = 1e-6;
        const double numeric =
            (exp_model.g_extended(t + d) - exp_model.g_extended(t - d)) / (2.0 * d);
        worst = std::max(worst, std::abs(numeric / exp_model.g_prime_extended(t) - 1.0));
    }
    check("limit family derivative consistency", worst < 1e-8, worst, 1e-8);
}

struct solve_flags {
    std::string model;
    std::string h = "const";
    std::string out;
    double mu = 0.0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    suprad::solver_config cfg;
};

void add_solver_flags(CLI::App* cmd, suprad::solver_config& cfg) {
    cmd->add_option("--rel-tol", cfg.rel_tol, "relative step tolerance");
    cmd->add_option("--abs-tol", cfg.abs_tol, "absolute step tolerance");
    cmd->add_option("--start-factor", cfg.start_factor, "start radius as a fraction of the core scale");
    cmd->add_option("--max-step", cfg.max_step, "largest step in t");
    cmd->add_option("--t-padding", cfg.t_padding, "integration margin past the crossing");
    cmd->add_option("--exponent-cap", cfg.exponent_cap, "guard on log-domain exponents");
    cmd->add_option("--max-steps", cfg.max_steps, "accepted-step budget");
}

suprad::config_echo solver_echo(const std::string& command, double mu,
                                const suprad::solver_config& cfg) {
    using suprad::format_shortest;
    return {{"command", command},
            {"mu", format_shortest(mu)},
            {"rel_tol", format_shortest(cfg.rel_tol)},
            {"abs_tol", format_shortest(cfg.abs_tol)},
            {"start_factor", format_shortest(cfg.start_factor)},
            {"max_step", format_shortest(cfg.max_step)},
            {"t_padding", format_shortest(cfg.t_padding)},
            {"exponent_cap", format_shortest(cfg.exponent_cap)},
            {"max_steps", std::to_string(cfg.max_steps)}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"radial concentration toolkit: shooting solver, bubble detection, and branch sweeps for -u'' - u'/r = lambda h f(u) on the unit disc"};
    app.require_subcommand(1);

    // recurrence
    double rec_q = 0.0;
    int rec_k = 0;
    std::string rec_out;
    CLI::App* rec = app.add_subcommand("recurrence", "emit the bubble energy table (a_k, delta_k, eta_k)");
    rec->add_option("--q", rec_q, "growth ratio in [1, 2)")->required();
    rec->add_option("--k", rec_k, "number of rows")->required()->check(CLI::PositiveNumber);
    rec->add_option("--out", rec_out, "output CSV path")->required();

    // profile
    double prof_a = 0.0;
    std::string prof_grid, prof_out;
    CLI::App* prof = app.add_subcommand("profile", "emit a limit profile on a log-spaced grid");
    prof->add_option("--a", prof_a, "tower parameter in (0, 2]")->required();
    prof->add_option("--grid", prof_grid, "radii as <min>:<max>:<count>")->required();
    prof->add_option("--out", prof_out, "output CSV path")->required();

    // solve
    solve_flags sf;
    CLI::App* solve = app.add_subcommand("solve", "shoot one radial solution and write CSV plus sidecar JSON");
    solve->set_help_flag("--help", "print this help message and exit");
    solve->add_option("--model", sf.model, "growth family spec, e.g. power-exp:p=3")->required();
    solve->add_option("--mu", sf.mu, "center value u(0)")->required();
    solve->add_option("--h,--weight", sf.h, "radial weight spec: const, const:v=2, quad:a=-0.5");
    solve->add_option("--out", sf.out, "output CSV path; sidecar goes to <out>.json")->required();
    CLI::Option* opt_lo = solve->add_option("--lambda-lo", sf.lambda_lo, "lower lambda bracket (general mode)");
    CLI::Option* opt_hi = solve->add_option("--lambda-hi", sf.lambda_hi, "upper lambda bracket (general mode)");
    add_solver_flags(solve, sf.cfg);

    // detect
    std::string det_solution, det_model, det_report;
    std::optional<double> det_q;
    CLI::App* det = app.add_subcommand("detect", "locate concentration events in a saved solution");
    det->add_option("--solution", det_solution, "solution CSV written by solve")->required();
    det->add_option("--model", det_model, "growth family spec of the run")->required();
    det->add_option("--q", det_q, "growth ratio for recurrence targets");
    det->add_option("--report", det_report, "output JSON path")->required();

    // sweep
    std::string sw_model, sw_out;
    double sw_lo = 0.0, sw_hi = 0.0;
    int sw_points = 0;
    suprad::solver_config sw_cfg;
    CLI::App* sw = app.add_subcommand("sweep", "trace lambda(mu) and flag turning points");
    sw->add_option("--model", sw_model, "growth family spec")->required();
    sw->add_option("--mu-min", sw_lo, "first center value")->required();
    sw->add_option("--mu-max", sw_hi, "last center value")->required();
    sw->add_option("--points", sw_points, "grid size")->required()->check(CLI::Range(2, 100000));
    sw->add_option("--out", sw_out, "output CSV path")->required();
    add_solver_flags(sw, sw_cfg);

    // verify
    std::string ver_suite;
    CLI::App* ver = app.add_subcommand("verify", "run a named invariant suite");
    ver->add_option("--suite", ver_suite, "growth | profiles | identities | recurrence")
        ->required()
        ->check(CLI::IsMember({"growth", "profiles", "identities", "recurrence"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (rec->parsed()) {
            suprad::write_recurrence_csv(rec_out, suprad::build_table(rec_q, rec_k));
        } else if (prof->parsed()) {
            suprad::write_profile_csv(prof_out, suprad::bubble_profile::tower(prof_a),
                                      suprad::parse_grid_spec(prof_grid));
        } else if (solve->parsed()) {
            const suprad::growth_model model = suprad::growth_model::parse(sf.model);
            const suprad::weight w = suprad::weight::parse(sf.h);
            const bool bracketed = opt_lo->count() > 0 || opt_hi->count() > 0;
            if (bracketed && (opt_lo->count() == 0 || opt_hi->count() == 0))
                suprad::fail(errc::usage, "--lambda-lo and --lambda-hi must be given together");
            if (!bracketed && !w.is_constant())
                suprad::fail(errc::usage,
                             "a non-constant weight needs --lambda-lo and --lambda-hi");
            const suprad::radial_solution sol =
                bracketed
                    ? suprad::shoot_general(model, w, sf.mu, {sf.lambda_lo, sf.lambda_hi}, sf.cfg)
                    : suprad::shoot_unit_lambda(model, w, sf.mu, sf.cfg);
            const suprad::scaling_diagnostics diag = suprad::compute_diagnostics(sol, model, w);
            suprad::write_solution_csv(sf.out, sol, diag);
            suprad::config_echo echo = solver_echo("solve", sf.mu, sf.cfg);
            if (bracketed) {
                echo.emplace_back("lambda_lo", suprad::format_shortest(sf.lambda_lo));
                echo.emplace_back("lambda_hi", suprad::format_shortest(sf.lambda_hi));
            }
            suprad::write_solution_json(sf.out + ".json", sol, echo);
        } else if (det->parsed()) {
            const suprad::radial_solution sol =
                suprad::load_solution(det_solution, det_solution + ".json");
            const suprad::growth_model model = suprad::growth_model::parse(det_model);
            if (model.spec_string() != sol.model_spec)
                suprad::fail(errc::usage, "--model '" + model.spec_string() +
                                              "' does not match the solution file's '" +
                                              sol.model_spec + "'");
            const suprad::weight w = suprad::weight::parse(sol.weight_spec);
            const suprad::scaling_diagnostics diag = suprad::compute_diagnostics(sol, model, w);
            suprad::recurrence_table table;
            if (det_q) table = suprad::build_table(*det_q, 12);
            const std::vector<suprad::concentration_event> events =
                suprad::detect_bubbles(diag, sol, model, w, det_q ? &table : nullptr);
            double sum_2a = 0.0;
            for (const suprad::concentration_event& ev : events)
                if (std::isfinite(ev.profile_target_a)) sum_2a += 2.0 * ev.profile_target_a;
            suprad::config_echo echo = {{"command", "detect"},
                                        {"solution", det_solution},
                                        {"model", model.spec_string()}};
            if (det_q) echo.emplace_back("q", suprad::format_shortest(*det_q));
            suprad::write_detect_json(det_report, sol, events,
                                      suprad::total_energy(sol, model, w), sum_2a, echo);
        } else if (sw->parsed()) {
            if (!(sw_lo < sw_hi))
                suprad::fail(errc::usage, "--mu-min must be strictly below --mu-max");
            const suprad::growth_model model = suprad::growth_model::parse(sw_model);
            const suprad::weight w = suprad::weight::constant();
            std::vector<double> grid;
            grid.reserve(static_cast<std::size_t>(sw_points));
            for (int i = 0; i < sw_points; ++i)
                grid.push_back(sw_lo + (sw_hi - sw_lo) * i / (sw_points - 1));
            suprad::branch br = suprad::sweep(model, w, grid, sw_cfg);
            if (br.size() >= 3) br.turning = suprad::turning_points(br, model, w, sw_cfg);
            suprad::write_branch_csv(sw_out, br);
        } else if (ver->parsed()) {
            check_list check;
            if (ver_suite == "recurrence") verify_recurrence(check);
            else if (ver_suite == "profiles") verify_profiles(check);
            else if (ver_suite == "identities") verify_identities(check);
            else verify_growth(check);
            std::cout << ver_suite << ": " << (check.total() - check.failures()) << " of "
                      << check.total() << " checks passed\n";
            if (check.failures() > 0)
                suprad::fail(errc::internal, "verify suite '" + ver_suite + "' failed " +
                                                 std::to_string(check.failures()) + " of " +
                                                 std::to_string(check.total()) + " checks");
        }
        return 0;
    } catch (const error& e) {
        print_error_json(e);
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        print_error_json(error(errc::internal, e.what()));
        return 3;
    }
}
