#include "suprad/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "suprad/errors.hpp"
#include "suprad/format.hpp"
#include "suprad/growth.hpp"

namespace suprad {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(errc::io, "cannot open '" + path + "' for writing");
    return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) fail(errc::io, "write to '" + path + "' failed");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::usage, "cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) fail(errc::io, "read from '" + path + "' failed");
    return buf.str();
}

double parse_cell(const std::string& cell, const std::string& path, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used == cell.size()) return v;
    } catch (const std::exception&) {
    }
    fail(errc::io, path + ":" + std::to_string(line) + ": bad numeric cell '" + cell + "'");
}

ordered_json config_json(const config_echo& config) {
    ordered_json j = ordered_json::object();
    for (const auto& [key, value] : config) j[key] = value;
    return j;
}

} // namespace

std::vector<double> parse_grid_spec(const std::string& spec) {
    const std::size_t c1 = spec.find(':');
    const std::size_t c2 = c1 == std::string::npos ? c1 : spec.find(':', c1 + 1);
    if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos)
        fail(errc::usage, "grid spec '" + spec + "': expected <min>:<max>:<count>");
    const auto field = [&](std::size_t lo, std::size_t hi) { return spec.substr(lo, hi - lo); };
    double lo = 0.0, hi = 0.0, count = 0.0;
    try {
        std::size_t ulo = 0, uhi = 0, ucount = 0;
        const std::string s_lo = field(0, c1), s_hi = field(c1 + 1, c2),
                          s_count = spec.substr(c2 + 1);
        lo = std::stod(s_lo, &ulo);
        hi = std::stod(s_hi, &uhi);
        count = std::stod(s_count, &ucount);
        if (ulo != s_lo.size() || uhi != s_hi.size() || ucount != s_count.size())
            fail(errc::usage, "grid spec '" + spec + "': trailing characters in a field");
    } catch (const error&) {
        throw;
    } catch (const std::exception&) {
        fail(errc::usage, "grid spec '" + spec + "': non-numeric field");
    }
    if (!(lo > 0.0) || !(hi > lo)) fail(errc::usage, "grid spec '" + spec + "': need 0 < min < max");
    if (!(count >= 2.0) || count != std::floor(count) || count > 1e7)
        fail(errc::usage, "grid spec '" + spec + "': count must be an integer in [2, 1e7]");
    const auto n = static_cast<std::size_t>(count);
    std::vector<double> out;
    out.reserve(n);
    const double log_lo = std::log(lo), log_hi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                            static_cast<double>(n - 1)));
    out.front() = lo;
    out.back() = hi;
    return out;
}

void write_recurrence_csv(const std::string& path, const recurrence_table& table) {
    std::ofstream out = open_out(path);
    out << "k,a_k,delta_k,eta_k,eta_tilde_k\n";
    for (std::size_t i = 0; i < table.size(); ++i)
        out << (i + 1) << ',' << format_g17(table.a[i]) << ',' << format_g17(table.delta[i])
            << ',' << format_g17(table.eta[i]) << ',' << format_g17(table.eta_tilde[i]) << '\n';
    finish_out(out, path);
}

void write_profile_csv(const std::string& path, const bubble_profile& profile,
                       const std::vector<double>& radii) {
    std::ofstream out = open_out(path);
    out << "r,z,z_prime,r2_ez\n";
    for (double r : radii) {
        const profile_eval e = profile.evaluate(r);
        out << format_g17(r) << ',' << format_g17(e.z) << ',' << format_g17(e.z_prime) << ','
            << format_g17(profile.r2_ez(r)) << '\n';
    }
    finish_out(out, path);
}

void write_solution_csv(const std::string& path, const radial_solution& sol,
                        const scaling_diagnostics& diag) {
    if (diag.size() != sol.size())
        fail(errc::domain, "diagnostics length does not match the solution grid");
    std::ofstream out = open_out(path);
    out << "t,r,u,m,log_rhs,phi,psi\n";
    for (std::size_t i = 0; i < sol.size(); ++i) {
        out << format_g17(sol.t[i]) << ',' << format_g17(std::exp(-sol.t[i])) << ','
            << format_g17(sol.u[i]) << ',' << format_g17(sol.m[i]) << ','
            << format_g17(sol.log_rhs[i]) << ',';
        if (diag.valid[i] != 0)
            out << format_g17(diag.phi[i]) << ',' << format_g17(diag.psi[i]);
        else
            out << ',';
        out << '\n';
    }
    finish_out(out, path);
}

void write_solution_json(const std::string& path, const radial_solution& sol,
                         const config_echo& config) {
    ordered_json j;
    j["mu"] = sol.mu;
    j["log_lambda"] = sol.log_lambda;
    j["r_zero_pre_rescale"] = sol.r_zero_pre_rescale;
    j["residuals"] = {{"id1", sol.diagnostics.id1},
                      {"id2", sol.diagnostics.id2},
                      {"pohozaev", sol.diagnostics.pohozaev}};
    j["steps"] = sol.steps;
    j["scalar_mode"] = sol.scalar_mode;
    ordered_json cfg = config_json(config);
    cfg["model"] = sol.model_spec;
    cfg["weight"] = sol.weight_spec;
    j["config"] = cfg;
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
    finish_out(out, path);
}

radial_solution load_solution(const std::string& csv_path, const std::string& json_path) {
    ordered_json j;
    try {
        j = ordered_json::parse(slurp(json_path));
    } catch (const ordered_json::parse_error& e) {
        fail(errc::io, json_path + ": " + e.what());
    }

    radial_solution sol;
    try {
        sol.mu = j.at("mu").get<double>();
        sol.log_lambda = j.at("log_lambda").get<double>();
        sol.r_zero_pre_rescale = j.at("r_zero_pre_rescale").get<double>();
        sol.diagnostics.id1 = j.at("residuals").at("id1").get<double>();
        sol.diagnostics.id2 = j.at("residuals").at("id2").get<double>();
        sol.diagnostics.pohozaev = j.at("residuals").at("pohozaev").get<double>();
        sol.steps = j.at("steps").get<std::size_t>();
        sol.scalar_mode = j.at("scalar_mode").get<std::string>();
        sol.model_spec = j.at("config").at("model").get<std::string>();
        sol.weight_spec = j.at("config").at("weight").get<std::string>();
    } catch (const ordered_json::exception& e) {
        fail(errc::io, json_path + ": " + e.what());
    }
    sol.r_zero = 1.0;
    sol.min_accepted_step = 0.0;

    const growth_model model = growth_model::parse(sol.model_spec);
    const weight w = weight::parse(sol.weight_spec);

    const std::string csv = slurp(csv_path);
    std::istringstream lines(csv);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line.rfind("t,r,u,m,log_rhs", 0) != 0)
                fail(errc::io, csv_path + ": unexpected header '" + line + "'");
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (cells.size() < 5) fail(errc::io, csv_path + ":" + std::to_string(line_no) +
                                                 ": expected at least 5 columns");
        sol.t.push_back(parse_cell(cells[0], csv_path, line_no));
        sol.u.push_back(parse_cell(cells[2], csv_path, line_no));
        sol.m.push_back(parse_cell(cells[3], csv_path, line_no));
        sol.log_rhs.push_back(parse_cell(cells[4], csv_path, line_no));
    }
    if (sol.t.size() < 2) fail(errc::io, csv_path + ": no sample rows");
    for (std::size_t i = 1; i < sol.t.size(); ++i)
        if (!(sol.t[i] < sol.t[i - 1]))
            fail(errc::io, csv_path + ": t column must be strictly decreasing");

    sol.rhs_slope.reserve(sol.t.size());
    for (std::size_t i = 0; i < sol.t.size(); ++i) {
        const double r = std::exp(-sol.t[i]);
        sol.rhs_slope.push_back(model.g_prime_extended(sol.u[i]) * sol.m[i] -
                                r * w.h_prime(r) / w.h(r) - 2.0);
    }
    return sol;
}

void write_detect_json(const std::string& path, const radial_solution& sol,
                       const std::vector<concentration_event>& events, double total_energy,
                       double sum_2a_target, const config_echo& config) {
    ordered_json j;
    j["mu"] = sol.mu;
    j["log_lambda"] = sol.log_lambda;
    j["events"] = ordered_json::array();
    for (const concentration_event& ev : events) {
        ordered_json row;
        row["k"] = ev.k;
        row["r_center"] = ev.r_center;
        row["phi_peak"] = ev.phi_peak;
        row["psi"] = ev.psi_at_peak;
        row["gamma"] = ev.gamma;
        row["window"] = {ev.window_lo, ev.window_hi};
        row["energy_fprime"] = ev.energy_fprime;
        row["energy_f_scaled"] = ev.energy_f_scaled;
        row["height_ratio"] = ev.height_ratio;
        row["height_log"] = ev.height_log;
        row["position_ratio"] = ev.position_ratio;
        row["profile_mismatch"] = ev.profile_mismatch;
        j["events"].push_back(std::move(row));
    }
    j["totals"] = {{"energy", total_energy}, {"sum_2a_target", sum_2a_target}};
    j["config"] = config_json(config);
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
    finish_out(out, path);
}

void write_branch_csv(const std::string& path, const branch& br) {
    std::vector<int> flags(br.size(), 0);
    for (const turning_point& tp : br.turning) {
        std::size_t best = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < br.size(); ++i) {
            const double gap = std::abs(br.points[i].mu - tp.mu);
            if (gap < best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (!br.points.empty()) flags[best] = 1;
    }
    std::ofstream out = open_out(path);
    out << "mu,log_lambda,lambda,total_energy,bubble_count,turning_flag\n";
    for (std::size_t i = 0; i < br.size(); ++i) {
        const branch_point& pt = br.points[i];
        out << format_g17(pt.mu) << ',' << format_g17(pt.log_lambda) << ','
            << format_g17(std::exp(pt.log_lambda)) << ',' << format_g17(pt.total_energy) << ','
            << pt.bubble_count << ',' << flags[i] << '\n';
    }
    finish_out(out, path);
}

} // namespace suprad
