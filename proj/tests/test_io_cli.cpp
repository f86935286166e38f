#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "suprad/io.hpp"

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

std::string slurp_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

struct temp_dir {
    std::string path;
    temp_dir() {
        char tmpl[] = "/tmp/suprad_io_XXXXXX";
        REQUIRE(mkdtemp(tmpl) != nullptr);
        path = tmpl;
    }
    ~temp_dir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    [[nodiscard]] std::string file(const std::string& name) const { return path + "/" + name; }
};

struct cli_result {
    int code = -1;
    std::string out;
    std::string err;
};

cli_result run_cli(const temp_dir& dir, const std::string& args) {
    const char* cli = std::getenv("SUPRAD_CLI");
    REQUIRE(cli != nullptr);
    const std::string out_path = dir.file("stdout.txt"), err_path = dir.file("stderr.txt");
    const std::string cmd =
        "cd " + dir.path + " && " + cli + " " + args + " >" + out_path + " 2>" + err_path;
    const int rc = std::system(cmd.c_str());
    cli_result res;
    res.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    res.out = slurp_file(out_path);
    res.err = slurp_file(err_path);
    return res;
}

bool have_cli() { return std::getenv("SUPRAD_CLI") != nullptr; }

} // namespace

TEST_CASE("grid specs expand to log-spaced radii") {
    const std::vector<double> g = parse_grid_spec("0.01:10:5");
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.01);
    CHECK(g.back() == 10.0);
    for (std::size_t i = 1; i < g.size(); ++i)
        CHECK(g[i] / g[i - 1] == Approx(std::pow(1000.0, 0.25)).epsilon(1e-12));

    for (const std::string bad : {"1:2", "1:2:3:4", "0:2:5", "2:1:5", "-1:2:5", "1:2:1",
                                  "1:2:2.5", "a:2:3", "1:2:3x"})
        CHECK(throws_kind(errc::usage, [&] { (void)parse_grid_spec(bad); }));
}

TEST_CASE("table and profile files carry exact decimals") {
    const temp_dir dir;
    const recurrence_table table = build_table(1.5, 4);
    write_recurrence_csv(dir.file("t.csv"), table);
    const std::string csv = slurp_file(dir.file("t.csv"));
    CHECK(csv.rfind("k,a_k,delta_k,eta_k,eta_tilde_k\n", 0) == 0);
    CHECK(count_lines(csv) == 5);
    // second data row round-trips the binary64 values exactly
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    std::getline(lines, line);
    double k = 0, a = 0, d = 0;
    char c = 0;
    std::istringstream row(line);
    row >> k >> c >> a >> c >> d;
    CHECK(k == 2.0);
    CHECK(a == table.a[1]);
    CHECK(d == table.delta[1]);

    write_profile_csv(dir.file("p.csv"), bubble_profile::tower(1.0), parse_grid_spec("0.1:10:9"));
    const std::string pcsv = slurp_file(dir.file("p.csv"));
    CHECK(pcsv.rfind("r,z,z_prime,r2_ez\n", 0) == 0);
    CHECK(count_lines(pcsv) == 10);
}

TEST_CASE("solution files reload bit for bit") {
    const temp_dir dir;
    const growth_model model = growth_model::pure_exp();
    const weight w = weight::constant();
    const radial_solution sol = shoot_unit_lambda(model, w, 3.0);
    const scaling_diagnostics diag = compute_diagnostics(sol, model, w);
    write_solution_csv(dir.file("s.csv"), sol, diag);
    write_solution_json(dir.file("s.csv.json"), sol, {{"command", "solve"}});

    const radial_solution back = load_solution(dir.file("s.csv"), dir.file("s.csv.json"));
    REQUIRE(back.size() == sol.size());
    for (std::size_t i = 0; i < sol.size(); i += 11) {
        CHECK(back.t[i] == sol.t[i]);
        CHECK(back.u[i] == sol.u[i]);
        CHECK(back.m[i] == sol.m[i]);
        CHECK(back.log_rhs[i] == sol.log_rhs[i]);
        CHECK(back.rhs_slope[i] == sol.rhs_slope[i]);
    }
    CHECK(back.mu == sol.mu);
    CHECK(back.log_lambda == sol.log_lambda);
    CHECK(back.r_zero_pre_rescale == sol.r_zero_pre_rescale);
    CHECK(back.steps == sol.steps);
    CHECK(back.diagnostics.id1 == sol.diagnostics.id1);
    CHECK(back.diagnostics.pohozaev == sol.diagnostics.pohozaev);
    CHECK(back.model_spec == sol.model_spec);
    CHECK(back.weight_spec == sol.weight_spec);
    for (double t : {0.05, 0.7, 2.3})
        CHECK(sample_u(back, t) == sample_u(sol, t));

    // the slope channel also reloads exactly for a general-mode shot with a
    // non-constant weight, where the radius term is in play
    const weight wq = weight::quadratic(0.5);
    const radial_solution gen = shoot_general(model, wq, 1.0, {0.5, 3.0});
    const scaling_diagnostics gd = compute_diagnostics(gen, model, wq);
    write_solution_csv(dir.file("g.csv"), gen, gd);
    write_solution_json(dir.file("g.csv.json"), gen);
    const radial_solution gback = load_solution(dir.file("g.csv"), dir.file("g.csv.json"));
    REQUIRE(gback.size() == gen.size());
    for (std::size_t i = 0; i < gen.size(); i += 17)
        CHECK(gback.rhs_slope[i] == gen.rhs_slope[i]);
}

TEST_CASE("loading rejects missing or corrupt files") {
    const temp_dir dir;
    const growth_model model = growth_model::pure_exp();
    const weight w = weight::constant();
    const radial_solution sol = shoot_unit_lambda(model, w, 1.0);
    const scaling_diagnostics diag = compute_diagnostics(sol, model, w);
    write_solution_csv(dir.file("s.csv"), sol, diag);
    write_solution_json(dir.file("s.csv.json"), sol);

    CHECK(throws_kind(errc::usage,
                      [&] { (void)load_solution(dir.file("nope.csv"), dir.file("s.csv.json")); }));
    CHECK(throws_kind(errc::usage,
                      [&] { (void)load_solution(dir.file("s.csv"), dir.file("nope.json")); }));

    std::ofstream(dir.file("bad.json")) << "{ not json";
    CHECK(throws_kind(errc::io,
                      [&] { (void)load_solution(dir.file("s.csv"), dir.file("bad.json")); }));
    std::ofstream(dir.file("short.json")) << "{\"mu\": 1.0}";
    CHECK(throws_kind(errc::io,
                      [&] { (void)load_solution(dir.file("s.csv"), dir.file("short.json")); }));

    std::ofstream(dir.file("bad_header.csv")) << "x,y\n1,2\n";
    CHECK(throws_kind(errc::io, [&] {
        (void)load_solution(dir.file("bad_header.csv"), dir.file("s.csv.json"));
    }));
    std::ofstream(dir.file("bad_cell.csv"))
        << "t,r,u,m,log_rhs,phi,psi\n1,0.36,oops,0,0,,\n0,1,0,1,0,,\n";
    CHECK(throws_kind(errc::io, [&] {
        (void)load_solution(dir.file("bad_cell.csv"), dir.file("s.csv.json"));
    }));
    std::ofstream(dir.file("bad_order.csv"))
        << "t,r,u,m,log_rhs,phi,psi\n0,1,0,1,0,,\n1,0.36,1,0.5,0,,\n";
    CHECK(throws_kind(errc::io, [&] {
        (void)load_solution(dir.file("bad_order.csv"), dir.file("s.csv.json"));
    }));
}

TEST_CASE("detect reports and branch files follow their schemas") {
    const temp_dir dir;
    const growth_model model = growth_model::pure_exp();
    const weight w = weight::constant();
    const radial_solution sol = shoot_unit_lambda(model, w, 3.0);
    const scaling_diagnostics diag = compute_diagnostics(sol, model, w);
    const auto events = detect_bubbles(diag, sol, model, w);
    write_detect_json(dir.file("rep.json"), sol, events, total_energy(sol, model, w), 4.0,
                      {{"command", "detect"}});
    const nlohmann::json rep = nlohmann::json::parse(slurp_file(dir.file("rep.json")));
    CHECK(rep.at("mu").get<double>() == sol.mu);
    CHECK(rep.at("log_lambda").get<double>() == sol.log_lambda);
    REQUIRE(rep.at("events").size() == events.size());
    const auto& ev = rep.at("events").at(0);
    for (const char* key : {"k", "r_center", "phi_peak", "psi", "gamma", "window",
                            "energy_fprime", "energy_f_scaled", "height_ratio", "height_log",
                            "position_ratio", "profile_mismatch"})
        CHECK(ev.contains(key));
    CHECK(ev.at("window").size() == 2);
    CHECK(rep.at("totals").at("energy").get<double>() == total_energy(sol, model, w));
    CHECK(rep.at("config").at("command").get<std::string>() == "detect");

    branch br = sweep(model, w, {0.5, 1.0, 1.3862943611198906, 1.8, 2.3});
    br.turning = turning_points(br, model, w);
    REQUIRE(br.turning.size() == 1);
    write_branch_csv(dir.file("b.csv"), br);
    const std::string bcsv = slurp_file(dir.file("b.csv"));
    CHECK(bcsv.rfind("mu,log_lambda,lambda,total_energy,bubble_count,turning_flag\n", 0) == 0);
    CHECK(count_lines(bcsv) == 6);
    // the flag sits on the grid row nearest the refined turning point
    std::istringstream lines(bcsv);
    std::string line;
    std::getline(lines, line);
    int flags_seen = 0;
    for (int row = 0; std::getline(lines, line); ++row) {
        const bool flagged = line.size() >= 2 && line.substr(line.size() - 2) == ",1";
        flags_seen += flagged ? 1 : 0;
        CHECK(flagged == (row == 2));
    }
    CHECK(flags_seen == 1);
}

TEST_CASE("write failures surface as io errors") {
    const recurrence_table table = build_table(1.5, 3);
    CHECK(throws_kind(errc::io,
                      [&] { write_recurrence_csv("/nonexistent_dir/t.csv", table); }));
}

TEST_CASE("command line drives a solve and detect pipeline") {
    if (!have_cli()) SKIP("SUPRAD_CLI not set");
    const temp_dir dir;

    const cli_result solve =
        run_cli(dir, "solve --model pure-exp --mu 1.3862943611198906 --out s.csv");
    CHECK(solve.code == 0);
    CHECK(solve.err.empty());
    REQUIRE(std::filesystem::exists(dir.file("s.csv")));
    REQUIRE(std::filesystem::exists(dir.file("s.csv.json")));

    const cli_result detect =
        run_cli(dir, "detect --solution s.csv --model pure-exp --report rep.json");
    CHECK(detect.code == 0);
    const nlohmann::json rep = nlohmann::json::parse(slurp_file(dir.file("rep.json")));
    REQUIRE(rep.at("events").size() == 1);
    CHECK(rep.at("events").at(0).at("phi_peak").get<double>() == Approx(2.0).margin(1e-6));
    CHECK(rep.at("totals").at("energy").get<double>() == Approx(2.0).margin(1e-6));

    // byte-identical reruns
    const cli_result again =
        run_cli(dir, "solve --model pure-exp --mu 1.3862943611198906 --out s2.csv");
    CHECK(again.code == 0);
    CHECK(slurp_file(dir.file("s2.csv")) == slurp_file(dir.file("s.csv")));
    CHECK(slurp_file(dir.file("s2.csv.json")) == slurp_file(dir.file("s.csv.json")));
}

TEST_CASE("command line maps failures onto exit codes") {
    if (!have_cli()) SKIP("SUPRAD_CLI not set");
    const temp_dir dir;

    const cli_result usage = run_cli(dir, "solve --model power-exp:p=two --mu 3 --out x.csv");
    CHECK(usage.code == 1);
    const nlohmann::json uj = nlohmann::json::parse(usage.err);
    CHECK(uj.at("error").at("kind").get<std::string>() == "usage");
    CHECK(uj.at("error").at("message").get<std::string>().find("p=two") != std::string::npos);

    const cli_result budget = run_cli(dir, "solve --model pure-exp --mu 2000 --out x.csv");
    CHECK(budget.code == 2);
    CHECK(nlohmann::json::parse(budget.err).at("error").at("kind").get<std::string>() ==
          "precision");

    const cli_result domain = run_cli(dir, "recurrence --q 2.5 --k 5 --out x.csv");
    CHECK(domain.code == 2);
    CHECK(nlohmann::json::parse(domain.err).at("error").at("kind").get<std::string>() ==
          "domain");

    CHECK(run_cli(dir, "bogus").code == 1);
    CHECK(run_cli(dir, "solve --model pure-exp --mu 1").code == 1); // missing --out
    CHECK(run_cli(dir, "--help").code == 0);

    // a non-constant weight needs an explicit bracket
    const cli_result noweight =
        run_cli(dir, "solve --model pure-exp --mu 1 --h quad:a=0.5 --out q.csv");
    CHECK(noweight.code == 1);
    const cli_result weighted = run_cli(
        dir,
        "solve --model pure-exp --mu 1 --h quad:a=0.5 --lambda-lo 0.5 --lambda-hi 3 --out q.csv");
    CHECK(weighted.code == 0);
    REQUIRE(std::filesystem::exists(dir.file("q.csv.json")));
    const nlohmann::json qj = nlohmann::json::parse(slurp_file(dir.file("q.csv.json")));
    CHECK(qj.at("config").at("weight").get<std::string>() == "quad:a=0.5");
}

TEST_CASE("command line emits tables, sweeps, and verdicts") {
    if (!have_cli()) SKIP("SUPRAD_CLI not set");
    const temp_dir dir;

    CHECK(run_cli(dir, "recurrence --q 1.5 --k 6 --out t.csv").code == 0);
    CHECK(count_lines(slurp_file(dir.file("t.csv"))) == 7);

    CHECK(run_cli(dir, "profile --a 2 --grid 0.05:20:11 --out p.csv").code == 0);
    CHECK(count_lines(slurp_file(dir.file("p.csv"))) == 12);

    const cli_result sw =
        run_cli(dir, "sweep --model pure-exp --mu-min 0.2 --mu-max 4 --points 20 --out b.csv");
    CHECK(sw.code == 0);
    const std::string bcsv = slurp_file(dir.file("b.csv"));
    CHECK(count_lines(bcsv) == 21);
    CHECK(bcsv.find(",1\n") != std::string::npos);

    const cli_result ver = run_cli(dir, "verify --suite recurrence");
    CHECK(ver.code == 0);
    CHECK(ver.out.find("FAIL") == std::string::npos);
    CHECK(ver.out.find("checks passed") != std::string::npos);

    CHECK(run_cli(dir, "verify --suite nonsense").code == 1);
}
