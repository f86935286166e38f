#include "suprad/growth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <mutex>

#include "suprad/format.hpp"
#include "suprad/numerics.hpp"

namespace suprad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// long double headroom for the lemma probes (x86 extended format)
constexpr long double kLongExpCap = 11000.0L;

// t^a (log t)^b with closed-form first and second derivatives.
struct pl_eval {
    double v, d1, d2;
};

pl_eval power_log(double a, double b, double t) {
    if (b == 0.0) {
        // the a = 1 coefficient must short-circuit: 0 * pow(0, -1) is NaN
        const double c2 = a * (a - 1.0);
        return {std::pow(t, a), a * std::pow(t, a - 1.0),
                c2 == 0.0 ? 0.0 : c2 * std::pow(t, a - 2.0)};
    }
    const double L = std::log(t);
    const double v = std::pow(t, a) * std::pow(L, b);
    const double d1 = std::pow(t, a - 1.0) * std::pow(L, b - 1.0) * (a * L + b);
    const double d2 = std::pow(t, a - 2.0) * std::pow(L, b - 2.0) *
                      (a * (a - 1.0) * L * L + b * (2.0 * a - 1.0) * L + b * (b - 1.0));
    return {v, d1, d2};
}

struct pl_eval_l {
    long double v, d1, d2;
};

pl_eval_l power_log_l(double a, double b, long double t) {
    if (b == 0.0) {
        const long double c2 = (long double)a * (a - 1.0);
        return {powl(t, a), a * powl(t, a - 1.0L),
                c2 == 0.0L ? 0.0L : c2 * powl(t, a - 2.0L)};
    }
    const long double L = logl(t);
    return {powl(t, a) * powl(L, b),
            powl(t, a - 1.0L) * powl(L, b - 1.0L) * (a * L + b),
            powl(t, a - 2.0L) * powl(L, b - 2.0L) *
                ((long double)a * (a - 1.0) * L * L + (long double)b * (2.0 * a - 1.0) * L +
                 (long double)b * (b - 1.0))};
}

[[noreturn]] void fail_stage(int stage, int k, double exponent) {
    fail(errc::precision,
         "multi-exp tower stage " + std::to_string(stage) + " of " + std::to_string(k) +
             ": exponent " + std::to_string(exponent) + " exceeds cap " +
             std::to_string(kDefaultExponentCap) +
             "; this scale needs a wider scalar type than binary64");
}

// Stages G_0 = g0(t), G_{i+1} = exp(G_i) up to index `upto`, with the
// derivative pair of the top requested stage carried along.
struct tower_eval {
    std::array<double, 4> stage{};
    double d1 = 0, d2 = 0; // derivatives of stage[upto]
    double g0_d1 = 0, g0_d2 = 0;
};

tower_eval eval_tower(int k, double m, double l, double t, int upto) {
    tower_eval out;
    const pl_eval g0 = power_log(m, l, t);
    out.g0_d1 = g0.d1;
    out.g0_d2 = g0.d2;
    out.stage[0] = g0.v;
    out.d1 = g0.d1;
    out.d2 = g0.d2;
    for (int i = 1; i <= upto; ++i) {
        if (!(out.stage[i - 1] <= kDefaultExponentCap)) fail_stage(i, k, out.stage[i - 1]);
        const double e = std::exp(out.stage[i - 1]);
        out.stage[i] = e;
        out.d2 = (out.d2 + out.d1 * out.d1) * e;
        out.d1 = out.d1 * e;
        if (!std::isfinite(out.d1) || !std::isfinite(out.d2)) fail_stage(i, k, out.stage[i - 1]);
    }
    return out;
}

// Curvature ratio R = G''/(G')^2 of stage `upto`, computed without ever
// leaving the representable range: R_{i+1} = (R_i + 1) exp(-G_i).
double stage_curvature_ratio(const tower_eval& tw, int upto) {
    double R = tw.g0_d2 / (tw.g0_d1 * tw.g0_d1);
    for (int i = 0; i < upto; ++i) R = (R + 1.0) * std::exp(-tw.stage[i]);
    return R;
}

double parse_decimal(const std::string& spec, const std::string& token, const std::string& key) {
    const char* s = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0') {
        fail(errc::usage, "model spec '" + spec + "': bad value '" + token + "' for key '" + key + "'");
    }
    return v;
}

struct kv_pairs {
    std::vector<std::pair<std::string, double>> items;
    [[nodiscard]] const double* find(const std::string& key) const {
        for (const auto& [k, v] : items)
            if (k == key) return &v;
        return nullptr;
    }
};

kv_pairs parse_kv(const std::string& spec, const std::string& body,
                  const std::vector<std::string>& allowed) {
    kv_pairs out;
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t comma = body.find(',', pos);
        if (comma == std::string::npos) comma = body.size();
        const std::string item = body.substr(pos, comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size()) {
            fail(errc::usage, "model spec '" + spec + "': expected key=value, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            fail(errc::usage, "model spec '" + spec + "': unknown key '" + key + "'");
        }
        if (out.find(key) != nullptr) {
            fail(errc::usage, "model spec '" + spec + "': duplicate key '" + key + "'");
        }
        out.items.emplace_back(key, parse_decimal(spec, item.substr(eq + 1), key));
        pos = comma + 1;
    }
    return out;
}

} // namespace

bool residuals_decreasing(const std::vector<double>& r, double slack) {
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        if (!(r[i + 1] <= r[i] + slack)) return false; // NaN rows fail here
    }
    return !r.empty();
}

// ---------------------------------------------------------------------------
// antiderivative cache

struct growth_model::f_cache {
    std::mutex mu;
    std::vector<double> node_t{0.0};
    std::vector<double> node_logF{-kInf};
};

namespace {

// GL15 panel of exp(g_ext) on [a,b], accumulated in the log domain.
template <typename GExt>
double panel_log_integral(const GExt& g_ext, double a, double b) {
    if (!(b > a)) return -kInf;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::array<double, 15> e{};
    double mx = -kInf;
    for (std::size_t i = 0; i < kGauss15.size(); ++i) {
        e[i] = g_ext(mid + half * kGauss15[i].x);
        mx = std::max(mx, e[i]);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < kGauss15.size(); ++i) acc += kGauss15[i].w * std::exp(e[i] - mx);
    return mx + std::log(acc * half);
}

} // namespace

double growth_model::log_F(double t) const {
    if (!(t >= 0.0)) fail(errc::domain, "antiderivative F is defined for t >= 0");
    if (t == 0.0) return -kInf;
    auto g_ext = [this](double s) { return g_extended(s); };
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto& ts = cache_->node_t;
    auto& Fs = cache_->node_logF;
    while (ts.back() < t) {
        const double tn = ts.back();
        // node spacing keeps the panel's exponent swing at or below 1.5
        double step = 1.5 / std::max(g_prime_extended(tn), 3.0);
        while (g_extended(tn + step) - g_extended(tn) > 1.5) {
            step *= 0.5;
            if (step < 1e-12) fail(errc::precision, "antiderivative node step collapsed");
        }
        const double next = tn + step;
        const double logF_next = log_add_exp(Fs.back(), panel_log_integral(g_ext, tn, next));
        if (logF_next > kDefaultExponentCap) {
            fail(errc::precision, "log F exceeds the exponent cap at t = " + std::to_string(next) +
                                      "; this scale needs a wider scalar type than binary64");
        }
        ts.push_back(next);
        Fs.push_back(logF_next);
    }
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t idx = static_cast<std::size_t>(it - ts.begin()) - 1;
    return log_add_exp(Fs[idx], panel_log_integral(g_ext, ts[idx], t));
}

// ---------------------------------------------------------------------------
// construction

growth_model growth_model::pure_exp() {
    growth_model mdl;
    mdl.family_ = growth_family::pure_exp;
    mdl.init_after_params();
    return mdl;
}

growth_model growth_model::power_exp(double p) {
    if (!(p > 1.0)) fail(errc::domain, "power-exp needs p > 1, got p = " + std::to_string(p));
    growth_model mdl;
    mdl.family_ = growth_family::power_exp;
    mdl.p_ = p;
    mdl.init_after_params();
    return mdl;
}

growth_model growth_model::power_exp_log(double p, double l) {
    if (!(p > 1.0)) fail(errc::domain, "power-exp-log needs p > 1, got p = " + std::to_string(p));
    if (!(l >= 0.0)) fail(errc::domain, "power-exp-log needs l >= 0, got l = " + std::to_string(l));
    growth_model mdl;
    mdl.family_ = growth_family::power_exp_log;
    mdl.p_ = p;
    mdl.l_ = l;
    mdl.init_after_params();
    return mdl;
}

growth_model growth_model::multi_exp(int k, double m, double l) {
    if (k < 2 || k > 4) fail(errc::domain, "multi-exp needs k in {2,3,4}, got k = " + std::to_string(k));
    if (!(m >= 1.0)) fail(errc::domain, "multi-exp needs m >= 1, got m = " + std::to_string(m));
    if (!(l >= 0.0)) fail(errc::domain, "multi-exp needs l >= 0, got l = " + std::to_string(l));
    growth_model mdl;
    mdl.family_ = growth_family::multi_exp;
    mdl.k_ = k;
    mdl.m_ = m;
    mdl.l_ = l;
    mdl.init_after_params();
    return mdl;
}

void growth_model::init_after_params() {
    cache_ = std::make_shared<f_cache>();
    switch (family_) {
        case growth_family::pure_exp:
            t0_ = 0.0;
            nominal_q_ = kNaN;
            nominal_p_ = kNaN;
            has_edge_ = false;
            return; // validation family, no construction grid
        case growth_family::power_exp:
            t0_ = 0.0;
            nominal_q_ = p_ / (p_ - 1.0);
            nominal_p_ = p_;
            has_edge_ = true;
            edge_t_ = 0.0;
            edge_g_ = 0.0;
            edge_slope_ = 0.0; // p > 1 makes the zero extension C^1
            return;
        case growth_family::power_exp_log:
            t0_ = std::exp(1.0 + l_);
            nominal_q_ = p_ / (p_ - 1.0);
            nominal_p_ = p_;
            has_edge_ = true;
            edge_t_ = 2.0;
            break;
        case growth_family::multi_exp:
            t0_ = (m_ == 1.0 && l_ == 0.0) ? 1.5 : std::max(2.0, std::exp(1.0 + l_ / m_));
            nominal_q_ = 1.0;
            nominal_p_ = kInf;
            has_edge_ = !(m_ == 1.0 && l_ == 0.0);
            edge_t_ = 2.0;
            break;
    }
    if (has_edge_) {
        const growth_eval at_edge = [&] {
            if (family_ == growth_family::power_exp_log) {
                const pl_eval e = power_log(p_, l_, edge_t_);
                return growth_eval{e.v, e.d1, e.d2};
            }
            const tower_eval tw = eval_tower(k_, m_, l_, edge_t_, k_ - 1);
            return growth_eval{tw.stage[k_ - 1], tw.d1, tw.d2};
        }();
        edge_g_ = at_edge.g;
        edge_slope_ = at_edge.g_prime;
    }
    verify_construction_grid();
}

void growth_model::verify_construction_grid() const {
    // (H1) positivity and, when q = 1, the clause (ii) monotonicities must
    // hold from t0 on; sample doubling quarters until the representable edge.
    const double ratio = std::pow(2.0, 0.25);
    double prev_logP = -kInf;
    double prev_hat = kInf;
    double t = t0_;
    for (int j = 0; j < 48; ++j, t *= ratio) {
        try {
            if (family_ == growth_family::power_exp_log) {
                const pl_eval e = power_log(p_, l_, t);
                if (!(e.d1 > 0.0) || !(e.d2 > 0.0)) {
                    fail(errc::domain, "t0 too small: derivative positivity fails at t = " +
                                           std::to_string(t));
                }
                continue;
            }
            const tower_eval tw = eval_tower(k_, m_, l_, t, std::max(k_ - 3, 0));
            if (!(tw.g0_d1 > 0.0)) {
                fail(errc::domain, "t0 too small: g' positivity fails at t = " + std::to_string(t));
            }
            if (!(stage_curvature_ratio(tw, k_ - 2) > -1.0)) {
                fail(errc::domain, "t0 too small: g'' positivity fails at t = " + std::to_string(t));
            }
            const double logP = log_P(t);
            // inner argument ratio g0'/g0, whose decay caps the tower curvature
            const double log_hat_ratio = std::log(tw.g0_d1) - std::log(tw.stage[0]);
            if (logP < prev_logP - 1e-9) {
                fail(errc::domain, "t0 too small: t g'/g decreases at t = " + std::to_string(t));
            }
            if (log_hat_ratio > prev_hat + 1e-9) {
                fail(errc::domain, "t0 too small: hat-g ratio increases at t = " + std::to_string(t));
            }
            prev_logP = logP;
            prev_hat = log_hat_ratio;
        } catch (const error& e) {
            if (e.kind() == errc::precision) return; // reached the representable edge
            throw;
        }
    }
}

growth_model growth_model::parse(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "pure-exp") {
        if (!body.empty()) fail(errc::usage, "model spec '" + spec + "': pure-exp takes no parameters");
        return pure_exp();
    }
    if (name == "power-exp") {
        const kv_pairs kv = parse_kv(spec, body, {"p"});
        const double* p = kv.find("p");
        if (p == nullptr) fail(errc::usage, "model spec '" + spec + "': power-exp requires p");
        return power_exp(*p);
    }
    if (name == "power-exp-log") {
        const kv_pairs kv = parse_kv(spec, body, {"p", "l"});
        const double* p = kv.find("p");
        if (p == nullptr) fail(errc::usage, "model spec '" + spec + "': power-exp-log requires p");
        const double* l = kv.find("l");
        return power_exp_log(*p, l != nullptr ? *l : 0.0);
    }
    if (name == "multi-exp") {
        const kv_pairs kv = parse_kv(spec, body, {"k", "m", "l"});
        const double* k = kv.find("k");
        if (k == nullptr) fail(errc::usage, "model spec '" + spec + "': multi-exp requires k");
        if (*k != std::floor(*k)) fail(errc::usage, "model spec '" + spec + "': k must be an integer");
        const double* m = kv.find("m");
        const double* l = kv.find("l");
        return multi_exp(static_cast<int>(*k), m != nullptr ? *m : 1.0, l != nullptr ? *l : 0.0);
    }
    fail(errc::usage, "model spec '" + spec + "': unknown family '" + name +
                          "' (expected pure-exp, power-exp, power-exp-log, or multi-exp)");
}

std::string growth_model::spec_string() const {
    switch (family_) {
        case growth_family::pure_exp: return "pure-exp";
        case growth_family::power_exp: return "power-exp:p=" + format_shortest(p_);
        case growth_family::power_exp_log:
            return "power-exp-log:p=" + format_shortest(p_) + ",l=" + format_shortest(l_);
        case growth_family::multi_exp:
            return "multi-exp:k=" + std::to_string(k_) + ",m=" + format_shortest(m_) +
                   ",l=" + format_shortest(l_);
    }
    fail(errc::internal, "unreachable family tag");
}

double growth_model::q() const {
    if (family_ == growth_family::pure_exp) {
        fail(errc::domain, "pure-exp has g'' = 0; the conjugate exponent pair is undefined");
    }
    return nominal_q_;
}

double growth_model::p() const {
    if (family_ == growth_family::pure_exp) {
        fail(errc::domain, "pure-exp has g'' = 0; the conjugate exponent pair is undefined");
    }
    return nominal_p_;
}

// ---------------------------------------------------------------------------
// strict evaluation

growth_eval growth_model::evaluate(double t) const {
    if (!(t >= t0_)) {
        fail(errc::domain, "t = " + std::to_string(t) + " is below the evaluation threshold t0 = " +
                               std::to_string(t0_));
    }
    switch (family_) {
        case growth_family::pure_exp: return {t, 1.0, 0.0};
        case growth_family::power_exp:
        case growth_family::power_exp_log: {
            const pl_eval e = power_log(p_, l_, t);
            return {e.v, e.d1, e.d2};
        }
        case growth_family::multi_exp: {
            const tower_eval tw = eval_tower(k_, m_, l_, t, k_ - 1);
            return {tw.stage[k_ - 1], tw.d1, tw.d2};
        }
    }
    fail(errc::internal, "unreachable family tag");
}

double growth_model::log_g(double t) const {
    if (!(t >= t0_) || !(t > 0.0)) {
        fail(errc::domain, "log g needs t >= max(t0, 0+), got t = " + std::to_string(t));
    }
    switch (family_) {
        case growth_family::pure_exp: return std::log(t);
        case growth_family::power_exp: return p_ * std::log(t);
        case growth_family::power_exp_log: return p_ * std::log(t) + l_ * std::log(std::log(t));
        case growth_family::multi_exp: return eval_tower(k_, m_, l_, t, k_ - 2).stage[k_ - 2];
    }
    fail(errc::internal, "unreachable family tag");
}

double growth_model::log_g_prime(double t) const {
    if (!(t >= t0_) || !(t > 0.0)) {
        fail(errc::domain, "log g' needs t >= max(t0, 0+), got t = " + std::to_string(t));
    }
    switch (family_) {
        case growth_family::pure_exp: return 0.0;
        case growth_family::power_exp: return std::log(p_) + (p_ - 1.0) * std::log(t);
        case growth_family::power_exp_log: {
            const double L = std::log(t);
            return (p_ - 1.0) * std::log(t) + (l_ - 1.0) * std::log(L) + std::log(p_ * L + l_);
        }
        case growth_family::multi_exp: {
            const tower_eval tw = eval_tower(k_, m_, l_, t, k_ - 2);
            double sum = std::log(tw.g0_d1);
            for (int i = 0; i <= k_ - 2; ++i) sum += tw.stage[i];
            return sum;
        }
    }
    fail(errc::internal, "unreachable family tag");
}

double growth_model::Q(double t) const {
    switch (family_) {
        case growth_family::pure_exp:
            fail(errc::domain, "pure-exp has g'' = 0; Q is undefined");
        case growth_family::power_exp:
            if (!(t >= t0_)) fail(errc::domain, "Q needs t >= t0");
            return p_ / (p_ - 1.0); // exact for every t
        case growth_family::power_exp_log: {
            if (!(t >= t0_)) fail(errc::domain, "Q needs t >= t0");
            const double L = std::log(t);
            const double num = (p_ * L + l_) * (p_ * L + l_);
            const double den = p_ * (p_ - 1.0) * L * L + l_ * (2.0 * p_ - 1.0) * L + l_ * (l_ - 1.0);
            return num / den;
        }
        case growth_family::multi_exp: {
            if (!(t >= t0_)) fail(errc::domain, "Q needs t >= t0");
            const tower_eval tw = eval_tower(k_, m_, l_, t, std::max(k_ - 3, 0));
            return 1.0 / (1.0 + stage_curvature_ratio(tw, k_ - 2));
        }
    }
    fail(errc::internal, "unreachable family tag");
}

double growth_model::log_P(double t) const {
    if (!(t >= t0_) || !(t > 0.0)) fail(errc::domain, "P needs t >= max(t0, 0+)");
    switch (family_) {
        case growth_family::pure_exp: return 0.0; // P = t g'/g = 1
        case growth_family::power_exp: return std::log(p_);
        case growth_family::power_exp_log: return std::log(p_ + l_ / std::log(t));
        case growth_family::multi_exp: {
            const tower_eval tw = eval_tower(k_, m_, l_, t, std::max(k_ - 3, 0));
            double sum = std::log(t) + std::log(tw.g0_d1);
            for (int i = 0; i + 3 <= k_; ++i) sum += tw.stage[i];
            return sum;
        }
    }
    fail(errc::internal, "unreachable family tag");
}

// ---------------------------------------------------------------------------
// extended evaluation (solver fuel)

double growth_model::g_extended(double t) const {
    if (has_edge_ && t < edge_t_) return edge_g_ + edge_slope_ * (t - edge_t_);
    switch (family_) {
        case growth_family::pure_exp: return t;
        case growth_family::power_exp:
        case growth_family::power_exp_log: return power_log(p_, l_, t).v;
        case growth_family::multi_exp: return eval_tower(k_, m_, l_, t, k_ - 1).stage[k_ - 1];
    }
    fail(errc::internal, "unreachable family tag");
}

double growth_model::g_prime_extended(double t) const {
    if (has_edge_ && t < edge_t_) return edge_slope_;
    switch (family_) {
        case growth_family::pure_exp: return 1.0;
        case growth_family::power_exp:
        case growth_family::power_exp_log: return power_log(p_, l_, t).d1;
        case growth_family::multi_exp: return eval_tower(k_, m_, l_, t, k_ - 1).d1;
    }
    fail(errc::internal, "unreachable family tag");
}

double growth_model::g_second_extended(double t) const {
    if (has_edge_ && t <= edge_t_) return 0.0; // linear completion has no curvature
    switch (family_) {
        case growth_family::pure_exp: return 0.0;
        case growth_family::power_exp:
        case growth_family::power_exp_log: return power_log(p_, l_, t).d2;
        case growth_family::multi_exp: return eval_tower(k_, m_, l_, t, k_ - 1).d2;
    }
    fail(errc::internal, "unreachable family tag");
}

// ---------------------------------------------------------------------------
// (H1) checks

h1_report growth_model::check_h1(double tol) const {
    if (family_ == growth_family::pure_exp) {
        fail(errc::domain, "(H1) checks are disabled for the pure-exp validation family");
    }
    h1_report rep;
    const double ratio = std::pow(2.0, 0.25);
    std::vector<double> ts, dq, dp, logPs, hat_ratios;
    double t = std::max(t0_, 1.0);
    for (int j = 0; j < 200 && t < 1e12; ++j, t *= ratio) {
        try {
            const double Qt = Q(t);
            const double inv_P = std::exp(-log_P(t));
            ts.push_back(t);
            dq.push_back(std::abs(Qt - nominal_q_));
            dp.push_back(std::abs(inv_P - (std::isinf(nominal_p_) ? 0.0 : 1.0 / nominal_p_)));
            logPs.push_back(log_P(t));
            if (nominal_q_ == 1.0) {
                const tower_eval tw = eval_tower(k_, m_, l_, t, 0);
                hat_ratios.push_back(std::log(tw.g0_d1) - std::log(tw.stage[0]));
            }
            // positivity witnesses
            const bool pos = [&] {
                if (family_ == growth_family::power_exp_log || family_ == growth_family::power_exp) {
                    const pl_eval e = power_log(p_, l_, t);
                    return e.d1 > 0.0 && e.d2 > 0.0;
                }
                const tower_eval tw = eval_tower(k_, m_, l_, t, std::max(k_ - 3, 0));
                return tw.g0_d1 > 0.0 && stage_curvature_ratio(tw, k_ - 2) > -1.0;
            }();
            if (!pos && rep.positivity.ok) {
                rep.positivity.ok = false;
                rep.positivity.worst_t = t;
                rep.positivity.note = "g' or g'' not positive";
            }
        } catch (const error& e) {
            if (e.kind() == errc::precision) break; // representable edge reached
            throw;
        }
    }
    // drift must not grow along doublings past a knee of four samples
    rep.limits.note = "drift of |Q-q| and |1/P-1/p| along t doublings";
    for (std::size_t j = 4; j + 4 < ts.size(); ++j) {
        const double grow_q = dq[j + 4] - (dq[j] + tol);
        const double grow_p = dp[j + 4] - (dp[j] + tol);
        const double worst = std::max(grow_q, grow_p);
        if (worst > 0.0 && worst > rep.limits.worst_value) {
            rep.limits.ok = false;
            rep.limits.worst_t = ts[j + 4];
            rep.limits.worst_value = worst;
        }
    }
    if (nominal_q_ > 1.0) {
        rep.clause_ii.vacuous = true;
        rep.clause_ii.note = "clause (ii) applies only when q = 1";
    } else {
        rep.clause_ii.note = "t g'/g nondecreasing and hat-g ratio nonincreasing";
        for (std::size_t j = 0; j + 1 < logPs.size(); ++j) {
            const double drop = logPs[j] - logPs[j + 1];
            const double rise = hat_ratios[j + 1] - hat_ratios[j];
            const double worst = std::max(drop, rise);
            if (worst > 1e-9 && worst > rep.clause_ii.worst_value) {
                rep.clause_ii.ok = false;
                rep.clause_ii.worst_t = ts[j + 1];
                rep.clause_ii.worst_value = worst;
            }
        }
    }
    return rep;
}

qp_table growth_model::q_p_estimate(const std::vector<double>& t_grid) const {
    if (family_ == growth_family::pure_exp) {
        fail(errc::domain, "Q/P estimation is disabled for the pure-exp validation family");
    }
    if (t_grid.empty()) fail(errc::domain, "q_p_estimate needs a nonempty grid");
    qp_table out;
    for (double t : t_grid) {
        out.rows.push_back({t, Q(t), guarded_exp(log_P(t))});
    }
    out.q_last = out.rows.back().Q;
    out.p_last = out.rows.back().P;
    const double knee = out.rows.back().t / 10.0;
    const double inv_p = std::isinf(nominal_p_) ? 0.0 : 1.0 / nominal_p_;
    for (const auto& row : out.rows) {
        if (row.t < knee) continue;
        out.q_drift_last_decade = std::max(out.q_drift_last_decade, std::abs(row.Q - nominal_q_));
        out.p_drift_last_decade = std::max(out.p_drift_last_decade, std::abs(1.0 / row.P - inv_p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// growth lemma residuals

namespace {

// Long-double tower stages for the lemma probes.
struct tower_l {
    std::array<long double, 4> stage{};
    long double g0_d1 = 0, g0_d2 = 0;
};

tower_l eval_tower_l(int k, double m, double l, double t, int upto) {
    tower_l out;
    const pl_eval_l g0 = power_log_l(m, l, t);
    out.stage[0] = g0.v;
    out.g0_d1 = g0.d1;
    out.g0_d2 = g0.d2;
    for (int i = 1; i <= upto; ++i) {
        if (!(out.stage[i - 1] <= kLongExpCap)) fail_stage(i, k, static_cast<double>(out.stage[i - 1]));
        out.stage[i] = expl(out.stage[i - 1]);
    }
    return out;
}

// G_target(t + delta) - G_target(t) by the exact cascade
// Delta_{i+1} = exp(G_i(t)) expm1(Delta_i), seeded with a full-relative-
// accuracy Delta_0; every factor stays meaningful even when g itself would
// overflow a double.
long double cascade_diff(const tower_l& tw, int k, int target, long double delta0) {
    long double d = delta0;
    for (int i = 1; i <= target; ++i) {
        if (!(tw.stage[i - 1] <= kLongExpCap)) {
            fail_stage(i, k, static_cast<double>(tw.stage[i - 1]));
        }
        d = expl(tw.stage[i - 1]) * expm1l(d);
    }
    return d;
}

long double log_g_l(const growth_model& mdl, double t) {
    switch (mdl.family()) {
        case growth_family::power_exp: return (long double)mdl.param_p() * logl((long double)t);
        case growth_family::power_exp_log:
            return (long double)mdl.param_p() * logl((long double)t) +
                   (long double)mdl.param_l() * logl(logl((long double)t));
        default: fail(errc::internal, "log_g_l supports the power families only");
    }
}

} // namespace

std::vector<double> growth_model::default_lemma_t_list() const {
    switch (family_) {
        case growth_family::pure_exp: return {};
        case growth_family::power_exp: return {25.0, 50.0, 100.0, 200.0};
        case growth_family::power_exp_log: {
            const double b = std::max(12.5, 2.05 * t0_);
            return {b, 2.0 * b, 4.0 * b, 8.0 * b};
        }
        case growth_family::multi_exp: {
            // strict-evaluation horizon by bisection on t
            double lo = t0_, hi = t0_;
            auto representable = [&](double t) {
                try {
                    (void)evaluate(t);
                    return true;
                } catch (const error& e) {
                    if (e.kind() == errc::precision) return false;
                    throw;
                }
            };
            while (hi < 1e6 && representable(hi * 2.0)) hi *= 2.0;
            double bad = hi * 2.0;
            for (int i = 0; i < 80 && bad - hi > 1e-6 * hi; ++i) {
                const double mid = 0.5 * (hi + bad);
                (representable(mid) ? hi : bad) = mid;
            }
            const double t_max = 0.97 * hi;
            const double start = std::max({1.05 * t0_, 1.5, 1.6});
            std::vector<double> list;
            for (double t = start; t <= t_max && list.size() < 4; t *= 2.0) list.push_back(t);
            if (list.size() < 3) {
                const double r = std::sqrt(t_max / start);
                list = {start, start * r, t_max};
            }
            return list;
        }
    }
    fail(errc::internal, "unreachable family tag");
}

lemma_table growth_model::verify_growth_lemmas(const std::vector<double>& t_list,
                                               double y_half_width,
                                               const std::vector<double>& x_ratios) const {
    if (family_ == growth_family::pure_exp) {
        fail(errc::domain, "growth lemma checks are disabled for the pure-exp validation family");
    }
    if (t_list.empty()) fail(errc::domain, "lemma verification needs a nonempty t list");
    for (std::size_t i = 0; i + 1 < t_list.size(); ++i) {
        if (!(t_list[i] < t_list[i + 1])) fail(errc::domain, "lemma t list must be increasing");
    }

    lemma_table out;
    out.ku_target = std::isinf(nominal_p_) ? 0.0 : 1.0 / nominal_p_;

    // K(t) = F(t) log F(t) / f(t); representable while log F stays under cap
    auto K = [this](double s) {
        const double lF = log_F(s);
        return std::exp(lF - g_extended(s)) * lF;
    };
    // horizon where log F (~ g) reaches 93% of the cap
    const double f_budget = 0.93 * kDefaultExponentCap;
    double ku_hi = std::max(t0_, 1.0);
    auto g_below_budget = [&](double s) {
        try {
            return g_extended(s) <= f_budget;
        } catch (const error& e) {
            if (e.kind() == errc::precision) return false;
            throw;
        }
    };
    while (ku_hi < 1e9 && g_below_budget(ku_hi * 2.0)) ku_hi *= 2.0;
    double ku_bad = ku_hi * 2.0;
    for (int i = 0; i < 100 && ku_bad - ku_hi > 1e-9 * ku_hi; ++i) {
        const double mid = 0.5 * (ku_hi + ku_bad);
        (g_below_budget(mid) ? ku_hi : ku_bad) = mid;
    }
    const double t_ku_max = ku_hi;

    auto ku_slope_at = [&](double t, double& h_out) {
        h_out = std::min(0.05 * t, t_ku_max - t);
        if (!(h_out >= 0.004 * t)) return kNaN;
        return (K(t + h_out) - K(t - h_out)) / (2.0 * h_out);
    };

    for (double t : t_list) {
        lemma_row row;
        row.t = t;

        // residual (a): sup over |y| <= M of |g(t + y/g'(t)) - g(t) - y|
        double worst_g1 = 0.0;
        for (int j = -4; j <= 4; ++j) {
            const double y = y_half_width * (static_cast<double>(j) / 4.0);
            if (y == 0.0) continue;
            long double res;
            if (family_ == growth_family::multi_exp) {
                const tower_l tw = eval_tower_l(k_, m_, l_, t, k_ - 2);
                long double log_gp = logl(tw.g0_d1);
                for (int i = 0; i <= k_ - 2; ++i) log_gp += tw.stage[i];
                const long double delta = (y > 0 ? 1.0L : -1.0L) * expl(logl(fabsl((long double)y)) - log_gp);
                // Delta_0 by two-term Taylor: delta is far below the rounding
                // floor of a direct g0 difference at these t
                const long double delta0 = delta * (tw.g0_d1 + 0.5L * delta * tw.g0_d2);
                res = fabsl(cascade_diff(tw, k_, k_ - 1, delta0) - (long double)y);
            } else {
                const pl_eval_l e = power_log_l(p_, l_, t);
                const long double delta = (long double)y / e.d1;
                res = fabsl(power_log_l(p_, l_, t + (double)delta).v - e.v - (long double)y);
            }
            worst_g1 = std::max(worst_g1, static_cast<double>(res));
        }
        row.g1 = worst_g1;

        // residual (b)/(c): growth ratio at rescaled arguments
        double worst_ratio = 0.0;
        for (double x : x_ratios) {
            if (!(x > 0.0)) fail(errc::domain, "lemma x ratios must be positive");
            if (nominal_q_ > 1.0) {
                if (!(x < 1.0)) fail(errc::domain, "q > 1 ratio check needs x in (0,1)");
                if (!(x * t >= std::max(t0_, 1e-6))) {
                    fail(errc::domain, "ratio probe x*t falls below t0; raise the t list");
                }
                const long double r = expl(log_g_l(*this, x * t) - log_g_l(*this, t));
                worst_ratio = std::max(worst_ratio,
                                       std::abs(static_cast<double>(r - powl((long double)x, p_))));
            } else {
                const tower_l tw = eval_tower_l(k_, m_, l_, t, k_ - 2);
                long double logP = logl((long double)t) + logl(tw.g0_d1);
                for (int i = 0; i + 3 <= k_; ++i) logP += tw.stage[i];
                const long double delta = -(long double)x * expl(logl((long double)t) - logP);
                const long double d0 = power_log_l(m_, l_, (long double)t + delta).v - tw.stage[0];
                const long double r = expl(cascade_diff(tw, k_, k_ - 2, d0));
                worst_ratio = std::max(worst_ratio,
                                       std::abs(static_cast<double>(r - expl(-(long double)x))));
            }
        }
        row.ratio = worst_ratio;

        // residual (d): discrete derivative of F log F / f against 1/p
        double h = 0.0;
        const double slope = ku_slope_at(t, h);
        if (std::isfinite(slope)) {
            row.ku_slope = slope;
            row.ku_feasible = true;
        }
        out.rows.push_back(row);
    }

    // summary probe at the top of the representable window
    const double tb = t_ku_max / 1.06;
    if (tb > std::max(t0_, 0.5)) {
        double h = 0.0;
        const double slope = ku_slope_at(tb, h);
        if (std::isfinite(slope)) {
            out.ku_best_t = tb;
            out.ku_best_slope = slope;
            out.ku_best_feasible = true;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// weight

weight weight::constant(double value) {
    if (!(value > 0.0)) fail(errc::domain, "weight must be positive, got " + std::to_string(value));
    return weight(value, 0.0);
}

weight weight::quadratic(double a) {
    if (!(a > -1.0)) fail(errc::domain, "quadratic weight needs a > -1, got " + std::to_string(a));
    return weight(1.0, a);
}

weight weight::parse(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "const") {
        if (body.empty()) return constant();
        const kv_pairs kv = parse_kv(spec, body, {"v"});
        const double* v = kv.find("v");
        if (v == nullptr) fail(errc::usage, "weight spec '" + spec + "': const takes v=<value>");
        return constant(*v);
    }
    if (name == "quad") {
        const kv_pairs kv = parse_kv(spec, body, {"a"});
        const double* a = kv.find("a");
        if (a == nullptr) fail(errc::usage, "weight spec '" + spec + "': quad requires a=<value>");
        return quadratic(*a);
    }
    fail(errc::usage, "weight spec '" + spec + "': unknown weight '" + name +
                          "' (expected const or quad)");
}

double weight::h(double r) const { return value_ * (1.0 + quad_a_ * r * r); }

double weight::h_prime(double r) const { return value_ * 2.0 * quad_a_ * r; }

double weight::log_h(double r) const { return std::log(value_) + std::log1p(quad_a_ * r * r); }

std::string weight::spec_string() const {
    if (quad_a_ == 0.0) {
        return value_ == 1.0 ? "const" : "const:v=" + format_shortest(value_);
    }
    return "quad:a=" + format_shortest(quad_a_);
}

} // namespace suprad
