#include "suprad/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "suprad/numerics.hpp"

namespace suprad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Both defining equations, written in the gap variable e = 1 - ratio. The
// trivial root sits at e = 0; the wanted root is the unique zero in (0,1).
// log1p/expm1 keep full relative accuracy when the root approaches either
// endpoint, which happens at deep recursion depth (e -> 0) and near the
// p -> infinity limit.
template <typename F>
double solve_gap(const F& f, const char* what) {
    constexpr int n = 1000;
    constexpr double lo_end = 1e-15;
    constexpr double hi_end = 1.0 - 1e-12;
    double prev_x = lo_end;
    double prev_f = f(lo_end);
    if (prev_f == 0.0) return lo_end;
    int changes = 0;
    double bracket_lo = 0.0, bracket_hi = 0.0;
    for (int i = 1; i < n; ++i) {
        const double x = lo_end + (hi_end - lo_end) * i / (n - 1);
        const double fx = f(x);
        if (fx == 0.0) return x; // landed on the root itself
        if ((fx > 0.0) != (prev_f > 0.0)) {
            ++changes;
            bracket_lo = prev_x;
            bracket_hi = x;
        }
        prev_x = x;
        prev_f = fx;
    }
    if (changes != 1) {
        fail(errc::internal, std::string(what) + ": expected exactly one sign change, found " +
                                 std::to_string(changes));
    }
    return bisect(f, bracket_lo, bracket_hi, 1e-14, what);
}

void require_a(double a_k, const char* what) {
    if (!(a_k > 0.0) || !(a_k <= 2.0)) {
        fail(errc::domain,
             std::string(what) + ": coefficient a must lie in (0, 2], got " + std::to_string(a_k));
    }
}

} // namespace

recurrence_step step_supercritical(double a_k, double p) {
    require_a(a_k, "supercritical energy step");
    if (!(p > 2.0) || std::isinf(p)) {
        fail(errc::domain, "supercritical energy step: p must be finite and above 2, got " +
                               std::to_string(p) + " (the limit step handles p = infinity)");
    }
    const double coeff = 2.0 * p / (2.0 + a_k);
    auto f = [&](double e) { return coeff * e + std::expm1(p * std::log1p(-e)); };
    const double e = solve_gap(f, "supercritical energy step");
    recurrence_step s;
    s.log_ratio = std::log1p(-e);
    s.ratio = 1.0 - e;
    s.residual = std::abs(f(e));
    s.a_next = -a_k - (2.0 + a_k) * std::expm1((p - 1.0) * s.log_ratio);
    if (!(s.a_next > 0.0) || !(s.a_next < a_k)) {
        fail(errc::internal, "supercritical energy step: a_next left (0, a_k)");
    }
    return s;
}

recurrence_step step_limit(double a_k) {
    require_a(a_k, "limit energy step");
    const double coeff = 2.0 / (2.0 + a_k);
    auto f = [&](double e) { return -coeff * std::log1p(-e) - e; };
    const double e = solve_gap(f, "limit energy step");
    recurrence_step s;
    s.log_ratio = std::log1p(-e);
    s.ratio = 1.0 - e;
    s.residual = std::abs(f(e));
    s.a_next = e * (2.0 + a_k) - a_k;
    if (!(s.a_next > 0.0) || !(s.a_next < a_k)) {
        fail(errc::internal, "limit energy step: a_next left (0, a_k)");
    }
    return s;
}

recurrence_table build_table(double q, int k_max) {
    if (!(q >= 1.0) || !(q < 2.0)) {
        fail(errc::domain, "recurrence table needs q in [1, 2), got " + std::to_string(q));
    }
    if (k_max < 1) fail(errc::domain, "recurrence table needs k_max >= 1");
    if (k_max > 1000000) fail(errc::domain, "recurrence table depth is capped at 1e6 rows");

    recurrence_table t;
    t.q = q;
    const bool limit = (q == 1.0);
    t.p = limit ? kInf : q / (q - 1.0);
    if (!limit && t.p > 1e12) {
        fail(errc::precision, "q = " + std::to_string(q) +
                                  " is too close to 1 for the finite-p branch; pass q = 1");
    }
    t.a.reserve(static_cast<std::size_t>(k_max));
    t.delta.reserve(static_cast<std::size_t>(k_max));
    t.eta.reserve(static_cast<std::size_t>(k_max));
    t.eta_tilde.reserve(static_cast<std::size_t>(k_max));
    t.log_delta.reserve(static_cast<std::size_t>(k_max));
    t.log_eta.reserve(static_cast<std::size_t>(k_max));
    t.log_eta_tilde.reserve(static_cast<std::size_t>(k_max));

    double a = 2.0;
    double sum_log = 0.0; // running sum of step log-ratios
    for (int k = 1; k <= k_max; ++k) {
        if (k > 1) {
            const recurrence_step s = limit ? step_limit(a) : step_supercritical(a, t.p);
            sum_log += s.log_ratio;
            a = s.a_next;
        }
        t.a.push_back(a);
        const double ld = limit ? 0.0 : sum_log;
        const double le = limit ? sum_log : t.p * sum_log;
        const double lt = limit ? sum_log : (t.p - 1.0) * sum_log; // eta^{1/q}, p/q = p-1
        t.log_delta.push_back(ld);
        t.log_eta.push_back(le);
        t.log_eta_tilde.push_back(lt);
        t.delta.push_back(std::exp(ld));
        t.eta.push_back(std::exp(le)); // underflows to 0 at depth, logs stay exact
        t.eta_tilde.push_back(std::exp(lt));
    }
    return t;
}

double check_lemma_b3(const recurrence_table& table) {
    if (table.a.empty()) fail(errc::domain, "cumulative-energy identity needs a nonempty table");
    double worst = 0.0;
    double log_sum = -kInf;
    for (std::size_t i = 0; i < table.a.size(); ++i) {
        log_sum = log_add_exp(log_sum, std::log(2.0 * table.a[i]) - table.log_eta_tilde[i]);
        const double lhs = std::exp(table.log_eta_tilde[i] + log_sum);
        worst = std::max(worst, std::abs(lhs - (2.0 + table.a[i])));
    }
    return worst;
}

std::vector<continuity_row> limit_continuity(const std::vector<double>& q_list, int k) {
    if (q_list.empty()) fail(errc::domain, "continuity comparison needs a nonempty q list");
    if (k < 1) fail(errc::domain, "continuity comparison needs k >= 1");
    for (std::size_t i = 0; i < q_list.size(); ++i) {
        if (!(q_list[i] > 1.0) || !(q_list[i] < 2.0)) {
            fail(errc::domain, "continuity comparison needs q in (1, 2), got " +
                                   std::to_string(q_list[i]));
        }
        if (i > 0 && !(q_list[i] < q_list[i - 1])) {
            fail(errc::domain, "continuity comparison needs a strictly decreasing q list");
        }
    }
    std::vector<continuity_row> rows;
    rows.reserve(q_list.size());
    for (double q : q_list) {
        const recurrence_table t = build_table(q, k);
        rows.push_back({q, t.a.back(), t.delta.back(), t.eta.back()});
    }
    return rows;
}

} // namespace suprad
