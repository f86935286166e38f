#pragma once

#include <cstddef>
#include <vector>

#include "suprad/errors.hpp"

namespace suprad {

/// One step of an energy recurrence: the ratio between consecutive heights
/// and the next energy coefficient.
struct recurrence_step {
    double ratio;     ///< x = delta_{k+1}/delta_k (finite p) or y = eta_{k+1}/eta_k (limit)
    double log_ratio; ///< log of ratio, exact even when the ratio approaches 1
    double a_next;    ///< next coefficient, always in (0, a_k)
    double residual;  ///< |defining equation| at the returned ratio
};

/// The sequences a_k, delta_k, eta_k, eta~_k for a growth exponent pair
/// (q, p) with 1/q + 1/p = 1. Entry i holds index k = i + 1; every table
/// starts from a_1 = 2, delta_1 = eta_1 = 1. The log arrays carry the exact
/// log-domain values, which stay meaningful after eta underflows to zero.
struct recurrence_table {
    double q = 0; ///< in [1, 2)
    double p = 0; ///< q/(q-1); +infinity when q == 1
    std::vector<double> a;
    std::vector<double> delta;
    std::vector<double> eta;       ///< delta^p (finite p) or the product of step ratios (limit)
    std::vector<double> eta_tilde; ///< eta^{1/q}
    std::vector<double> log_delta;
    std::vector<double> log_eta;
    std::vector<double> log_eta_tilde;
    [[nodiscard]] std::size_t size() const noexcept { return a.size(); }
};

/// Finite-p energy step: solves (2p/(2+a))(1-x) - 1 + x^p = 0 for the unique
/// x in (0,1), excluding the trivial root x = 1, then
/// a_next = 2 - x^{p-1} (2+a). Domain error unless a in (0,2] and p in
/// (2, infinity); pass p = infinity work to step_limit instead.
[[nodiscard]] recurrence_step step_supercritical(double a_k, double p);

/// Limit (p = infinity) energy step: solves (2/(2+a)) log(1/y) - 1 + y = 0
/// for the unique y in (0,1), then a_next = 2 - y (2+a).
[[nodiscard]] recurrence_step step_limit(double a_k);

/// Chains the appropriate step k_max - 1 times. q = 1 selects the limit
/// branch structurally; q in (1,2) uses p = q/(q-1).
[[nodiscard]] recurrence_table build_table(double q, int k_max);

/// Max over k of |eta~_k * sum_{i<=k} 2 a_i / eta~_i - (2 + a_k)|, the
/// cumulative-energy identity every table must satisfy. Evaluated in the
/// log domain so deep rows cannot overflow the running sum.
[[nodiscard]] double check_lemma_b3(const recurrence_table& table);

/// One row of the finite-p to limit comparison.
struct continuity_row {
    double q;
    double a_k;
    double delta_k;
    double eta_k;
};

/// Evaluates a_k, delta_k, eta_k along a list of q values decreasing toward
/// 1. The gaps |a_k(q) - a_k(1)| and |eta_k(q) - eta_k(1)| shrink along the
/// list; delta_k(q) approaches 1.
[[nodiscard]] std::vector<continuity_row> limit_continuity(const std::vector<double>& q_list,
                                                           int k);

} // namespace suprad
