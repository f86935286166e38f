#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "suprad/errors.hpp"

namespace suprad {

enum class growth_family {
    pure_exp,      ///< f = e^t; validation family, curvature checks disabled
    power_exp,     ///< f = exp(t^p), p > 1
    power_exp_log, ///< f = exp(t^p (log t)^l), p > 1, l >= 0
    multi_exp,     ///< f = exp_k(t^m (log t)^l), k-fold exponential, k in {2,3,4}
};

struct growth_eval {
    double g;        ///< g(t) = log f(t)
    double g_prime;  ///< g'(t)
    double g_second; ///< g''(t)
};

struct qp_row {
    double t;
    double Q; ///< g'(t)^2 / (g(t) g''(t))
    double P; ///< t g'(t) / g(t)
};

/// Sampled Q/P table plus the convergence summary used by the (H1) checks.
struct qp_table {
    std::vector<qp_row> rows;
    double q_last = 0;            ///< Q at the largest sampled t
    double p_last = 0;            ///< P at the largest sampled t
    double q_drift_last_decade = 0; ///< max |Q - q| over the top decade of t
    double p_drift_last_decade = 0; ///< max |1/P - 1/p| over the top decade of t
};

/// One clause of the (H1) report with its worst sampled witness.
struct h1_clause {
    bool ok = true;
    bool vacuous = false;
    double worst_t = 0;
    double worst_value = 0;
    std::string note;
};

struct h1_report {
    h1_clause positivity; ///< g' > 0 and g'' > 0 on the sample grid
    h1_clause limits;     ///< |Q-q| and |1/P-1/p| shrink along doublings
    h1_clause clause_ii;  ///< q = 1 only: t g'/g nondecreasing, inner ratio g0'/g0 nonincreasing
    [[nodiscard]] bool all_ok() const {
        return positivity.ok && limits.ok && clause_ii.ok;
    }
};

/// Residuals of the asymptotic growth properties at one probe point t.
/// ratio holds the q>1 power-ratio residual or the q=1 exponential-shift
/// residual, whichever applies to the model.
struct lemma_row {
    double t = 0;
    double g1 = std::numeric_limits<double>::quiet_NaN();
    double ratio = std::numeric_limits<double>::quiet_NaN();
    double ku_slope = std::numeric_limits<double>::quiet_NaN();
    bool ku_feasible = false; ///< false when log F would exceed the exponent cap near t
};

struct lemma_table {
    std::vector<lemma_row> rows;
    double ku_target = 0;     ///< 1/p, zero when p is infinite
    double ku_best_t = 0;     ///< largest t where the slope probe fits under the cap
    double ku_best_slope = std::numeric_limits<double>::quiet_NaN();
    bool ku_best_feasible = false;
};

/// Returns true when each successive residual is at most the previous one
/// plus slack (slack absorbs rounding noise once residuals hit the floor).
[[nodiscard]] bool residuals_decreasing(const std::vector<double>& r, double slack = 1e-12);

/// Immutable nonlinearity f(t) = e^{g(t)} with closed-form derivatives,
/// log-domain evaluation for the exponential towers, and a cached
/// antiderivative F(t) = integral of f from 0 to t.
///
/// Two evaluation regimes coexist:
///   - strict accessors (evaluate, log_g, Q, ...) enforce t >= t0, the
///     threshold above which the family's asymptotic structure is certified;
///   - *_extended accessors continue g below t0 by a C^1 linear completion
///     so the shooting solver can evaluate the right-hand side for any
///     solution value, including slightly negative overshoots.
class growth_model {
  public:
    static growth_model pure_exp();
    static growth_model power_exp(double p);
    static growth_model power_exp_log(double p, double l);
    static growth_model multi_exp(int k, double m = 1.0, double l = 0.0);

    /// Parses the CLI mini-grammar: `power-exp:p=3`, `power-exp-log:p=2,l=1`,
    /// `multi-exp:k=2,m=1,l=0`, `pure-exp`. Unknown families or keys, or
    /// malformed pairs, raise usage errors; out-of-range values raise domain
    /// errors.
    static growth_model parse(const std::string& spec);

    [[nodiscard]] growth_family family() const noexcept { return family_; }
    [[nodiscard]] std::string spec_string() const; ///< canonical round-trip spec
    [[nodiscard]] double t0() const noexcept { return t0_; }
    [[nodiscard]] bool h1_certified() const noexcept { return family_ != growth_family::pure_exp; }

    /// Conjugate exponent pair: 1/p + 1/q = 1, q in [1,2) here, p in (2,inf].
    /// Domain error for pure-exp, whose curvature machinery is disabled.
    [[nodiscard]] double q() const;
    [[nodiscard]] double p() const; ///< +infinity when q == 1

    // Strict evaluation on t >= t0.
    [[nodiscard]] growth_eval evaluate(double t) const;
    [[nodiscard]] double log_g(double t) const;       ///< tower stage, not log(evaluate().g)
    [[nodiscard]] double log_g_prime(double t) const;
    [[nodiscard]] double Q(double t) const;
    [[nodiscard]] double log_P(double t) const;

    // C^1 completion, defined for every real t the solver can reach.
    [[nodiscard]] double g_extended(double t) const;
    [[nodiscard]] double g_prime_extended(double t) const;
    [[nodiscard]] double g_second_extended(double t) const;

    /// log F(t), F(t) = integral_0^t exp(g_extended(s)) ds; t >= 0.
    /// Backed by a shared, mutex-protected, deterministic node cache.
    [[nodiscard]] double log_F(double t) const;

    [[nodiscard]] h1_report check_h1(double tol = 0.05) const;
    [[nodiscard]] qp_table q_p_estimate(const std::vector<double>& t_grid) const;
    [[nodiscard]] lemma_table verify_growth_lemmas(const std::vector<double>& t_list,
                                                   double y_half_width = 3.0,
                                                   const std::vector<double>& x_ratios = {0.5, 0.7}) const;

    /// Probe points used by the CLI and the property suite: doubling steps
    /// placed inside the family's representable horizon.
    [[nodiscard]] std::vector<double> default_lemma_t_list() const;

    [[nodiscard]] double param_p() const noexcept { return p_; }
    [[nodiscard]] double param_l() const noexcept { return l_; }
    [[nodiscard]] double param_m() const noexcept { return m_; }
    [[nodiscard]] int param_k() const noexcept { return k_; }

  private:
    growth_model() = default;

    struct f_cache;

    growth_family family_ = growth_family::pure_exp;
    double p_ = 0, l_ = 0, m_ = 0;
    int k_ = 0;
    double t0_ = 0;
    double nominal_q_ = 0, nominal_p_ = 0;
    double edge_t_ = 0, edge_g_ = 0, edge_slope_ = 0; ///< linear completion below edge_t_
    bool has_edge_ = false;
    std::shared_ptr<f_cache> cache_;

    void init_after_params();
    void verify_construction_grid() const;
};

/// Radial coefficient h(r) on the unit disc: positive and C^1.
/// Spec grammar: `const`, `const:v=2`, `quad:a=-0.5` (h = 1 + a r^2, a > -1).
class weight {
  public:
    static weight constant(double value = 1.0);
    static weight quadratic(double a);
    static weight parse(const std::string& spec);

    [[nodiscard]] double h(double r) const;
    [[nodiscard]] double h_prime(double r) const;
    [[nodiscard]] double log_h(double r) const;
    /// True when h is constant, which lets the solver integrate once with
    /// lambda = 1 and recover lambda from the zero crossing by rescaling.
    [[nodiscard]] bool is_constant() const noexcept { return quad_a_ == 0.0; }
    [[nodiscard]] std::string spec_string() const;

  private:
    weight(double value, double quad_a) : value_(value), quad_a_(quad_a) {}
    double value_ = 1.0;  ///< constant factor
    double quad_a_ = 0.0; ///< h = value * (1 + quad_a r^2) with value>0, quad_a>-1
};

} // namespace suprad
