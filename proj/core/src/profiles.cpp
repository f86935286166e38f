#include "suprad/profiles.hpp"

#include <cmath>

#include "suprad/format.hpp"
#include "suprad/numerics.hpp"

namespace suprad {
namespace {

// log(1 + e^t) without overflow on either side
double softplus(double t) {
    return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

// 1 / (1 + e^{-t}), saturating cleanly at 0 and 1
double logistic(double t) {
    if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

} // namespace

bubble_profile bubble_profile::regular0() {
    return bubble_profile(profile_kind::regular0, 0.0, 0.0);
}

bubble_profile bubble_profile::tower(double a) {
    if (!(a > 0.0) || a > 2.0)
        throw error(errc::domain, "tower profile parameter a must lie in (0, 2], got " +
                                      format_shortest(a));
    const double log_b = a * (0.5 * std::log(2.0) - std::log(a));
    return bubble_profile(profile_kind::tower, a, log_b);
}

double bubble_profile::a() const {
    if (kind_ != profile_kind::tower)
        throw error(errc::domain, "parameter a is defined for tower profiles only");
    return a_;
}

double bubble_profile::log_b() const {
    if (kind_ != profile_kind::tower)
        throw error(errc::domain, "parameter b is defined for tower profiles only");
    return log_b_;
}

double bubble_profile::mass() const noexcept {
    return kind_ == profile_kind::regular0 ? 4.0 : 2.0 * a_;
}

bool bubble_profile::regular_at_origin() const noexcept {
    return kind_ == profile_kind::regular0 || a_ == 2.0;
}

profile_eval bubble_profile::evaluate(double r) const {
    if (!(r >= 0.0))
        throw error(errc::domain, "profile radius must be nonnegative, got " + format_shortest(r));
    if (kind_ == profile_kind::regular0) {
        // z = -2 log(1 + r^2/8)
        const double d = 8.0 + r * r;
        return {-2.0 * std::log1p(r * r / 8.0), -4.0 * r / d,
                -4.0 * (8.0 - r * r) / (d * d)};
    }
    if (r == 0.0) {
        if (a_ != 2.0)
            throw error(errc::domain, "tower profile with a = " + format_shortest(a_) +
                                          " is singular at the origin");
        // a = 2: z(0) = log(2 a^2 b) = log 4, z''(0) = -4b = -2
        return {std::log(4.0), 0.0, -2.0};
    }
    const double log_r = std::log(r);
    const double t = log_b_ + a_ * log_r; // log(b r^a)
    const double w = logistic(t);         // b r^a / (1 + b r^a)
    const double s1 = logistic(-t);       // 1 / (1 + b r^a)
    const double z = std::log(2.0 * a_ * a_) + log_b_ - (2.0 - a_) * log_r - 2.0 * softplus(t);
    const double zp = ((a_ - 2.0) - 2.0 * a_ * w) / r;
    // b r^{a-2}, formed in log space so the a = 2 branch stays finite at tiny r
    const double p = std::exp(log_b_ + (a_ - 2.0) * log_r);
    const double zpp = (2.0 - a_) / (r * r) - 2.0 * a_ * p * s1 * ((a_ - 1.0) * s1 - w);
    return {z, zp, zpp};
}

double bubble_profile::r2_ez(double r) const {
    if (!(r >= 0.0))
        throw error(errc::domain, "profile radius must be nonnegative, got " + format_shortest(r));
    if (r == 0.0) return 0.0; // both kinds: r^2 e^z -> 0 (regular z bounded; tower a <= 2)
    if (kind_ == profile_kind::regular0) {
        const double s2 = 2.0 * std::log(r);
        return std::exp(s2 - 2.0 * softplus(s2 - std::log(8.0)));
    }
    const double t = log_b_ + a_ * std::log(r);
    // r^2 e^z = 2 a^2 w (1 - w), bounded by a^2/2
    const double w = logistic(t);
    return 2.0 * a_ * a_ * w * logistic(-t);
}

double bubble_profile::mass_quadrature() const {
    // integrate e^{z + 2s} ds over s = log r; the integrand is a logistic
    // bump of width ~1/a centered where b r^a = 1, decaying like e^{-a|s|}
    const double a_eff = kind_ == profile_kind::regular0 ? 2.0 : a_;
    const double s_center = kind_ == profile_kind::regular0 ? 0.5 * std::log(8.0)
                                                            : -log_b_ / a_eff;
    const double half_width = 33.0 / a_eff; // e^{-33} tail, far below 1e-8 relative
    const double panel = 0.5 / a_eff;
    const int n = static_cast<int>(std::ceil(2.0 * half_width / panel));
    const auto log_integrand = [&](double s) {
        if (kind_ == profile_kind::regular0) return 2.0 * s - 2.0 * softplus(2.0 * s - std::log(8.0));
        const double t = log_b_ + a_ * s;
        return std::log(2.0 * a_ * a_) + log_b_ + a_ * s - 2.0 * softplus(t);
    };
    double total = 0.0;
    double lo = s_center - half_width;
    const double h = 2.0 * half_width / n;
    for (int i = 0; i < n; ++i) {
        total += gauss_panel(kGauss15, [&](double s) { return std::exp(log_integrand(s)); }, lo,
                             lo + h);
        lo += h;
    }
    return total;
}

double bubble_profile::ode_residual(const std::vector<double>& grid) const {
    if (grid.empty()) throw error(errc::domain, "ode residual needs a nonempty grid");
    double worst = 0.0;
    for (const double r : grid) {
        if (!(r > 0.0))
            throw error(errc::domain, "ode residual grid radii must be positive");
        const profile_eval e = evaluate(r);
        const double density = guarded_exp(e.z);
        const double lhs = -e.z_second - e.z_prime / r;
        worst = std::max(worst, std::abs(lhs / density - 1.0));
    }
    return worst;
}

profile_normalization bubble_profile::normalization() const {
    if (kind_ != profile_kind::tower)
        throw error(errc::domain, "normalization data applies to tower profiles only");
    const double r_star = a_ / std::sqrt(2.0);
    const profile_eval e = evaluate(r_star);
    return {r_star, e.z, r_star * e.z_prime};
}

} // namespace suprad
