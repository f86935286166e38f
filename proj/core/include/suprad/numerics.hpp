#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>

#include "suprad/errors.hpp"

namespace suprad {

/// Largest exponent fed to std::exp before the library refuses to continue.
/// binary64 overflows just above 709.78; the default leaves headroom so that
/// sums of capped terms stay finite.
inline constexpr double kDefaultExponentCap = 700.0;

/// exp(x) that treats overflow as a hard error instead of returning inf.
/// Deep underflow flushes to zero, which every caller here can absorb.
[[nodiscard]] inline double guarded_exp(double x, double cap = kDefaultExponentCap) {
    if (!(x <= cap)) {
        fail(errc::precision,
             "exponent " + std::to_string(x) + " exceeds cap " + std::to_string(cap) +
                 "; this scale needs a wider scalar type than binary64");
    }
    return std::exp(x); // subnormal / zero on strong underflow, by design
}

/// log(exp(a) + exp(b)) without leaving the log domain.
[[nodiscard]] inline double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double hi = a > b ? a : b;
    double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

struct gl_node {
    double x; ///< abscissa on [-1, 1]
    double w; ///< weight, weights sum to 2
};

/// 7 point Gauss Legendre rule, exact through degree 13.
inline constexpr std::array<gl_node, 7> kGauss7 = {{
    {-0.949107912342758524526, 0.129484966168869693271},
    {-0.741531185599394439864, 0.279705391489276667901},
    {-0.405845151377397166907, 0.38183005050511894495},
    {0.0, 0.417959183673469387755},
    {0.405845151377397166907, 0.38183005050511894495},
    {0.741531185599394439864, 0.279705391489276667901},
    {0.949107912342758524526, 0.129484966168869693271},
}};

/// 15 point Gauss Legendre rule, exact through degree 29.
inline constexpr std::array<gl_node, 15> kGauss15 = {{
    {-0.98799251802048542849, 0.0307532419961172683546},
    {-0.937273392400705904308, 0.0703660474881081247093},
    {-0.848206583410427216201, 0.107159220467171935012},
    {-0.724417731360170047416, 0.139570677926154314448},
    {-0.570972172608538847537, 0.166269205816993933553},
    {-0.394151347077563369897, 0.186161000015562211027},
    {-0.201194093997434522301, 0.198431485327111576456},
    {0.0, 0.202578241925561272881},
    {0.201194093997434522301, 0.198431485327111576456},
    {0.394151347077563369897, 0.186161000015562211027},
    {0.570972172608538847537, 0.166269205816993933553},
    {0.724417731360170047416, 0.139570677926154314448},
    {0.848206583410427216201, 0.107159220467171935012},
    {0.937273392400705904308, 0.0703660474881081247093},
    {0.98799251802048542849, 0.0307532419961172683546},
}};

/// Integrate f over [a, b] with a single application of the given rule.
template <std::size_t N, typename F>
[[nodiscard]] double gauss_panel(const std::array<gl_node, N>& rule, F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (const auto& n : rule) acc += n.w * f(mid + half * n.x);
    return acc * half;
}

/// State interpolated by a quintic two point Hermite patch.
struct hermite_endpoint {
    double y;  ///< value
    double d;  ///< first derivative
    double s;  ///< second derivative
};

/// Quintic Hermite interpolant on one interval of width h, matching value,
/// slope, and curvature at both ends. Interpolation error is O(h^6).
class quintic_hermite {
  public:
    quintic_hermite(hermite_endpoint left, hermite_endpoint right, double h)
        : a_(left), b_(right), h_(h) {}

    /// Value at local coordinate x in [0, 1].
    [[nodiscard]] double value(double x) const {
        const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
        const double H0 = 1.0 - 10.0 * x3 + 15.0 * x4 - 6.0 * x5;
        const double H1 = x - 6.0 * x3 + 8.0 * x4 - 3.0 * x5;
        const double H2 = 0.5 * x2 - 1.5 * x3 + 1.5 * x4 - 0.5 * x5;
        const double H3 = 10.0 * x3 - 15.0 * x4 + 6.0 * x5;
        const double H4 = -4.0 * x3 + 7.0 * x4 - 3.0 * x5;
        const double H5 = 0.5 * x3 - x4 + 0.5 * x5;
        return a_.y * H0 + h_ * a_.d * H1 + h_ * h_ * a_.s * H2 +
               b_.y * H3 + h_ * b_.d * H4 + h_ * h_ * b_.s * H5;
    }

    /// First derivative with respect to the underlying variable (not x).
    [[nodiscard]] double derivative(double x) const {
        const double x2 = x * x, x3 = x2 * x, x4 = x3 * x;
        const double dH0 = -30.0 * x2 + 60.0 * x3 - 30.0 * x4;
        const double dH1 = 1.0 - 18.0 * x2 + 32.0 * x3 - 15.0 * x4;
        const double dH2 = x - 4.5 * x2 + 6.0 * x3 - 2.5 * x4;
        const double dH3 = 30.0 * x2 - 60.0 * x3 + 30.0 * x4;
        const double dH4 = -12.0 * x2 + 28.0 * x3 - 15.0 * x4;
        const double dH5 = 1.5 * x2 - 4.0 * x3 + 2.5 * x4;
        return (a_.y * dH0 + h_ * a_.d * dH1 + h_ * h_ * a_.s * dH2 +
                b_.y * dH3 + h_ * b_.d * dH4 + h_ * h_ * b_.s * dH5) /
               h_;
    }

  private:
    hermite_endpoint a_;
    hermite_endpoint b_;
    double h_;
};

/// Bisection on [lo, hi] where f(lo) and f(hi) have opposite signs.
/// Shrinks the bracket to the requested width and returns its midpoint.
template <typename F>
[[nodiscard]] double bisect(F&& f, double lo, double hi, double width,
                            const char* what = "bisect") {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        fail(errc::bracketing, std::string(what) + ": interval [" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "] does not bracket a sign change");
    }
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // bracket at binary64 resolution
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Golden section minimizer for a unimodal scalar function on [lo, hi].
/// Returns the abscissa of the minimum once the bracket is narrower than
/// width or the evaluation budget is spent.
template <typename F>
[[nodiscard]] double golden_minimize(F&& f, double lo, double hi, double width,
                                     int max_evals = 200) {
    constexpr double invphi = 0.6180339887498948482;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    int evals = 2;
    while (hi - lo > width && evals < max_evals) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        }
        ++evals;
    }
    return 0.5 * (lo + hi);
}

} // namespace suprad
