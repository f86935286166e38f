#pragma once

#include <vector>

#include "suprad/errors.hpp"

namespace suprad {

enum class profile_kind {
    regular0, ///< z(r) = log(64/(8+r^2)^2), smooth at the origin, z(0) = 0
    tower,    ///< z(r) = log(2 a^2 b / (r^{2-a} (1+b r^a)^2)), b = (sqrt 2 / a)^a
};

/// Pointwise profile values.
struct profile_eval {
    double z;
    double z_prime;
    double z_second;
};

/// Normalization point of a tower profile: z vanishes at r* = a/sqrt(2)
/// and the scaled slope r* z'(r*) equals -2 there.
struct profile_normalization {
    double r_star;
    double z_at;
    double slope_at;
};

/// A radial Liouville bubble: a closed-form solution of
/// -z'' - z'/r = e^z on (0, infinity) with finite mass int e^z r dr.
/// The regular0 family is smooth at the origin with mass 4; the tower
/// family with parameter a in (0, 2] has mass 2a and is singular at the
/// origin unless a = 2. Immutable value type.
class bubble_profile {
  public:
    /// The origin-regular profile normalized by z(0) = 0, z'(0) = 0.
    [[nodiscard]] static bubble_profile regular0();

    /// Tower profile with parameter a in (0, 2]. Domain error otherwise.
    [[nodiscard]] static bubble_profile tower(double a);

    [[nodiscard]] profile_kind kind() const noexcept { return kind_; }

    /// Tower parameter a. Domain error for the regular0 kind.
    [[nodiscard]] double a() const;

    /// log b = a log(sqrt(2)/a), kept in log form so small a stays exact.
    /// Domain error for the regular0 kind.
    [[nodiscard]] double log_b() const;

    /// Analytic mass int_0^infinity e^z r dr: 4 for regular0, 2a for tower.
    [[nodiscard]] double mass() const noexcept;

    /// True when z extends continuously to r = 0 (regular0, or tower a = 2).
    [[nodiscard]] bool regular_at_origin() const noexcept;

    /// z, z', z'' at radius r >= 0. Domain error for r < 0, or for r = 0 on
    /// a profile that is singular there.
    [[nodiscard]] profile_eval evaluate(double r) const;

    /// r^2 e^{z(r)}, the scale-invariant density. Computed as
    /// exp(z + 2 log r) so it never overflows; its maximum over r > 0 is
    /// a^2/2 (regular0 behaves as a = 2), attained at r = a/sqrt(2).
    [[nodiscard]] double r2_ez(double r) const;

    /// Mass by panel quadrature in s = log r, for cross-checking the
    /// analytic value. Agrees with mass() to better than 1e-8 relative.
    [[nodiscard]] double mass_quadrature() const;

    /// max over the grid of |(-z'' - z'/r) / e^z - 1|, the Liouville
    /// equation residual relative to the local density.
    [[nodiscard]] double ode_residual(const std::vector<double>& grid) const;

    /// (r*, z(r*), r* z'(r*)) evaluated at r* = a/sqrt(2); equals
    /// (a/sqrt(2), 0, -2) up to rounding. Domain error for regular0.
    [[nodiscard]] profile_normalization normalization() const;

  private:
    bubble_profile(profile_kind kind, double a, double log_b) noexcept
        : kind_(kind), a_(a), log_b_(log_b) {}

    profile_kind kind_;
    double a_;
    double log_b_;
};

} // namespace suprad
