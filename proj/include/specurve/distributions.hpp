#pragma once

namespace specurve {

/// Standard normal CDF.
double normal_cdf(double x) noexcept;

/// Standard normal quantile. Acklam's rational approximation (relative error
/// below 1.2e-9) refined by one Halley step against erfc, so the result is
/// accurate to a few ulps for p in (0, 1). Returns -inf/+inf at 0/1.
double normal_quantile(double p) noexcept;

/// Two-sided p-value of a t statistic with `dof` degrees of freedom.
double student_t_two_sided(double t, double dof);

/// Two-sided p-value of a z statistic.
double normal_two_sided(double z) noexcept;

}  // namespace specurve
