#ifndef FDRKIT_NUMERICS_HPP
#define FDRKIT_NUMERICS_HPP

namespace fdrkit::numerics {

/// Degrees of freedom for the Student's t-distribution. Must be positive.
struct DegreesOfFreedom {
    double nu;
    explicit DegreesOfFreedom(double nu_);
};

/// Standard normal cumulative distribution function.
/// Throws std::domain_error for non-finite input.
double normal_cdf(double z);

/// Inverse of normal_cdf. Accepts p in [0,1]; p == 0 and p == 1 map to
/// the -inf / +inf sentinels used by the threshold report.
double normal_inv_cdf(double p);

/// Student's t cumulative distribution function, evaluated through the
/// regularized incomplete beta function.
double t_cdf(double t, DegreesOfFreedom dof);

/// Inverse of t_cdf. Same [0,1] domain and infinity sentinels as
/// normal_inv_cdf.
double t_inv_cdf(double p, DegreesOfFreedom dof);

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation. Exposed for testing.
double incomplete_beta(double a, double b, double x);

} // namespace fdrkit::numerics

#endif
