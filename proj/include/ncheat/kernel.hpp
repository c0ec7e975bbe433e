#ifndef NCHEAT_KERNEL_HPP
#define NCHEAT_KERNEL_HPP

#include <stdexcept>
#include <string>

#include "ncheat/solver.hpp"

namespace ncheat {

/// Thrown when a kernel evaluation leaves the range of double (the series
/// grows like exp(sqrt(lambda) x)).
class kernel_range_error : public std::runtime_error {
public:
    explicit kernel_range_error(const std::string& what) : std::runtime_error(what) {}
};

struct KernelParams {
    double lambda = 6.5;   // target damping rate
    double tol = 1e-10;    // relative series truncation tolerance
    int max_terms = 64;

    void validate() const;
};

/// Transformation kernel p(x,y) = (y/2) sum_n lambda^{n+1} ((x^2-y^2)/4)^n / (n!(n+1)!)
/// on the triangle 0 <= y <= x.  p(x,x) = lambda x / 2 and p(x,0) = 0 hold
/// exactly (single surviving term / empty sum).
double p_kernel(const KernelParams& params, double x, double y);

/// Inverse kernel: the alternating series (lambda -> -lambda in the ratio),
/// validated by the residual and round-trip checks rather than a printed
/// closed form.
double q_kernel(const KernelParams& params, double x, double y);

/// w_i = u_i + l * trapezoid_{s in [0, y_i]} p(l y_i, l s) u(s) ds,
/// the Volterra transform evaluated over the physical triangle.
FieldState forward_transform(const FieldState& u_state, const KernelParams& params);

/// u_i = w_i - l * trapezoid q(l y_i, l s) w(s) ds.
FieldState inverse_transform(const FieldState& w_state, const KernelParams& params);

struct KernelBoundCheck {
    double empirical_max = 0.0;            // max |p| over a 101x101 triangle sample
    double bound = 0.0;                    // sqrt(lambda) exp(sqrt(lambda) l)
};
KernelBoundCheck kernel_bound_check(const KernelParams& params, double l_value);

struct KernelResidual {
    double p_residual = 0.0;   // max | -p_xx + p_yy + lambda p | on the unit triangle
    double q_residual = 0.0;   // max | -q_xx + q_yy - lambda q |
};
/// Centered-difference residuals at interior triangle points of an
/// (resolution x resolution) grid; both decrease at order 2 in 1/resolution.
KernelResidual kernel_pde_residual(const KernelParams& params, int resolution);

} // namespace ncheat

#endif
