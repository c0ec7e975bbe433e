#include "ncheat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ncheat {

namespace {

// Shared series evaluator.  p uses ratio lambda (x^2-y^2)/4, q the negated
// ratio; terms follow term_{n+1} = term_n * z / ((n+1)(n+2)).
double kernel_series(const KernelParams& params, double x, double y, bool alternating) {
    if (!(y >= 0.0) || y > x * (1.0 + 1e-12)
        || !std::isfinite(x) || !std::isfinite(y))
        throw std::invalid_argument("kernel: arguments must satisfy 0 <= y <= x");
    if (std::sqrt(params.lambda) * x > 700.0)
        throw kernel_range_error("kernel: sqrt(lambda)*x beyond double exponent range");
    if (y == 0.0)
        return 0.0;
    const double z0 = params.lambda * (x * x - y * y) / 4.0;
    const double z = alternating ? -z0 : z0;
    double term = 1.0;
    double sum = term;
    for (int n = 0; n < params.max_terms; ++n) {
        term *= z / static_cast<double>((n + 1) * (n + 2));
        sum += term;
        if (std::abs(term) < params.tol * std::max(std::abs(sum), 1.0))
            break;
    }
    const double value = 0.5 * y * params.lambda * sum;
    if (!std::isfinite(value))
        throw kernel_range_error("kernel: series evaluation overflowed");
    return value;
}

} // namespace

void KernelParams::validate() const {
    if (!(lambda > 0.0))
        throw std::invalid_argument("kernel: lambda must be positive");
    if (!(tol > 0.0) || tol > 1e-6)
        throw std::invalid_argument("kernel: tol must lie in (0, 1e-6]");
    if (max_terms < 20)
        throw std::invalid_argument("kernel: max_terms must be >= 20");
}

double p_kernel(const KernelParams& params, double x, double y) {
    params.validate();
    return kernel_series(params, x, y, false);
}

double q_kernel(const KernelParams& params, double x, double y) {
    params.validate();
    return kernel_series(params, x, y, true);
}

namespace {

// Volterra integral on the reference grid: out_i = in_i +- l * trapezoid
// over s in [0, y_i] of K(l y_i, l s) in(s) ds.
FieldState transform(const FieldState& state, const KernelParams& params, bool inverse) {
    params.validate();
    const std::size_t n = state.values.size() - 1;
    const double h = 1.0 / static_cast<double>(n);
    const double l = state.curve.value(state.t);
    const double sign = inverse ? -1.0 : 1.0;
    FieldState out = state;
    for (std::size_t i = 1; i <= n; ++i) {
        const double xi = l * static_cast<double>(i) * h;
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
            const double kv = kernel_series(params, xi, l * static_cast<double>(j) * h, inverse);
            const double wgt = (j == 0 || j == i) ? 0.5 : 1.0;
            acc += wgt * kv * state.values[j];
        }
        out.values[i] = state.values[i] + sign * l * h * acc;
    }
    return out;
}

} // namespace

FieldState forward_transform(const FieldState& u_state, const KernelParams& params) {
    return transform(u_state, params, false);
}

FieldState inverse_transform(const FieldState& w_state, const KernelParams& params) {
    return transform(w_state, params, true);
}

KernelBoundCheck kernel_bound_check(const KernelParams& params, double l_value) {
    params.validate();
    if (!(l_value > 0.0))
        throw std::invalid_argument("kernel_bound_check: l must be positive");
    KernelBoundCheck result;
    result.bound = std::sqrt(params.lambda) * std::exp(std::sqrt(params.lambda) * l_value);
    for (int i = 0; i <= 100; ++i) {
        const double x = l_value * i / 100.0;
        for (int j = 0; j <= 100; ++j) {
            const double y = x * j / 100.0;
            result.empirical_max = std::max(result.empirical_max,
                                            std::abs(kernel_series(params, x, y, false)));
        }
    }
    return result;
}

KernelResidual kernel_pde_residual(const KernelParams& params, int resolution) {
    params.validate();
    if (resolution < 16)
        throw std::invalid_argument("kernel_pde_residual: resolution must be >= 16");
    const double h = 1.0 / resolution;
    KernelResidual res;
    for (int pass = 0; pass < 2; ++pass) {
        const bool alt = pass == 1;
        const double sign = alt ? -1.0 : 1.0;
        double worst = 0.0;
        for (int i = 1; i < resolution; ++i) {
            // need all four neighbors inside the closed triangle y <= x
            for (int j = 1; j + 1 <= i - 1; ++j) {
                const double x = i * h, y = j * h;
                const double c = kernel_series(params, x, y, alt);
                const double dxx =
                    (kernel_series(params, x + h, y, alt) - 2.0 * c + kernel_series(params, x - h, y, alt)) / (h * h);
                const double dyy =
                    (kernel_series(params, x, y + h, alt) - 2.0 * c + kernel_series(params, x, y - h, alt)) / (h * h);
                worst = std::max(worst, std::abs(-dxx + dyy + sign * params.lambda * c));
            }
        }
        (alt ? res.q_residual : res.p_residual) = worst;
    }
    return res;
}

} // namespace ncheat
