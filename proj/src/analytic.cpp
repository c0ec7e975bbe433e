#include "ncheat/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ncheat {

namespace {

constexpr double kPi = std::numbers::pi;

// log of the time factor G(t).  The alpha == 1/2 branch integrates the
// phase equation to a logarithm; any other alpha uses the general power,
// which is continuous across 1/2.
double log_time_factor(double alpha, double k, double t) {
    if (alpha == 0.5)
        return (-alpha / 2.0 - kPi * kPi / k) * std::log1p(k * t);
    return (-alpha / 2.0) * std::log1p(k * t)
           - kPi * kPi * (std::pow(1.0 + k * t, 1.0 - 2.0 * alpha) - 1.0) / (k * (1.0 - 2.0 * alpha));
}

// The two Gaussian factors combined into one exponent; the product form
// overflows for x ~ l(t) at large t while the combined exponent is <= 0
// whenever alpha <= 1.
double x_exponent(double alpha, double k, double x, double t) {
    return -(k * alpha * x * x / 4.0) * (1.0 + k * (1.0 - alpha) * t) / (1.0 + k * t);
}

void check_point(const AnalyticSolution& sol, double x, double t) {
    if (!(t >= 0.0))
        throw std::invalid_argument("exact_solution: time must be >= 0");
    const double l = std::pow(1.0 + sol.k * t, sol.alpha);
    if (!(x >= 0.0) || x > l * (1.0 + 1e-12))
        throw std::invalid_argument("exact_solution: x outside [0, l(t)]");
}

} // namespace

AnalyticSolution::AnalyticSolution(double alpha_, double k_) : alpha(alpha_), k(k_) {
    if (!(alpha > 0.0) || !(k > 0.0))
        throw std::invalid_argument("AnalyticSolution requires alpha > 0 and k > 0");
}

double exact_solution(const AnalyticSolution& sol, double x, double t) {
    check_point(sol, x, t);
    const double l = std::pow(1.0 + sol.k * t, sol.alpha);
    const double phase = std::sin(kPi * x / l);
    return phase * std::exp(log_time_factor(sol.alpha, sol.k, t) + x_exponent(sol.alpha, sol.k, x, t));
}

double initial_datum(const AnalyticSolution& sol, double x) {
    return std::sin(kPi * x) * std::exp(-sol.k * sol.alpha * x * x / 4.0);
}

double heat_equation_defect(const AnalyticSolution& sol, double x, double t) {
    check_point(sol, x, t);
    const double a = sol.alpha, k = sol.k;
    const double l = std::pow(1.0 + k * t, a);
    const double g = kPi / l;
    const double pref = std::exp(log_time_factor(a, k, t) + x_exponent(a, k, x, t));
    // mismatch between the phase the equation demands and the one the
    // family carries; both vanish identically at alpha = 1
    const double P = (k * a / 2.0) * (1.0 + k * (1.0 - a) * t) / (1.0 + k * t);
    const double R = k * a / (2.0 * (1.0 + k * t));
    const double cos_coef = g * x * k * k * a * (1.0 - a) * t / (1.0 + k * t);
    const double sin_coef = k * k * a * (1.0 - a) * t / (2.0 * (1.0 + k * t)) + x * x * (R * R - P * P);
    return pref * (cos_coef * std::cos(g * x) + sin_coef * std::sin(g * x));
}

double log_solution_norm(const AnalyticSolution& sol, double t, int n_quad) {
    if (n_quad < 8)
        throw std::invalid_argument("log_solution_norm: n_quad too small");
    const double l = std::pow(1.0 + sol.k * t, sol.alpha);
    const double h = l / n_quad;
    // ||u||^2 = exp(2 log G) * int sin^2(pi x/l) exp(2 xi) dx; the integral
    // factor stays within double range for alpha <= 1
    double acc = 0.0;
    for (int i = 0; i <= n_quad; ++i) {
        const double x = i * h;
        const double s = std::sin(kPi * x / l);
        const double v = s * s * std::exp(2.0 * x_exponent(sol.alpha, sol.k, x, t));
        acc += (i == 0 || i == n_quad) ? 0.5 * v : v;
    }
    acc *= h;
    return log_time_factor(sol.alpha, sol.k, t) + 0.5 * std::log(acc);
}

double solution_norm(const AnalyticSolution& sol, double t, int n_quad) {
    return std::exp(log_solution_norm(sol, t, n_quad));
}

namespace {

double lemma_constant(double alpha, double k) {
    // C1 = (2/(k alpha))^{3/2} (sqrt(pi) - 1)/8
    return std::pow(2.0 / (k * alpha), 1.5) * (std::sqrt(kPi) - 1.0) / 8.0;
}

void check_rate_params(double alpha, double k) {
    if (!(alpha > 0.0) || !(k > 0.0))
        throw std::invalid_argument("envelope: alpha and k must be positive");
}

} // namespace

DecayEnvelope lower_envelope(double alpha, double k, double t0) {
    check_rate_params(alpha, k);
    const double c1 = lemma_constant(alpha, k);
    DecayEnvelope env;
    env.k = k;
    env.valid_from = t0;
    if (alpha == 0.5) {
        env.kind = EnvelopeKind::PolyLower;
        env.coefficient = 2.0 * std::sqrt(c1);
        env.poly_exponent = kPi * kPi / k + 3.0 * alpha / 2.0;
    } else if (alpha > 0.5) {
        env.kind = EnvelopeKind::PolyLower;
        env.coefficient = 2.0 * std::sqrt(c1) * std::exp(kPi * kPi / (k * (1.0 - 2.0 * alpha)));
        env.poly_exponent = alpha / 2.0;
    } else {
        env.kind = EnvelopeKind::StretchedLower;
        env.coefficient = 2.0 * std::sqrt(c1);
        env.poly_exponent = alpha / 2.0;
        env.stretch_exponent = 1.0 - 2.0 * alpha;
        env.stretch_rate = kPi * kPi * std::pow(k, -2.0 * alpha) / (1.0 - 2.0 * alpha);
    }
    return env;
}

DecayEnvelope upper_envelope(double alpha, double k, double u0_norm) {
    check_rate_params(alpha, k);
    DecayEnvelope env;
    env.k = k;
    env.valid_from = 0.0;
    if (alpha >= 0.5) {
        env.kind = EnvelopeKind::PolyUpper;
        env.coefficient = u0_norm;
        env.poly_exponent = alpha / 2.0;
    } else {
        env.kind = EnvelopeKind::StretchedUpper;
        env.coefficient = u0_norm * std::exp(kPi * kPi / (k * (1.0 - 2.0 * alpha)));
        env.stretch_exponent = 1.0 - 2.0 * alpha;
        env.stretch_rate = kPi * kPi * std::pow(k, -2.0 * alpha) / (1.0 - 2.0 * alpha);
    }
    return env;
}

double log_evaluate_envelope(const DecayEnvelope& env, double t) {
    if (!(t >= env.valid_from))
        throw std::invalid_argument("evaluate_envelope: t before envelope onset");
    double v = std::log(env.coefficient) - env.poly_exponent * std::log1p(env.k * t);
    if (env.stretch_rate != 0.0)
        v -= env.stretch_rate * std::pow(t, env.stretch_exponent);
    return v;
}

double evaluate_envelope(const DecayEnvelope& env, double t) {
    return std::exp(log_evaluate_envelope(env, t));
}

std::optional<double> onset_time(double alpha, double k) {
    check_rate_params(alpha, k);
    for (int i = 0; i <= 500; ++i) {
        const double t = i * 0.1;
        const double Y = std::sqrt(k * alpha / 2.0) * std::pow(1.0 + k * t, alpha) / 2.0;
        const bool tail_small = Y * std::exp(-Y * Y) <= 0.25;
        const bool mass_enough = std::erf(Y) >= 0.5;
        if (tail_small && mass_enough)
            return t;
    }
    return std::nullopt;
}

} // namespace ncheat
