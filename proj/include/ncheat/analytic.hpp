#ifndef NCHEAT_ANALYTIC_HPP
#define NCHEAT_ANALYTIC_HPP

#include <optional>

namespace ncheat {

/// Parameters of the closed-form comparison solution for the power-law
/// boundary, u(x,t) = sin(pi x / l(t)) * G(t) * exp(xi(x,t)).
///
/// The family solves the heat equation exactly only at alpha = 1; for other
/// exponents it carries a nonzero defect u_t - u_xx (see
/// heat_equation_defect), which callers comparing against simulations must
/// account for.
struct AnalyticSolution {
    double alpha = 1.0;
    double k = 1.0;

    AnalyticSolution(double alpha, double k);
};

/// u(x,t).  Rejects x outside [0, l(t)] and t < 0.  The alpha == 1/2
/// exponent is detected by exact comparison and dispatches to the
/// logarithmic branch of G(t).
double exact_solution(const AnalyticSolution& sol, double x, double t);

/// The t = 0 trace sin(pi x) exp(-k alpha x^2 / 4), used as canonical datum.
double initial_datum(const AnalyticSolution& sol, double x);

/// Closed-form u_t - u_xx of the family.  Identically zero iff alpha == 1.
double heat_equation_defect(const AnalyticSolution& sol, double x, double t);

/// Physical L2 norm of the closed form at time t by composite-trapezoid
/// quadrature, evaluated in log space so that norms far below the double
/// underflow threshold still compare correctly.
double log_solution_norm(const AnalyticSolution& sol, double t, int n_quad = 4000);
double solution_norm(const AnalyticSolution& sol, double t, int n_quad = 4000);

enum class EnvelopeKind { PolyUpper, PolyLower, StretchedUpper, StretchedLower };

/// One-sided decay bound C (1+kt)^{-beta} exp(-C2 t^{se}); unused factors
/// have beta = 0 or C2 = 0.
struct DecayEnvelope {
    EnvelopeKind kind = EnvelopeKind::PolyUpper;
    double coefficient = 1.0;
    double poly_exponent = 0.0;
    double stretch_rate = 0.0;
    double stretch_exponent = 0.0;
    double k = 1.0;
    double valid_from = 0.0;
};

/// Lower envelope for the canonical datum.  alpha = 1/2 keeps the full
/// exponent pi^2/k + 3 alpha/2; alpha > 1/2 uses exponent alpha/2 with the
/// constant-folded coefficient; alpha < 1/2 is the stretched-exponential
/// bound.  Rejects alpha <= 0 or k <= 0.
DecayEnvelope lower_envelope(double alpha, double k, double t0);

/// Upper envelope scaled by the initial-datum norm: (1+kt)^{-alpha/2} for
/// alpha >= 1/2, stretched-exponential with exponent 1 - 2 alpha otherwise.
DecayEnvelope upper_envelope(double alpha, double k, double u0_norm = 1.0);

/// Envelope value at t; rejects t < valid_from.
double evaluate_envelope(const DecayEnvelope& env, double t);
/// log of the envelope value, safe where the value itself underflows.
double log_evaluate_envelope(const DecayEnvelope& env, double t);

/// Smallest time on the grid {0, 0.1, ..., 50} at which both tail
/// inequalities behind the lower envelope hold; nullopt if none does.
std::optional<double> onset_time(double alpha, double k);

} // namespace ncheat

#endif
