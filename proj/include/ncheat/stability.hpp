#ifndef NCHEAT_STABILITY_HPP
#define NCHEAT_STABILITY_HPP

#include <optional>

#include "ncheat/solver.hpp"

namespace ncheat {

enum class Regime { Exponential, AnalogousExponential, Polynomial, Undetermined };

struct FitWindow {
    double t_begin = 0.0;
    double t_end = 0.0;
};

struct ExpFit {
    double rate = 0.0;       // r in C e^{-r t}
    double r_squared = 0.0;
};

struct PolyFit {
    double gamma = 0.0;      // gamma in C (1+kt)^{-gamma}
    double r_squared = 0.0;
};

struct StretchedFit {
    double rate = 0.0;       // C1 in C e^{-C1 t^beta}
    double beta = 0.0;
    double r_squared = 0.0;
};

struct DecayFit {
    Regime regime = Regime::Undetermined;
    double rate = 0.0;
    double stretch_exponent = 0.0;  // only for AnalogousExponential
    double r_squared = 0.0;
    FitWindow window;
};

/// Norm samples at or below this are dropped before taking logs.  Values
/// down to ~1e-290 still carry full relative precision in double, and the
/// open-loop decay for small alpha legitimately reaches ~1e-115 within the
/// preset horizons, so the floor only guards the denormal range.
inline constexpr double kNormFloor = 1e-250;

/// Least-squares line through (t, log norm); rate = -slope.  Requires at
/// least 10 usable samples in the window.
ExpFit fit_exponential(const DecayTrace& trace, FitWindow window);

/// Least-squares line through (log(1+kt), log norm); gamma = -slope.
PolyFit fit_polynomial(const DecayTrace& trace, FitWindow window, double k);

/// Least-squares line through (t^beta, log norm).  With a hint beta is
/// fixed; otherwise golden-section search over beta in [0.05, 0.95]
/// maximizes R^2.
StretchedFit fit_stretched(const DecayTrace& trace, FitWindow window,
                           std::optional<double> beta_hint = std::nullopt);

/// Fits all three models on the window [T/5, T] resampled at 200
/// log-spaced times and picks the best R^2.  Ties within 0.005 resolve to
/// the strongest regime (Exponential > AnalogousExponential > Polynomial),
/// except that a stretched fit whose beta lands on a search boundary is
/// treated as degenerate (it is mimicking a neighboring family) and cannot
/// claim the tie.  Returns Undetermined when the best R^2 < 0.9.
DecayFit classify(const DecayTrace& trace, double k, double alpha);

} // namespace ncheat

#endif
