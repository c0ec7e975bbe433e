#include "ncheat/boundary.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ncheat {

namespace {

void require_nonnegative_time(double t) {
    if (!(t >= 0.0))
        throw std::invalid_argument("boundary curve: time must be >= 0, got " + std::to_string(t));
}

} // namespace

BoundaryCurve BoundaryCurve::power_law(double alpha, double k) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("power-law boundary requires alpha > 0");
    if (!(k > 0.0))
        throw std::invalid_argument("power-law boundary requires k > 0");
    return BoundaryCurve{CurveKind::PowerLaw, alpha, k};
}

BoundaryCurve BoundaryCurve::log_growth() {
    return BoundaryCurve{CurveKind::LogGrowth, 0.0, 0.0};
}

BoundaryCurve BoundaryCurve::sinusoidal() {
    return BoundaryCurve{CurveKind::Sinusoidal, 0.0, 0.0};
}

double BoundaryCurve::value(double t) const {
    require_nonnegative_time(t);
    switch (kind) {
    case CurveKind::PowerLaw:
        return std::pow(1.0 + k * t, alpha);
    case CurveKind::LogGrowth:
        return 1.0 + std::log1p(t);
    case CurveKind::Sinusoidal:
        return 1.0 + std::sin(t);
    }
    return 1.0;
}

double BoundaryCurve::slope(double t) const {
    require_nonnegative_time(t);
    switch (kind) {
    case CurveKind::PowerLaw:
        return k * alpha * std::pow(1.0 + k * t, alpha - 1.0);
    case CurveKind::LogGrowth:
        return 1.0 / (1.0 + t);
    case CurveKind::Sinusoidal:
        return std::cos(t);
    }
    return 0.0;
}

double to_reference(const BoundaryCurve& curve, double x, double t) {
    const double l = curve.value(t);
    if (!(x >= 0.0) || x > l * (1.0 + 1e-12))
        throw std::invalid_argument("to_reference: x outside current domain [0, l(t)]");
    return x / l;
}

double to_physical(const BoundaryCurve& curve, double y, double t) {
    if (!(y >= 0.0) || y > 1.0 + 1e-12)
        throw std::invalid_argument("to_physical: y outside [0, 1]");
    return y * curve.value(t);
}

} // namespace ncheat
