#ifndef NCHEAT_BOUNDARY_HPP
#define NCHEAT_BOUNDARY_HPP

namespace ncheat {

enum class CurveKind { PowerLaw, LogGrowth, Sinusoidal };

/// Moving right boundary l(t) of the spatial domain (0, l(t)), with l(0) = 1.
///
/// PowerLaw is l(t) = (1+kt)^alpha; the alternates are l(t) = 1 + ln(1+t)
/// and l(t) = 1 + sin t.  alpha and k are ignored for the alternates.
struct BoundaryCurve {
    CurveKind kind = CurveKind::PowerLaw;
    double alpha = 1.0;
    double k = 1.0;

    static BoundaryCurve power_law(double alpha, double k);
    static BoundaryCurve log_growth();
    static BoundaryCurve sinusoidal();

    /// l(t).  Rejects t < 0.
    double value(double t) const;
    /// dl/dt.  Rejects t < 0.
    double slope(double t) const;
    /// False only for curves whose domain can shrink (Sinusoidal).
    bool monotone() const { return kind != CurveKind::Sinusoidal; }
};

/// y = x / l(t).  Rejects coordinates outside [0, l(t)].
double to_reference(const BoundaryCurve& curve, double x, double t);
/// x = y * l(t).  Rejects y outside [0, 1].
double to_physical(const BoundaryCurve& curve, double y, double t);

} // namespace ncheat

#endif
