#ifndef NCHEAT_CONTROLLER_HPP
#define NCHEAT_CONTROLLER_HPP

#include <span>
#include <vector>

#include "ncheat/kernel.hpp"
#include "ncheat/solver.hpp"

namespace ncheat {

/// One control sample.  u_derivative is a centered finite-difference
/// estimate filled in after the run; it is NaN for the first record.
struct ControlRecord {
    double t = 0.0;
    double u_value = 0.0;
    double u_derivative = 0.0;
};

struct RegularitySummary {
    double l2_u = 0.0;           // discrete L2(0,T) norm of U
    double l2_du = 0.0;          // of U'
    double l2_weighted_du = 0.0; // of sqrt(l(t)) U'
};

struct ClosedLoopResult {
    DecayTrace trace;
    std::vector<ControlRecord> controls;    // one per time step
    std::vector<FieldState> snapshots;      // states at the sample times
    bool below_regularity_threshold = false; // lambda <= 25 k^2
};

/// Boundary feedback U(t) = -l int_0^1 p(l, l s) w(s) ds (trapezoid on the
/// reference grid).
double feedback(const FieldState& state, const KernelParams& params);

/// Runs the feedback loop: the control is computed from the state at t_n
/// and imposed as the right boundary over [t_n, t_{n+1}].  Requires
/// lambda > k^2 for a power-law curve; flags lambda <= 25 k^2 in the result.
ClosedLoopResult run_closed_loop(std::vector<double> initial, const BoundaryCurve& curve,
                                 const SchemeConfig& cfg, const KernelParams& params,
                                 std::span<const double> sample_times);

/// Applies the forward transform to every snapshot and returns the worst
/// ratio of the transformed norm against (transformed initial norm) *
/// exp(-lambda (t - t0)).  Zero runs return 0.
double target_crosscheck(std::span<const FieldState> snapshots, const KernelParams& params);

/// Trapezoid-in-time discrete norms of U, U' and sqrt(l) U'.  Needs at
/// least 3 records.
RegularitySummary control_regularity_diagnostics(std::span<const ControlRecord> records,
                                                 const BoundaryCurve& curve);

} // namespace ncheat

#endif
