#include "ncheat/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace ncheat {

double feedback(const FieldState& state, const KernelParams& params) {
    params.validate();
    const std::size_t n = state.values.size() - 1;
    const double h = 1.0 / static_cast<double>(n);
    const double l = state.curve.value(state.t);
    double acc = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        const double kv = p_kernel(params, l, l * static_cast<double>(j) * h);
        const double wgt = (j == 0 || j == n) ? 0.5 : 1.0;
        acc += wgt * kv * state.values[j];
    }
    return -l * h * acc;
}

ClosedLoopResult run_closed_loop(std::vector<double> initial, const BoundaryCurve& curve,
                                 const SchemeConfig& cfg, const KernelParams& params,
                                 std::span<const double> sample_times) {
    cfg.validate();
    params.validate();
    ClosedLoopResult result;
    if (curve.kind == CurveKind::PowerLaw) {
        if (!(params.lambda > curve.k * curve.k))
            throw std::invalid_argument("closed loop requires lambda > k^2");
        result.below_regularity_threshold = params.lambda <= 25.0 * curve.k * curve.k;
    }
    const int n = cfg.n_grid;
    if (static_cast<int>(initial.size()) != n + 1)
        throw std::invalid_argument("closed loop: initial datum size must be n_grid + 1");
    if (std::abs(initial.front()) > 1e-12)
        throw std::invalid_argument("closed loop: datum violates left compatibility w(0) = 0");
    initial.front() = 0.0;

    FieldState state{0.0, std::move(initial), curve};
    const double u0 = feedback(state, params);
    if (std::abs(state.values.back() - u0) > 1e-10)
        result.trace.warnings.push_back("right-boundary compatibility mismatch at t=0 exceeds 1e-10");
    state.values.back() = u0;
    result.trace.controlled = true;

    const long nsteps = std::lround(cfg.t_final / cfg.dt);
    std::set<long> marks;
    for (double ts : sample_times) {
        if (ts < 0.0 || ts > cfg.t_final + cfg.dt)
            throw std::invalid_argument("closed loop: sample time outside [0, t_final]");
        marks.insert(std::clamp(std::lround(ts / cfg.dt), 0L, nsteps));
    }
    auto record = [&]() {
        TraceSample s;
        s.t = state.t;
        s.boundary_length = curve.value(state.t);
        s.energy_ref = energy(state);
        s.norm_phys = std::sqrt(s.boundary_length * s.energy_ref);
        s.control = state.values.back();
        if (s.norm_phys > 1e12)
            throw divergence_error("closed loop: norm exceeds divergence guard");
        result.trace.samples.push_back(s);
        result.snapshots.push_back(state);
    };
    if (marks.count(0))
        record();
    for (long m = 0; m < nsteps; ++m) {
        // control lagged one step: evaluated at t_m, held over [t_m, t_{m+1}]
        const double u = feedback(state, params);
        result.controls.push_back({state.t, u, 0.0});
        state = step(state, cfg, u);
        if (marks.count(m + 1))
            record();
    }
    // centered derivative estimates; first record has none
    auto& ctl = result.controls;
    if (!ctl.empty())
        ctl.front().u_derivative = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 1; i < ctl.size(); ++i) {
        const std::size_t j = std::min(i + 1, ctl.size() - 1);
        ctl[i].u_derivative = (ctl[j].u_value - ctl[i - 1].u_value) / (ctl[j].t - ctl[i - 1].t);
    }
    return result;
}

double target_crosscheck(std::span<const FieldState> snapshots, const KernelParams& params) {
    if (snapshots.empty())
        throw std::invalid_argument("target_crosscheck: no snapshots");
    const FieldState first = snapshots.front();
    const double n0 = physical_l2_norm(forward_transform(first, params));
    double worst = 0.0;
    bool any_nonzero = n0 > 0.0;
    for (const FieldState& s : snapshots.subspan(1)) {
        const double nt = physical_l2_norm(forward_transform(s, params));
        if (nt == 0.0)
            continue;
        any_nonzero = true;
        if (n0 == 0.0)
            return std::numeric_limits<double>::infinity();
        const double bound = n0 * std::exp(-params.lambda * (s.t - first.t));
        worst = std::max(worst, nt / bound);
    }
    return any_nonzero ? worst : 0.0;
}

RegularitySummary control_regularity_diagnostics(std::span<const ControlRecord> records,
                                                 const BoundaryCurve& curve) {
    if (records.size() < 3)
        throw std::invalid_argument("control diagnostics need at least 3 records");
    RegularitySummary out;
    double su = 0.0, sdu = 0.0, swdu = 0.0;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const double dt = records[i].t - records[i - 1].t;
        su += 0.5 * dt * (records[i].u_value * records[i].u_value
                          + records[i - 1].u_value * records[i - 1].u_value);
        // derivative of the first record is undefined; start its integrals
        // one interval later
        if (i >= 2) {
            const double a = records[i - 1].u_derivative, b = records[i].u_derivative;
            const double la = curve.value(records[i - 1].t), lb = curve.value(records[i].t);
            sdu += 0.5 * dt * (a * a + b * b);
            swdu += 0.5 * dt * (la * a * a + lb * b * b);
        }
    }
    out.l2_u = std::sqrt(su);
    out.l2_du = std::sqrt(sdu);
    out.l2_weighted_du = std::sqrt(swdu);
    return out;
}

} // namespace ncheat
