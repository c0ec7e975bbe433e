#include "ncheat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ncheat {

namespace {

struct Tridiag {
    std::vector<double> lower, diag, upper;
    explicit Tridiag(std::size_t n) : lower(n), diag(n), upper(n) {}
};

// Thomas algorithm; overwrites rhs with the solution.
void solve_tridiag(Tridiag& m, std::vector<double>& rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (m.diag[i - 1] == 0.0)
            throw std::runtime_error("solver: singular tridiagonal system");
        const double w = m.lower[i] / m.diag[i - 1];
        m.diag[i] -= w * m.upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (m.diag[n - 1] == 0.0)
        throw std::runtime_error("solver: singular tridiagonal system");
    rhs[n - 1] /= m.diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - m.upper[i] * rhs[i + 1]) / m.diag[i];
}

// Spatial operator L w = (l'/l) y w_y + l^{-2} w_yy at one time level.
struct OperatorRows {
    std::vector<double> lower, diag, upper;  // interior rows 1..N-1
};

void operator_rows(const BoundaryCurve& curve, double t, int n, AdvectionScheme advection,
                   OperatorRows& rows) {
    const double l = curve.value(t);
    const double lp = curve.slope(t);
    const double h = 1.0 / n;
    const double diffusion = 1.0 / (l * l * h * h);
    const double drift = lp / l;
    rows.lower.resize(n - 1);
    rows.diag.resize(n - 1);
    rows.upper.resize(n - 1);
    for (int i = 1; i < n; ++i) {
        const double adv = drift * (i * h) / h;  // coefficient of the y-derivative, per node
        if (advection == AdvectionScheme::Centered) {
            rows.lower[i - 1] = -0.5 * adv + diffusion;
            rows.diag[i - 1] = -2.0 * diffusion;
            rows.upper[i - 1] = 0.5 * adv + diffusion;
        } else {
            // one-sided difference against the characteristic direction;
            // keeps the implicit matrix an M-matrix for theta = 1
            if (adv >= 0.0) {
                rows.lower[i - 1] = diffusion;
                rows.diag[i - 1] = -adv - 2.0 * diffusion;
                rows.upper[i - 1] = adv + diffusion;
            } else {
                rows.lower[i - 1] = -adv + diffusion;
                rows.diag[i - 1] = adv - 2.0 * diffusion;
                rows.upper[i - 1] = diffusion;
            }
        }
    }
}

void check_state(const FieldState& state) {
    if (state.values.size() < 9)
        throw std::invalid_argument("solver: grid must have N >= 8 cells");
    if (!(state.t >= 0.0))
        throw std::invalid_argument("solver: state time must be >= 0");
    for (double v : state.values)
        if (!std::isfinite(v))
            throw std::invalid_argument("solver: non-finite value in state");
    if (state.values.front() != 0.0)
        throw std::invalid_argument("solver: left Dirichlet value must be exactly 0");
}

// Advances values in place from t to t+dt.  Scratch buffers are reused
// across steps by simulate().
struct Stepper {
    OperatorRows at_old, at_new;
    Tridiag matrix;
    std::vector<double> rhs;

    explicit Stepper(int n) : matrix(n + 1), rhs(n + 1) {}

    void advance(std::vector<double>& w, const BoundaryCurve& curve, const SchemeConfig& cfg,
                 double t, double right_bc) {
        const int n = cfg.n_grid;
        operator_rows(curve, t, n, cfg.advection, at_old);
        operator_rows(curve, t + cfg.dt, n, cfg.advection, at_new);
        const double th = cfg.theta;
        rhs[0] = 0.0;
        rhs[n] = right_bc;
        for (int i = 1; i < n; ++i) {
            rhs[i] = w[i] + (1.0 - th) * cfg.dt
                                * (at_old.lower[i - 1] * w[i - 1] + at_old.diag[i - 1] * w[i]
                                   + at_old.upper[i - 1] * w[i + 1]);
        }
        matrix.lower[0] = 0.0;
        matrix.diag[0] = 1.0;
        matrix.upper[0] = 0.0;
        matrix.lower[n] = 0.0;
        matrix.diag[n] = 1.0;
        matrix.upper[n] = 0.0;
        for (int i = 1; i < n; ++i) {
            matrix.lower[i] = -th * cfg.dt * at_new.lower[i - 1];
            matrix.diag[i] = 1.0 - th * cfg.dt * at_new.diag[i - 1];
            matrix.upper[i] = -th * cfg.dt * at_new.upper[i - 1];
        }
        solve_tridiag(matrix, rhs);
        w.swap(rhs);
    }
};

double trapezoid_energy(const std::vector<double>& w) {
    const std::size_t n = w.size() - 1;
    double acc = 0.5 * (w.front() * w.front() + w.back() * w.back());
    for (std::size_t i = 1; i < n; ++i)
        acc += w[i] * w[i];
    return acc / static_cast<double>(n);
}

} // namespace

void SchemeConfig::validate() const {
    if (n_grid < 8)
        throw std::invalid_argument("scheme: n_grid must be >= 8");
    if (!(dt > 0.0))
        throw std::invalid_argument("scheme: dt must be positive");
    if (!(theta >= 0.5) || !(theta <= 1.0))
        throw std::invalid_argument("scheme: theta outside [0.5,1]");
    if (!(t_final > 0.0))
        throw std::invalid_argument("scheme: t_final must be positive");
}

FieldState step(const FieldState& state, const SchemeConfig& cfg, double right_bc) {
    cfg.validate();
    check_state(state);
    if (static_cast<int>(state.values.size()) != cfg.n_grid + 1)
        throw std::invalid_argument("solver: state size does not match n_grid");
    if (!std::isfinite(right_bc))
        throw std::invalid_argument("solver: right boundary value must be finite");
    FieldState next = state;
    Stepper stepper(cfg.n_grid);
    stepper.advance(next.values, state.curve, cfg, state.t, right_bc);
    next.t = state.t + cfg.dt;
    return next;
}

DecayTrace simulate(std::vector<double> initial, const BoundaryCurve& curve,
                    const SchemeConfig& cfg,
                    const std::function<double(double)>& boundary_source,
                    std::span<const double> sample_times) {
    cfg.validate();
    const int n = cfg.n_grid;
    if (static_cast<int>(initial.size()) != n + 1)
        throw std::invalid_argument("simulate: initial datum size must be n_grid + 1");
    for (double v : initial)
        if (!std::isfinite(v))
            throw std::invalid_argument("simulate: non-finite initial datum");
    DecayTrace trace;
    if (std::abs(initial.front()) > 1e-12)
        throw std::invalid_argument("simulate: datum violates left compatibility w(0) = 0");
    initial.front() = 0.0;
    const double bc0 = boundary_source(0.0);
    if (std::abs(initial.back() - bc0) > 1e-10)
        trace.warnings.push_back("right-boundary compatibility mismatch at t=0 exceeds 1e-10");
    initial.back() = bc0;

    const long nsteps = std::lround(cfg.t_final / cfg.dt);
    std::set<long> marks;
    for (double ts : sample_times) {
        if (ts < 0.0 || ts > cfg.t_final + cfg.dt)
            throw std::invalid_argument("simulate: sample time outside [0, t_final]");
        marks.insert(std::clamp(std::lround(ts / cfg.dt), 0L, nsteps));
    }

    std::vector<double> w = std::move(initial);
    Stepper stepper(n);
    auto record = [&](double t) {
        const double l = curve.value(t);
        const double e = trapezoid_energy(w);
        TraceSample s;
        s.t = t;
        s.boundary_length = l;
        s.norm_phys = std::sqrt(l * e);
        s.energy_ref = e;
        s.control = w.back();
        if (s.norm_phys > 1e12) {
            std::ostringstream msg;
            msg << "simulate: norm " << s.norm_phys << " exceeds divergence guard at t=" << t;
            throw divergence_error(msg.str());
        }
        trace.samples.push_back(s);
    };
    if (marks.count(0))
        record(0.0);
    for (long m = 0; m < nsteps; ++m) {
        const double t = static_cast<double>(m) * cfg.dt;
        stepper.advance(w, curve, cfg, t, boundary_source(t + cfg.dt));
        if (marks.count(m + 1))
            record(t + cfg.dt);
    }
    return trace;
}

double physical_l2_norm(const FieldState& state) {
    return std::sqrt(state.curve.value(state.t) * trapezoid_energy(state.values));
}

double energy(const FieldState& state) {
    return trapezoid_energy(state.values);
}

} // namespace ncheat
