#ifndef NCHEAT_SOLVER_HPP
#define NCHEAT_SOLVER_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncheat/boundary.hpp"

namespace ncheat {

/// Thrown when a running norm exceeds the divergence guard.
class divergence_error : public std::runtime_error {
public:
    explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

enum class AdvectionScheme { Centered, Upwind };

/// Discretization of w_t = (l'/l) y w_y + l^{-2} w_yy on the reference
/// interval y in [0,1].  theta = 1 is backward Euler, 0.5 trapezoidal;
/// only the unconditionally stable range [0.5, 1] is accepted.
struct SchemeConfig {
    int n_grid = 400;
    double dt = 1e-3;
    double theta = 0.5;
    AdvectionScheme advection = AdvectionScheme::Centered;
    double t_final = 1.0;

    void validate() const;
};

/// Solution w on the uniform reference grid y_i = i/N at one time instant.
/// values[0] = 0 (left Dirichlet); values[N] is the current right boundary
/// datum.
struct FieldState {
    double t = 0.0;
    std::vector<double> values;
    BoundaryCurve curve;
};

struct TraceSample {
    double t = 0.0;
    double boundary_length = 0.0;
    double norm_phys = 0.0;   // L2 norm over the physical domain (0, l(t))
    double energy_ref = 0.0;  // int_0^1 w^2 dy
    double control = 0.0;     // right boundary value
};

struct DecayTrace {
    std::vector<TraceSample> samples;
    bool controlled = false;
    std::vector<std::string> warnings;
};

/// One theta-step to t + dt with the prescribed right boundary value at the
/// new time level.  Coefficients are frozen per stage at t and t + dt.
FieldState step(const FieldState& state, const SchemeConfig& cfg, double right_bc);

/// Integrates from the given datum, recording samples at the grid times
/// nearest the requested ones.  Uncontrolled runs pass a zero source.
/// Aborts with divergence_error if the physical norm exceeds 1e12.
DecayTrace simulate(std::vector<double> initial, const BoundaryCurve& curve,
                    const SchemeConfig& cfg,
                    const std::function<double(double)>& boundary_source,
                    std::span<const double> sample_times);

/// sqrt( l(t) * int_0^1 w^2 dy ), the L2 norm over (0, l(t)).
double physical_l2_norm(const FieldState& state);

/// int_0^1 w^2 dy by composite trapezoid.
double energy(const FieldState& state);

} // namespace ncheat

#endif
