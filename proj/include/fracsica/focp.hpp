#ifndef FRACSICA_FOCP_HPP
#define FRACSICA_FOCP_HPP

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fracsica/frackit.hpp"
#include "fracsica/sica.hpp"

// Fractional optimal control of the SICA model: two bounded controls (v1
// replaces the I->C treatment rate, v2 the A->I treatment rate), quadratic
// control cost, adjoint system solved in reversed time, and the iterative
// forward-backward PECE sweep for the necessary optimality conditions.
namespace fracsica::focp {

struct ControlBounds {
    double v1_max = 1.0;
    double v2_max = 1.0;

    void validate() const {
        for (double b : {v1_max, v2_max}) {
            if (!(b > 0.0) || b > 1.0) {
                throw std::domain_error("ControlBounds: bounds must lie in (0, 1]");
            }
        }
    }
};

/// Weights of the running cost I + A + B1*delta*v1^2 + B2*delta*v2^2; delta is
/// the peak infectious level of the uncontrolled problem, which keeps the
/// control penalty on the same scale as the state cost.
struct CostWeights {
    double B1;
    double B2;
    double delta;

    void validate() const {
        for (double w : {B1, B2, delta}) {
            if (!(w > 0.0) || !std::isfinite(w)) {
                throw std::domain_error("CostWeights: weights must be positive and finite");
            }
        }
    }
};

/// Node-aligned control values on a grid.
struct ControlSchedule {
    frackit::TimeGrid grid;
    std::vector<double> v1;
    std::vector<double> v2;
};

/// Costate values at the grid nodes, in forward (physical) time; the
/// transversality condition makes all four vanish at tf.
struct AdjointState {
    frackit::TimeGrid grid;
    std::vector<double> lam1;
    std::vector<double> lam2;
    std::vector<double> lam3;
    std::vector<double> lam4;
};

struct SweepConfig {
    std::size_t max_iterations = 300;
    double tolerance = 1e-4;
    double relaxation = 0.5;  // convex-combination weight on the previous control

    void validate() const {
        if (max_iterations < 1 || !(tolerance > 0.0) || !(relaxation > 0.0) ||
            !(relaxation < 1.0)) {
            throw std::domain_error("SweepConfig: invalid sweep settings");
        }
    }
};

struct IterationDiagnostics {
    double state_change;    // max relative change of the state trajectory
    double control_change;  // max relative change of both controls
};

struct FocpSolution {
    frackit::Trajectory states;
    AdjointState adjoints;
    ControlSchedule controls;
    double cost;
    std::size_t iterations;
    bool converged;
    std::vector<IterationDiagnostics> history;
};

struct GridMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Forward solver diverged during sweep iteration `iteration` at grid node `node`.
struct SweepDivergenceError : std::runtime_error {
    SweepDivergenceError(std::size_t iteration_, std::size_t node_, const std::string& what)
        : std::runtime_error(what), iteration(iteration_), node(node_) {}
    std::size_t iteration;
    std::size_t node;
};

/// Controlled dynamics at one state: v1 takes the role of phi, v2 of sigma.
/// With v1 = phi and v2 = sigma this equals the uncontrolled derivative exactly.
std::array<double, 4> controlled_derivative(const sica::SicaParams& params,
                                            const sica::IncidenceModel& incidence,
                                            const sica::SicaState& state, double v1, double v2);

/// Controlled field with the two controls frozen at constant values.
frackit::VectorField controlled_rhs(const sica::SicaParams& params,
                                    const sica::IncidencePtr& incidence, double v1, double v2);

/// Controlled field reading node-aligned control values from a schedule (the
/// PECE solver only evaluates at grid nodes, so nodal lookup is exact).
frackit::VectorField controlled_rhs(const sica::SicaParams& params,
                                    const sica::IncidencePtr& incidence,
                                    const ControlSchedule& schedule);

/// Right-hand side of the four adjoint equations in reversed time
/// t' = tf - t (a left-Caputo IVP with zero initial costates). `state` and
/// the control values are the forward solution evaluated at physical time
/// tf - t'. Equal to the gradient of the Hamiltonian in (S, I, C, A).
std::array<double, 4> adjoint_rhs(const sica::SicaParams& params,
                                  const sica::IncidenceModel& incidence,
                                  const sica::SicaState& state,
                                  const std::array<double, 4>& costate, double v1, double v2);

/// Pointwise projection of the control update, clamped into the bounds:
///   v1 = clamp((lam2 - lam3) * (I + A) / (2*B1*delta), 0, v1_max)
///   v2 = clamp((lam4 - lam2) * A / (2*B2*delta), 0, v2_max)
/// The treatment effort v1 is scaled by the total infectious load I + A, the
/// same i*(t) the efficacy and cost-effectiveness measures integrate.
ControlSchedule project_controls(const frackit::Trajectory& states, const AdjointState& adjoints,
                                 const CostWeights& weights, const ControlBounds& bounds);

/// Composite-trapezoid value of the cost integral over the grid.
double cost_functional(const frackit::Trajectory& states, const ControlSchedule& controls,
                       const CostWeights& weights);

/// Iterative forward-backward sweep: forward PECE solve of the controlled
/// system, backward PECE solve of the time-reversed adjoint system, projected
/// control update relaxed against the previous iterate, until the largest
/// relative change across states and controls drops below the tolerance.
/// Non-convergence within max_iterations is reported in the returned flag,
/// not thrown.
FocpSolution forward_backward_sweep(const sica::SicaParams& params,
                                    const sica::IncidencePtr& incidence,
                                    const sica::SicaState& y0, frackit::FractionalOrder order,
                                    const frackit::TimeGrid& grid, const CostWeights& weights,
                                    const ControlBounds& bounds, const SweepConfig& config);

}  // namespace fracsica::focp

#endif
