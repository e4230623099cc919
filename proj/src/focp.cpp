#include "fracsica/focp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracsica::focp {

namespace {

// Nearest-node index for a time that is expected to sit on the grid.
std::size_t node_index(const frackit::TimeGrid& grid, double t) {
    const auto idx = static_cast<long long>(std::llround((t - grid.t0) / grid.step()));
    return static_cast<std::size_t>(
        std::clamp<long long>(idx, 0, static_cast<long long>(grid.n_steps)));
}

double clamp01(double x, double hi) { return std::clamp(x, 0.0, hi); }

// max over nodes of |a - b| / max(|a|, floor)
double max_relative_change(const std::vector<double>& a, const std::vector<double>& b) {
    constexpr double kFloor = 1e-12;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(std::abs(a[i]), kFloor));
    }
    return worst;
}

double max_relative_change(const frackit::Trajectory& a, const frackit::Trajectory& b) {
    constexpr double kFloor = 1e-12;
    double worst = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        for (std::size_t i = 0; i < a.dim; ++i) {
            worst = std::max(worst, std::abs(a.values[k][i] - b.values[k][i]) /
                                        std::max(std::abs(a.values[k][i]), kFloor));
        }
    }
    return worst;
}

}  // namespace

std::array<double, 4> controlled_derivative(const sica::SicaParams& p,
                                            const sica::IncidenceModel& incidence,
                                            const sica::SicaState& x, double v1, double v2) {
    const double f = incidence.value(x.S, x.I);
    return {p.Lambda - p.mu * x.S - f * x.I,
            f * x.I - (p.rho + v1 + p.mu) * x.I + v2 * x.A + p.omega * x.C,
            v1 * x.I - (p.omega + p.mu) * x.C,
            p.rho * x.I - (v2 + p.mu + p.d) * x.A};
}

frackit::VectorField controlled_rhs(const sica::SicaParams& params,
                                    const sica::IncidencePtr& incidence, double v1, double v2) {
    params.validate();
    return [params, incidence, v1, v2](const std::vector<double>& y, std::vector<double>& dydt,
                                       double) {
        const auto d =
            controlled_derivative(params, *incidence, {y[0], y[1], y[2], y[3]}, v1, v2);
        dydt.assign(d.begin(), d.end());
    };
}

frackit::VectorField controlled_rhs(const sica::SicaParams& params,
                                    const sica::IncidencePtr& incidence,
                                    const ControlSchedule& schedule) {
    params.validate();
    return [params, incidence, schedule](const std::vector<double>& y,
                                         std::vector<double>& dydt, double t) {
        const std::size_t k = node_index(schedule.grid, t);
        const auto d = controlled_derivative(params, *incidence, {y[0], y[1], y[2], y[3]},
                                             schedule.v1[k], schedule.v2[k]);
        dydt.assign(d.begin(), d.end());
    };
}

std::array<double, 4> adjoint_rhs(const sica::SicaParams& p,
                                  const sica::IncidenceModel& incidence,
                                  const sica::SicaState& x, const std::array<double, 4>& lam,
                                  double v1, double v2) {
    const double f = incidence.value(x.S, x.I);
    const double fs = incidence.d_dS(x.S, x.I);
    const double fi = incidence.d_dI(x.S, x.I);
    const double gi = fi * x.I + f;  // d/dI of f(S,I)*I
    return {-p.mu * lam[0] + fs * x.I * (lam[1] - lam[0]),
            1.0 - gi * lam[0] + v1 * lam[2] + p.rho * lam[3] +
                (gi - p.rho - v1 - p.mu) * lam[1],
            p.omega * lam[1] - (p.omega + p.mu) * lam[2],
            1.0 + v2 * lam[1] - (v2 + p.mu + p.d) * lam[3]};
}

ControlSchedule project_controls(const frackit::Trajectory& states, const AdjointState& adjoints,
                                 const CostWeights& weights, const ControlBounds& bounds) {
    weights.validate();
    bounds.validate();
    if (!(states.grid == adjoints.grid)) {
        throw GridMismatchError("project_controls: states and adjoints on different grids");
    }
    const std::size_t count = states.grid.node_count();
    ControlSchedule out{states.grid, std::vector<double>(count), std::vector<double>(count)};
    for (std::size_t k = 0; k < count; ++k) {
        const double load = states.values[k][1] + states.values[k][3];  // i*(t) = I + A
        const double A = states.values[k][3];
        out.v1[k] = clamp01(
            (adjoints.lam2[k] - adjoints.lam3[k]) * load / (2.0 * weights.B1 * weights.delta),
            bounds.v1_max);
        out.v2[k] = clamp01(
            (adjoints.lam4[k] - adjoints.lam2[k]) * A / (2.0 * weights.B2 * weights.delta),
            bounds.v2_max);
    }
    return out;
}

double cost_functional(const frackit::Trajectory& states, const ControlSchedule& controls,
                       const CostWeights& weights) {
    weights.validate();
    if (!(states.grid == controls.grid)) {
        throw GridMismatchError("cost_functional: states and controls on different grids");
    }
    const std::size_t count = states.grid.node_count();
    const double h = states.grid.step();
    double sum = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double integrand = states.values[k][1] + states.values[k][3] +
                                 weights.B1 * weights.delta * controls.v1[k] * controls.v1[k] +
                                 weights.B2 * weights.delta * controls.v2[k] * controls.v2[k];
        const double w = (k == 0 || k + 1 == count) ? 0.5 : 1.0;
        sum += w * integrand;
    }
    return h * sum;
}

namespace {

// Backward pass: solve the reversed-time adjoint IVP and re-index the result
// back to physical time (reversed node j <-> physical node n - j).
AdjointState solve_adjoint(const sica::SicaParams& params, const sica::IncidencePtr& incidence,
                           const frackit::Trajectory& states, const ControlSchedule& controls,
                           frackit::FractionalOrder order) {
    const frackit::TimeGrid& grid = states.grid;
    const std::size_t n = grid.n_steps;
    const frackit::TimeGrid reversed_grid(0.0, grid.tf - grid.t0, n);

    frackit::VectorField reversed_field = [&](const std::vector<double>& lam,
                                              std::vector<double>& dldt, double tau) {
        const std::size_t j = node_index(reversed_grid, tau);
        const std::size_t phys = n - j;
        const sica::SicaState x{states.values[phys][0], states.values[phys][1],
                                states.values[phys][2], states.values[phys][3]};
        const auto d = adjoint_rhs(params, *incidence, x, {lam[0], lam[1], lam[2], lam[3]},
                                   controls.v1[phys], controls.v2[phys]);
        dldt.assign(d.begin(), d.end());
    };

    const frackit::Trajectory reversed =
        frackit::caputo_pece_solve(reversed_field, {0.0, 0.0, 0.0, 0.0}, order, reversed_grid);

    AdjointState adj{grid, std::vector<double>(n + 1), std::vector<double>(n + 1),
                     std::vector<double>(n + 1), std::vector<double>(n + 1)};
    for (std::size_t k = 0; k <= n; ++k) {
        const auto& lam = reversed.values[n - k];
        adj.lam1[k] = lam[0];
        adj.lam2[k] = lam[1];
        adj.lam3[k] = lam[2];
        adj.lam4[k] = lam[3];
    }
    return adj;
}

}  // namespace

FocpSolution forward_backward_sweep(const sica::SicaParams& params,
                                    const sica::IncidencePtr& incidence,
                                    const sica::SicaState& y0, frackit::FractionalOrder order,
                                    const frackit::TimeGrid& grid, const CostWeights& weights,
                                    const ControlBounds& bounds, const SweepConfig& config) {
    params.validate();
    weights.validate();
    bounds.validate();
    config.validate();

    const std::size_t count = grid.node_count();
    const std::vector<double> y0_vec = y0.to_vector();

    ControlSchedule controls{grid, std::vector<double>(count, 0.0),
                             std::vector<double>(count, 0.0)};
    frackit::Trajectory states{grid, 4, {}};
    AdjointState adjoints{grid, {}, {}, {}, {}};
    std::vector<IterationDiagnostics> history;
    bool have_previous_states = false;
    frackit::Trajectory previous_states{grid, 4, {}};
    bool converged = false;
    std::size_t iterations = 0;

    for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
        iterations = iter;
        try {
            states = frackit::caputo_pece_solve(controlled_rhs(params, incidence, controls),
                                                y0_vec, order, grid);
        } catch (const frackit::SolverDivergenceError& e) {
            throw SweepDivergenceError(iter, e.node, e.what());
        }
        adjoints = solve_adjoint(params, incidence, states, controls, order);

        const ControlSchedule candidate = project_controls(states, adjoints, weights, bounds);
        ControlSchedule updated{grid, std::vector<double>(count), std::vector<double>(count)};
        for (std::size_t k = 0; k < count; ++k) {
            updated.v1[k] = config.relaxation * controls.v1[k] +
                            (1.0 - config.relaxation) * candidate.v1[k];
            updated.v2[k] = config.relaxation * controls.v2[k] +
                            (1.0 - config.relaxation) * candidate.v2[k];
        }

        const double control_change =
            std::max(max_relative_change(updated.v1, controls.v1),
                     max_relative_change(updated.v2, controls.v2));
        const double state_change = have_previous_states
                                        ? max_relative_change(states, previous_states)
                                        : std::numeric_limits<double>::infinity();
        history.push_back({state_change, control_change});

        previous_states = states;
        have_previous_states = true;
        controls = std::move(updated);

        if (std::max(state_change, control_change) <= config.tolerance) {
            converged = true;
            break;
        }
    }

    // Final self-consistent solve with the converged controls, so the
    // returned states/adjoints are exactly the response to `controls`.
    try {
        states = frackit::caputo_pece_solve(controlled_rhs(params, incidence, controls), y0_vec,
                                            order, grid);
    } catch (const frackit::SolverDivergenceError& e) {
        throw SweepDivergenceError(iterations, e.node, e.what());
    }
    adjoints = solve_adjoint(params, incidence, states, controls, order);
    const double cost = cost_functional(states, controls, weights);

    return {std::move(states), std::move(adjoints), std::move(controls),
            cost,              iterations,          converged,
            std::move(history)};
}

}  // namespace fracsica::focp
