#include "fracsica/metrics.hpp"

#include <cmath>

namespace fracsica::metrics {

namespace {

double initial_infectious(const focp::FocpSolution& solution) {
    const auto& y0 = solution.states.values.front();
    return y0[1] + y0[3];
}

double infectious_at(const focp::FocpSolution& solution, std::size_t k) {
    return solution.states.values[k][1] + solution.states.values[k][3];
}

double trapezoid(const frackit::TimeGrid& grid, const std::vector<double>& g) {
    double sum = 0.5 * (g.front() + g.back());
    for (std::size_t k = 1; k + 1 < g.size(); ++k) {
        sum += g[k];
    }
    return grid.step() * sum;
}

}  // namespace

std::vector<double> efficacy_curve(const focp::FocpSolution& solution) {
    const double i0 = initial_infectious(solution);
    if (!(i0 > 0.0)) {
        throw UndefinedEfficacyError("efficacy_curve: i(0) = I(0) + A(0) must be positive");
    }
    const std::size_t count = solution.states.grid.node_count();
    std::vector<double> curve(count);
    for (std::size_t k = 0; k < count; ++k) {
        curve[k] = 1.0 - infectious_at(solution, k) / i0;
    }
    return curve;
}

double averted_cases(const focp::FocpSolution& solution) {
    const frackit::TimeGrid& grid = solution.states.grid;
    std::vector<double> infectious(grid.node_count());
    for (std::size_t k = 0; k < infectious.size(); ++k) {
        infectious[k] = infectious_at(solution, k);
    }
    const double horizon = grid.tf - grid.t0;
    return initial_infectious(solution) * horizon - trapezoid(grid, infectious);
}

double total_cost(const focp::FocpSolution& solution, double c1, double c2) {
    if (c1 < 0.0 || c2 < 0.0) {
        throw std::domain_error("total_cost: unit costs must be non-negative");
    }
    const frackit::TimeGrid& grid = solution.states.grid;
    if (!(grid == solution.controls.grid)) {
        throw focp::GridMismatchError("total_cost: states and controls on different grids");
    }
    std::vector<double> integrand(grid.node_count());
    for (std::size_t k = 0; k < integrand.size(); ++k) {
        integrand[k] = c1 * solution.controls.v1[k] * solution.states.values[k][1] +
                       c2 * solution.controls.v2[k] * solution.states.values[k][3];
    }
    return trapezoid(grid, integrand);
}

double acer(double total_cost, double averted) {
    if (averted == 0.0) {
        throw UndefinedRatioError("acer: averted cases is zero");
    }
    return total_cost / averted;
}

double effectiveness(const focp::FocpSolution& solution) {
    const double i0 = initial_infectious(solution);
    if (!(i0 > 0.0)) {
        throw UndefinedEfficacyError("effectiveness: i(0) = I(0) + A(0) must be positive");
    }
    const frackit::TimeGrid& grid = solution.states.grid;
    return averted_cases(solution) / (i0 * (grid.tf - grid.t0));
}

CostEffectivenessSummary summarize(const focp::FocpSolution& solution, double alpha, double c1,
                                   double c2) {
    CostEffectivenessSummary s{};
    s.alpha = alpha;
    s.averted = averted_cases(solution);
    s.total_cost = total_cost(solution, c1, c2);
    s.acer = acer(s.total_cost, s.averted);
    s.effectiveness = effectiveness(solution);
    return s;
}

}  // namespace fracsica::metrics
