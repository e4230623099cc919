#include <cmath>
#include <vector>

#include "fracsica/metrics.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace fracsica;
using namespace fracsica::metrics;

namespace {

// Minimal hand-built solution: constant controls, states with I and A given
// per node.
focp::FocpSolution synthetic_solution(const frackit::TimeGrid& grid,
                                      const std::vector<double>& infected,
                                      const std::vector<double>& aids, double v1 = 0.0,
                                      double v2 = 0.0) {
    const std::size_t count = grid.node_count();
    focp::FocpSolution s{frackit::Trajectory{grid, 4, {}},
                         focp::AdjointState{grid, std::vector<double>(count, 0.0),
                                            std::vector<double>(count, 0.0),
                                            std::vector<double>(count, 0.0),
                                            std::vector<double>(count, 0.0)},
                         focp::ControlSchedule{grid, std::vector<double>(count, v1),
                                               std::vector<double>(count, v2)},
                         0.0,
                         1,
                         true,
                         {}};
    s.states.values.assign(count, {1.0, 0.0, 0.0, 0.0});
    for (std::size_t k = 0; k < count; ++k) {
        s.states.values[k][1] = infected[k];
        s.states.values[k][3] = aids[k];
    }
    return s;
}

focp::FocpSolution quick_morocco_solution(double alpha) {
    focp::SweepConfig cfg;
    return focp::forward_backward_sweep(
        sica::morocco_params(), sica::bilinear(sica::kMoroccoBeta),
        sica::morocco_initial_state(), frackit::FractionalOrder(alpha),
        frackit::TimeGrid(0.0, 5.0, 500), focp::CostWeights{2.5, 2.5, 1.24e-7},
        focp::ControlBounds{1.0, 1.0}, cfg);
}

double simpson(const frackit::TimeGrid& grid, const std::vector<double>& g) {
    // composite Simpson for even n (grid sizes in these tests are even)
    const std::size_t n = grid.n_steps;
    double sum = g.front() + g.back();
    for (std::size_t k = 1; k < n; ++k) {
        sum += g[k] * ((k % 2 == 1) ? 4.0 : 2.0);
    }
    return grid.step() * sum / 3.0;
}

}  // namespace

TEST_CASE("efficacy curve basics") {
    const frackit::TimeGrid grid(0.0, 5.0, 4);
    const double i0 = 2e-7;

    SUBCASE("starts at zero and tracks the halved load") {
        std::vector<double> infected{i0 / 2, i0 / 4, i0 / 4, i0 / 4, i0 / 4};
        std::vector<double> aids{i0 / 2, i0 / 4, i0 / 4, i0 / 4, i0 / 4};
        const auto curve = efficacy_curve(synthetic_solution(grid, infected, aids));
        CHECK(curve[0] == 0.0);
        for (std::size_t k = 1; k < curve.size(); ++k) {
            CHECK(curve[k] == doctest::Approx(0.5).epsilon(1e-14));
        }
    }

    SUBCASE("zero initial load is rejected") {
        std::vector<double> zero(5, 0.0);
        CHECK_THROWS_AS(efficacy_curve(synthetic_solution(grid, zero, zero)),
                        UndefinedEfficacyError);
    }
}

TEST_CASE("averted cases on synthetic loads") {
    const frackit::TimeGrid grid(0.0, 5.0, 10);

    SUBCASE("constant load averts nothing") {
        std::vector<double> infected(11, 3e-7);
        std::vector<double> aids(11, 1e-7);
        CHECK(std::abs(averted_cases(synthetic_solution(grid, infected, aids))) < 1e-18);
    }

    SUBCASE("halved load averts half the person-time") {
        const double i0 = 4e-7;
        std::vector<double> infected(11, i0 / 4);
        std::vector<double> aids(11, i0 / 4);
        infected[0] = i0 / 2;
        aids[0] = i0 / 2;
        // integral by hand: trapezoid of i* with the first node at i0
        const double h = grid.step();
        double integral = 0.5 * (i0 + i0 / 2);
        integral += 9.0 * (i0 / 2);
        integral *= h;
        const double expected = i0 * 5.0 - integral;
        CHECK(averted_cases(synthetic_solution(grid, infected, aids)) ==
              doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("total cost") {
    const frackit::TimeGrid grid(0.0, 5.0, 10);
    std::vector<double> infected(11, 2e-7);
    std::vector<double> aids(11, 1e-7);

    SUBCASE("zero controls cost nothing") {
        CHECK(total_cost(synthetic_solution(grid, infected, aids), 1.0, 1.0) == 0.0);
    }

    SUBCASE("constant controls integrate exactly") {
        const auto s = synthetic_solution(grid, infected, aids, 0.5, 0.25);
        const double expected = 5.0 * (1.0 * 0.5 * 2e-7 + 2.0 * 0.25 * 1e-7);
        CHECK(total_cost(s, 1.0, 2.0) == doctest::Approx(expected).epsilon(1e-14));
    }

    SUBCASE("negative unit costs are rejected") {
        CHECK_THROWS_AS(total_cost(synthetic_solution(grid, infected, aids), -1.0, 0.0),
                        std::domain_error);
    }
}

TEST_CASE("acer quotient") {
    CHECK(std::abs(acer(2.21065e-07, 1.55815e-06) - 0.141877) < 1e-5);
    CHECK(acer(0.0, 1e-6) == 0.0);
    CHECK(acer(3.5e-7, 3.5e-7) == 1.0);
    CHECK_THROWS_AS(acer(1.0, 0.0), UndefinedRatioError);
}

TEST_CASE("effectiveness identities") {
    const frackit::TimeGrid grid(0.0, 5.0, 10);

    SUBCASE("constant load has zero effectiveness") {
        std::vector<double> infected(11, 3e-7);
        std::vector<double> aids(11, 2e-7);
        CHECK(std::abs(effectiveness(synthetic_solution(grid, infected, aids))) < 1e-12);
    }

    SUBCASE("summary is internally consistent") {
        const auto solution = quick_morocco_solution(1.0);
        const auto summary = summarize(solution, 1.0, 1.0, 1.0);
        CHECK(summary.acer * summary.averted ==
              doctest::Approx(summary.total_cost).epsilon(1e-12));
        const double i0 = solution.states.values[0][1] + solution.states.values[0][3];
        CHECK(summary.effectiveness * i0 * 5.0 ==
              doctest::Approx(summary.averted).epsilon(1e-12));
        CHECK(summary.alpha == 1.0);
        // efficacy endpoint
        CHECK(efficacy_curve(solution)[0] == 0.0);
    }
}

TEST_CASE("quadrature robustness on the Morocco scenario") {
    const auto solution = quick_morocco_solution(1.0);
    const frackit::TimeGrid& grid = solution.states.grid;

    std::vector<double> infectious(grid.node_count());
    std::vector<double> cost_integrand(grid.node_count());
    for (std::size_t k = 0; k < infectious.size(); ++k) {
        infectious[k] = solution.states.values[k][1] + solution.states.values[k][3];
        cost_integrand[k] = solution.controls.v1[k] * solution.states.values[k][1] +
                            solution.controls.v2[k] * solution.states.values[k][3];
    }
    const double i0 = infectious[0];

    const double av_trapezoid = averted_cases(solution);
    const double av_simpson = i0 * 5.0 - simpson(grid, infectious);
    CHECK(std::abs(av_trapezoid - av_simpson) < 1e-3 * std::abs(av_trapezoid));

    const double tc_trapezoid = total_cost(solution, 1.0, 1.0);
    const double tc_simpson = simpson(grid, cost_integrand);
    CHECK(std::abs(tc_trapezoid - tc_simpson) < 1e-3 * std::abs(tc_trapezoid));
}
