// Acceptance suite: end-to-end checks of the published quantitative results
// and the invariant battery. Prints one PASS/FAIL line per criterion and
// returns nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "fracsica/focp.hpp"
#include "fracsica/frackit.hpp"
#include "fracsica/metrics.hpp"
#include "fracsica/sica.hpp"
#include "support/oracles.hpp"

using namespace fracsica;

namespace {

int failures = 0;
int current_criterion = 0;
bool current_ok = true;
std::string current_name;
std::vector<std::string> current_details;

void begin(int id, const std::string& name) {
    current_criterion = id;
    current_name = name;
    current_ok = true;
    current_details.clear();
}

void expect(bool ok, const std::string& detail) {
    if (!ok) {
        current_ok = false;
        current_details.push_back(detail);
    }
}

void finish() {
    std::printf("%s %d: %s\n", current_ok ? "PASS" : "FAIL", current_criterion,
                current_name.c_str());
    for (const auto& d : current_details) {
        std::printf("       %s\n", d.c_str());
    }
    if (!current_ok) {
        ++failures;
    }
}

std::string fmt(const char* pattern, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b);
    return buf;
}

constexpr double kDelta = 1.24e-7;
const std::vector<double> kTableAlphas{1.0, 0.85, 0.70, 0.30};
const std::vector<double> kTableAv{1.55815e-06, 1.46382e-06, 1.36489e-06, 1.09485e-06};
const std::vector<double> kTableTc{2.21065e-07, 2.37665e-07, 2.54213e-07, 2.94279e-07};
const std::vector<double> kTableEff{0.652268, 0.612779, 0.571365, 0.458322};

focp::FocpSolution sweep(double alpha, double b_weight) {
    return focp::forward_backward_sweep(
        sica::morocco_params(), sica::bilinear(sica::kMoroccoBeta),
        sica::morocco_initial_state(), frackit::FractionalOrder(alpha),
        frackit::TimeGrid(0.0, 5.0, 2000), focp::CostWeights{b_weight, b_weight, kDelta},
        focp::ControlBounds{1.0, 1.0}, focp::SweepConfig{});
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main() {
    const sica::SicaParams params = sica::morocco_params();
    const sica::IncidencePtr incidence = sica::bilinear(sica::kMoroccoBeta);
    const sica::SicaState y0 = sica::morocco_initial_state();
    const frackit::TimeGrid reference_grid(0.0, 5.0, 2000);

    // 1. basic reproduction number
    begin(1, "R0 reproduction: R0 = 7.534 +/- 0.001");
    {
        const double r0 = sica::basic_reproduction_number(params, incidence);
        expect(std::abs(r0 - 7.534) <= 0.001, fmt("R0 = %.6f (expected %.3f)", r0, 7.534));
    }
    finish();

    // 2. uncontrolled peak
    begin(2, "Uncontrolled peak: max I = 1.24e-7 +/- 5% (alpha = 1)");
    {
        const auto traj = sica::simulate(params, incidence, y0, frackit::FractionalOrder(1.0),
                                         reference_grid);
        double peak = 0.0;
        for (const auto& node : traj.values) {
            peak = std::max(peak, node[1]);
        }
        expect(std::abs(peak - 1.24e-7) <= 0.05 * 1.24e-7,
               fmt("max I = %.6e (expected %.3e +/- 5%%)", peak, 1.24e-7));
    }
    finish();

    // 3. cost-effectiveness table reproduction
    begin(3, "Cost-effectiveness table: AV, TC within 10%, ACER = TC/AV, effectiveness "
             "within 0.03, monotone in alpha, < 100 iterations each, < 60 s");
    std::map<double, focp::FocpSolution> table_runs;
    {
        const auto start = std::chrono::steady_clock::now();
        std::vector<metrics::CostEffectivenessSummary> rows;
        for (std::size_t i = 0; i < kTableAlphas.size(); ++i) {
            const double alpha = kTableAlphas[i];
            auto solution = sweep(alpha, 2.5);
            expect(solution.converged, fmt("alpha = %.2f did not converge (%.0f iterations)",
                                           alpha, static_cast<double>(solution.iterations)));
            expect(solution.iterations < 100,
                   fmt("alpha = %.2f used %.0f iterations (expected < 100)", alpha,
                       static_cast<double>(solution.iterations)));
            const auto summary = metrics::summarize(solution, alpha, 1.0, 1.0);
            expect(std::abs(summary.averted - kTableAv[i]) <= 0.10 * kTableAv[i],
                   fmt("AV(%.2f) = %.6e", alpha, summary.averted) +
                       fmt(" vs %.6e +/- 10%%", kTableAv[i], 0.0));
            expect(std::abs(summary.total_cost - kTableTc[i]) <= 0.10 * kTableTc[i],
                   fmt("TC(%.2f) = %.6e", alpha, summary.total_cost) +
                       fmt(" vs %.6e +/- 10%%", kTableTc[i], 0.0));
            expect(std::abs(summary.acer - summary.total_cost / summary.averted) <=
                       1e-12 * std::abs(summary.acer),
                   "ACER is not exactly TC/AV");
            expect(std::abs(summary.effectiveness - kTableEff[i]) <= 0.03,
                   fmt("effectiveness(%.2f) = %.6f", alpha, summary.effectiveness) +
                       fmt(" vs %.6f +/- 0.03", kTableEff[i], 0.0));
            rows.push_back(summary);
            table_runs.emplace(alpha, std::move(solution));
        }
        for (std::size_t i = 1; i < rows.size(); ++i) {
            expect(rows[i].averted < rows[i - 1].averted, "AV not strictly decreasing in alpha");
            expect(rows[i].effectiveness < rows[i - 1].effectiveness,
                   "effectiveness not strictly decreasing in alpha");
            expect(rows[i].total_cost > rows[i - 1].total_cost,
                   "TC not strictly increasing as alpha decreases");
            expect(rows[i].acer > rows[i - 1].acer,
                   "ACER not strictly increasing as alpha decreases");
        }
        const double elapsed = seconds_since(start);
        expect(elapsed < 60.0, fmt("runtime %.1f s (budget %.0f s)", elapsed, 60.0));
    }
    finish();

    // 4. expensive-treatment crossover
    begin(4, "Expensive treatment (B1 = B2 = 40): fractional model wins");
    {
        const auto start = std::chrono::steady_clock::now();
        const auto frac = sweep(0.30, 40.0);
        const auto classical = sweep(1.0, 40.0);
        const double f_frac = metrics::effectiveness(frac);
        const double f_classical = metrics::effectiveness(classical);
        expect(std::abs(f_frac - 0.309505) <= 0.03,
               fmt("effectiveness(0.30) = %.6f vs %.6f +/- 0.03", f_frac, 0.309505));
        expect(std::abs(f_classical - 0.269456) <= 0.03,
               fmt("effectiveness(1.00) = %.6f vs %.6f +/- 0.03", f_classical, 0.269456));
        expect(f_frac > f_classical, "fractional effectiveness does not exceed classical");
        const double elapsed = seconds_since(start);
        expect(elapsed < 30.0, fmt("runtime %.1f s (budget %.0f s)", elapsed, 30.0));
    }
    finish();

    // 5. null second control
    begin(5, "Second control identically zero (within 1e-9) in every table scenario");
    {
        for (const auto& [alpha, solution] : table_runs) {
            double worst = 0.0;
            for (double v : solution.controls.v2) {
                worst = std::max(worst, std::abs(v));
            }
            expect(worst <= 1e-9, fmt("max |v2| = %.3e for alpha = %.2f", worst, alpha));
        }
    }
    finish();

    // 6. control shape
    begin(6, "Control shape (alpha = 1, B = 2.5): v1 starts at 1, vanishes at tf");
    {
        const auto& controls = table_runs.at(1.0).controls;
        expect(std::abs(controls.v1.front() - 1.0) <= 1e-3,
               fmt("v1(0) = %.6f (expected 1 within 1e-3)", controls.v1.front(), 0.0));
        expect(controls.v1.back() <= 1e-3,
               fmt("v1(tf) = %.3e (expected <= 1e-3)", controls.v1.back(), 0.0));
    }
    finish();

    // 7. property suite
    begin(7, "Property suite: positivity, equilibria, threshold, Matignon, solver oracles, "
             "derivative checks");
    {
        // positivity and boundedness across orders and starts
        const std::vector<sica::SicaState> starts{y0, {1.0, 0.2, 0.1, 0.05}, {2.0, 0.3, 0.0, 0.4}};
        for (double alpha : {0.3, 0.85, 1.0}) {
            for (const auto& start : starts) {
                try {
                    const auto traj = sica::simulate(params, incidence, start,
                                                     frackit::FractionalOrder(alpha), reference_grid);
                    const double bound = start.total() + params.Lambda / params.mu + 1e-9;
                    for (const auto& node : traj.values) {
                        double total = 0.0;
                        for (double x : node) {
                            expect(x >= -1e-9, fmt("negative component %.3e (alpha %.2f)", x, alpha));
                            total += x;
                        }
                        expect(total <= bound, fmt("N = %.6f above bound %.6f", total, bound));
                    }
                } catch (const std::exception& e) {
                    expect(false, std::string("simulate failed: ") + e.what());
                }
            }
        }

        // equilibrium residuals
        for (const auto& inc :
             {incidence, sica::saturated(sica::kMoroccoBeta, 1.0)}) {
            const auto dfe = sica::disease_free_equilibrium(params);
            const auto r_dfe = sica::sica_derivative(params, *inc, dfe);
            for (double r : r_dfe) {
                expect(std::abs(r) < 1e-9, "disease-free residual above 1e-9");
            }
            const auto endemic = sica::endemic_equilibrium(params, inc);
            expect(endemic.has_value(), "endemic equilibrium missing despite R0 > 1");
            if (endemic) {
                const auto r_end = sica::sica_derivative(params, *inc, *endemic);
                for (double r : r_end) {
                    expect(std::abs(r) < 1e-9, "endemic residual above 1e-9");
                }
            }
        }

        // threshold scan
        const double r0_table = sica::basic_reproduction_number(params, incidence);
        for (double target : {0.25, 0.6, 0.95, 1.05, 2.0, 6.0}) {
            const auto inc = sica::bilinear(sica::kMoroccoBeta * target / r0_table);
            const bool endemic = sica::endemic_equilibrium(params, inc).has_value();
            expect(endemic == (target > 1.0),
                   fmt("endemic existence mismatch at R0 = %.2f", target, 0.0));
        }

        // Matignon dichotomy at E_f
        for (double alpha : {0.3, 0.7, 0.85, 1.0}) {
            const auto dfe = sica::disease_free_equilibrium(params);
            const auto above = sica::classify_equilibrium(params, incidence, dfe,
                                                          frackit::FractionalOrder(alpha));
            expect(above.classification == sica::Stability::unstable,
                   fmt("E_f not unstable at alpha = %.2f with R0 > 1", alpha, 0.0));
            const auto inc_low = sica::bilinear(sica::kMoroccoBeta * 0.5 / r0_table);
            const auto below = sica::classify_equilibrium(params, inc_low, dfe,
                                                          frackit::FractionalOrder(alpha));
            expect(below.classification == sica::Stability::stable,
                   fmt("E_f not stable at alpha = %.2f with R0 < 1", alpha, 0.0));
        }

        // PECE against the Mittag-Leffler oracle with refinement
        const frackit::VectorField decay = [](const std::vector<double>& u,
                                              std::vector<double>& du, double) {
            du = {-u[0]};
        };
        for (double alpha : {0.7, 0.85}) {
            double coarse = 0.0;
            double fine = 0.0;
            for (std::size_t n : {500u, 2000u}) {
                const auto traj = frackit::caputo_pece_solve(
                    decay, {1.0}, frackit::FractionalOrder(alpha),
                    frackit::TimeGrid(0.0, 1.0, n));
                const double exact = oracles::mittag_leffler_series(alpha, -1.0);
                const double err = std::abs(traj.back()[0] - exact);
                (n == 500 ? coarse : fine) = err;
            }
            expect(fine < 1e-3, fmt("PECE error %.2e at alpha = %.2f above 1e-3", fine, alpha));
            expect(fine < coarse, "PECE error does not shrink under refinement");
        }

        // classical forward-backward oracle at alpha = 1 (1% on J)
        const auto classical = oracles::classical_forward_backward_sweep(
            params, incidence, y0, reference_grid, focp::CostWeights{2.5, 2.5, kDelta},
            focp::ControlBounds{1.0, 1.0});
        expect(classical.converged, "classical oracle sweep did not converge");
        const double j_frac = table_runs.at(1.0).cost;
        expect(std::abs(j_frac - classical.cost) <= 0.01 * std::abs(classical.cost),
               fmt("J = %.8e vs classical %.8e (1%% band)", j_frac, classical.cost));

        // Jacobian vs finite differences
        {
            std::vector<sica::SicaState> points{{0.5, 0.2, 0.4, 0.1},
                                                {1.2, 0.05, 0.7, 0.3},
                                                {2.0, 0.9, 0.01, 0.6}};
            for (const auto& x : points) {
                const auto j = sica::jacobian(params, incidence, x);
                for (int col = 0; col < 4; ++col) {
                    const double step = 1e-6;
                    auto xp = x.to_vector();
                    auto xm = x.to_vector();
                    xp[col] += step;
                    xm[col] -= step;
                    const auto fp =
                        sica::sica_derivative(params, *incidence, sica::SicaState::from_vector(xp));
                    const auto fm =
                        sica::sica_derivative(params, *incidence, sica::SicaState::from_vector(xm));
                    for (int row = 0; row < 4; ++row) {
                        const double fd = (fp[row] - fm[row]) / (2.0 * step);
                        expect(std::abs(j[row][col] - fd) <=
                                   1e-6 * std::max(1.0, std::abs(j[row][col])),
                               "Jacobian entry disagrees with finite differences");
                    }
                }
            }
        }

        // adjoint rhs vs Hamiltonian finite differences
        {
            const focp::CostWeights w{2.5, 2.5, kDelta};
            const std::vector<std::array<double, 4>> lams{{0.5, -1.0, 2.0, 0.25},
                                                          {-2.0, 3.0, -0.5, 1.0}};
            const std::vector<sica::SicaState> points{{0.8, 0.3, 0.2, 0.1}, {1.5, 0.6, 0.9, 0.4}};
            for (const auto& lam : lams) {
                for (const auto& x : points) {
                    const auto analytic = focp::adjoint_rhs(params, *incidence, x, lam, 0.4, 0.6);
                    const auto fd = oracles::hamiltonian_gradient_fd(
                        params, *incidence, {x.S, x.I, x.C, x.A}, lam, 0.4, 0.6, w);
                    for (int i = 0; i < 4; ++i) {
                        expect(std::abs(analytic[i] - fd[i]) <=
                                   1e-6 * std::max(1.0, std::abs(analytic[i])),
                               "adjoint rhs disagrees with the Hamiltonian gradient");
                    }
                }
            }
        }
    }
    finish();

    if (failures == 0) {
        std::printf("acceptance: all criteria passed\n");
    } else {
        std::printf("acceptance: %d criteria FAILED\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
