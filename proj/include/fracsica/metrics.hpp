#ifndef FRACSICA_METRICS_HPP
#define FRACSICA_METRICS_HPP

#include <stdexcept>
#include <vector>

#include "fracsica/focp.hpp"

// Cost-effectiveness measures of a solved control scenario. All integrals use
// the same composite trapezoid rule as the cost functional. i*(t) = I(t) + A(t)
// denotes the infectious load along the optimal solution, i(0) its initial value.
namespace fracsica::metrics {

struct UndefinedEfficacyError : std::domain_error {
    using std::domain_error::domain_error;
};

struct UndefinedRatioError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Node-wise efficacy F(t) = 1 - i*(t)/i(0); F(0) = 0 by construction.
std::vector<double> efficacy_curve(const focp::FocpSolution& solution);

/// Cases averted over the horizon: AV = i(0)*(tf - t0) - integral of i*(t).
double averted_cases(const focp::FocpSolution& solution);

/// Intervention cost TC = integral of c1*v1(t)*I(t) + c2*v2(t)*A(t).
double total_cost(const focp::FocpSolution& solution, double c1, double c2);

/// Average cost-effectiveness ratio TC/AV.
double acer(double total_cost, double averted);

/// Effectiveness F-bar = AV / (i(0)*(tf - t0)), the proportion of the
/// no-intervention caseload averted.
double effectiveness(const focp::FocpSolution& solution);

struct CostEffectivenessSummary {
    double alpha;
    double averted;
    double total_cost;
    double acer;
    double effectiveness;
};

CostEffectivenessSummary summarize(const focp::FocpSolution& solution, double alpha, double c1,
                                   double c2);

}  // namespace fracsica::metrics

#endif
