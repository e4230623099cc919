#include <cmath>
#include <vector>

#include "fracsica/sica.hpp"

namespace fracsica::sica {

namespace {

constexpr double kEqualityTol = 1e-12;

double checked(const IncidenceModel& inc, double S, double I,
               double (IncidenceModel::*member)(double, double) const) {
    const double v = (inc.*member)(S, I);
    if (!std::isfinite(v)) {
        throw EvaluationError(S, I, "check_hypotheses: incidence not evaluable at lattice point");
    }
    return v;
}

}  // namespace

HypothesisReport check_hypotheses(const IncidencePtr& incidence, const SampleRegion& region,
                                  double i_star) {
    if (!incidence) {
        throw std::invalid_argument("check_hypotheses: null incidence model");
    }
    if (!(region.s_max > 0.0) || !(region.i_max > 0.0) || region.density < 2) {
        throw std::domain_error("check_hypotheses: degenerate sample region");
    }
    if (!(i_star > 0.0)) {
        throw std::domain_error("check_hypotheses: i_star must be positive");
    }

    const IncidenceModel& inc = *incidence;
    const std::size_t n = region.density;
    std::vector<double> s_nodes(n), i_nodes(n);
    for (std::size_t k = 0; k < n; ++k) {
        // index 0 lands on the axis, so the S = 0 and I = 0 boundary lines
        // are part of the lattice
        s_nodes[k] = region.s_max * static_cast<double>(k) / static_cast<double>(n - 1);
        i_nodes[k] = region.i_max * static_cast<double>(k) / static_cast<double>(n - 1);
    }

    HypothesisReport report;

    for (double I : i_nodes) {
        const double v = checked(inc, 0.0, I, &IncidenceModel::value);
        if (report.h1.pass && std::abs(v) > kEqualityTol) {
            report.h1 = {false, Witness{0.0, I, v}};
        }
    }

    for (double S : s_nodes) {
        for (double I : i_nodes) {
            if (S > 0.0) {
                const double fs = checked(inc, S, I, &IncidenceModel::d_dS);
                if (report.h2.pass && !(fs > kEqualityTol)) {
                    report.h2 = {false, Witness{S, I, fs}};
                }
            }
            const double fi = checked(inc, S, I, &IncidenceModel::d_dI);
            if (report.h3.pass && fi > kEqualityTol) {
                report.h3 = {false, Witness{S, I, fi}};
            }
            if (S > 0.0 && I > 0.0 && report.h4.pass) {
                const double f = checked(inc, S, I, &IncidenceModel::value);
                const double f_star = checked(inc, S, i_star, &IncidenceModel::value);
                if (!(f > 0.0) || !(f_star > 0.0)) {
                    // H4 presumes f > 0 in the interior (H1 + H2); a
                    // non-positive value is itself a violation.
                    report.h4 = {false, Witness{S, I, f}};
                    continue;
                }
                const double product = (1.0 - f / f_star) * (f_star / f - I / i_star);
                if (product > kEqualityTol) {
                    report.h4 = {false, Witness{S, I, product}};
                }
            }
        }
    }
    return report;
}

}  // namespace fracsica::sica
