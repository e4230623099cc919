#include "fracsica/frackit.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

namespace fracsica::frackit {

namespace {

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

TimeGrid::TimeGrid(double t0_, double tf_, std::size_t n_steps_)
    : t0(t0_), tf(tf_), n_steps(n_steps_) {
    if (!std::isfinite(t0) || !std::isfinite(tf)) {
        throw std::domain_error("TimeGrid: endpoints must be finite");
    }
    if (!(tf > t0)) {
        throw std::domain_error("TimeGrid: tf must exceed t0");
    }
    if (n_steps < 1) {
        throw std::domain_error("TimeGrid: at least one step required");
    }
}

Trajectory caputo_pece_solve(const VectorField& field, const std::vector<double>& y0,
                             FractionalOrder order, const TimeGrid& grid) {
    const double alpha = order.value();
    const std::size_t n = grid.n_steps;
    const std::size_t dim = y0.size();

    if (dim == 0) {
        throw std::invalid_argument("caputo_pece_solve: empty initial state");
    }
    if (!all_finite(y0)) {
        throw std::invalid_argument("caputo_pece_solve: initial state must be finite");
    }

    const double h = grid.step();
    const double h_alpha = std::pow(h, alpha);
    const double predictor_scale = h_alpha / std::tgamma(alpha + 1.0);
    const double corrector_scale = h_alpha / std::tgamma(alpha + 2.0);

    // Both weight families depend only on the lag m = k - j:
    //   predictor (fractional rectangle): beta_m = (m+1)^a - m^a
    //   corrector (fractional trapezoid, interior j >= 1):
    //     c_m = (m+2)^{a+1} + m^{a+1} - 2*(m+1)^{a+1}
    // The j = 0 corrector weight depends on k and is computed per step.
    std::vector<double> beta(n), c(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double dm = static_cast<double>(m);
        beta[m] = std::pow(dm + 1.0, alpha) - std::pow(dm, alpha);
        c[m] = std::pow(dm + 2.0, alpha + 1.0) + std::pow(dm, alpha + 1.0) -
               2.0 * std::pow(dm + 1.0, alpha + 1.0);
    }

    Trajectory traj{grid, dim, {}};
    traj.values.assign(n + 1, std::vector<double>(dim, 0.0));
    traj.values[0] = y0;

    std::vector<std::vector<double>> f_hist(n + 1, std::vector<double>(dim, 0.0));
    std::vector<double> f_pred(dim), predicted(dim), corrected(dim);
    std::vector<double> acc_p(dim), acc_c(dim);

    field(y0, f_hist[0], grid.node_time(0));
    if (!all_finite(f_hist[0])) {
        throw SolverDivergenceError(0, "caputo_pece_solve: field non-finite at node 0");
    }

    for (std::size_t k = 0; k < n; ++k) {
        const double t_next = grid.node_time(k + 1);
        const double dk = static_cast<double>(k);
        const double a0 = std::pow(dk, alpha + 1.0) - (dk - alpha) * std::pow(dk + 1.0, alpha);

        std::fill(acc_p.begin(), acc_p.end(), 0.0);
        std::fill(acc_c.begin(), acc_c.end(), 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            acc_p[i] = beta[k] * f_hist[0][i];
            acc_c[i] = a0 * f_hist[0][i];
        }
        for (std::size_t j = 1; j <= k; ++j) {
            const double wp = beta[k - j];
            const double wc = c[k - j];
            const std::vector<double>& fj = f_hist[j];
            for (std::size_t i = 0; i < dim; ++i) {
                acc_p[i] += wp * fj[i];
                acc_c[i] += wc * fj[i];
            }
        }

        for (std::size_t i = 0; i < dim; ++i) {
            predicted[i] = y0[i] + predictor_scale * acc_p[i];
        }
        field(predicted, f_pred, t_next);

        for (std::size_t i = 0; i < dim; ++i) {
            corrected[i] = y0[i] + corrector_scale * (acc_c[i] + f_pred[i]);
        }
        if (!all_finite(corrected)) {
            throw SolverDivergenceError(k + 1, "caputo_pece_solve: non-finite state at node " +
                                                   std::to_string(k + 1));
        }
        traj.values[k + 1] = corrected;

        field(corrected, f_hist[k + 1], t_next);
        if (!all_finite(f_hist[k + 1])) {
            throw SolverDivergenceError(k + 1, "caputo_pece_solve: non-finite field at node " +
                                                   std::to_string(k + 1));
        }
    }

    return traj;
}

double mittag_leffler(FractionalOrder order, double z) {
    if (!std::isfinite(z)) {
        throw std::domain_error("mittag_leffler: argument must be finite");
    }
    constexpr double kZCutoff = 5.0;
    constexpr double kAbsAccuracy = 1e-10;
    constexpr int kMaxTerms = 4000;

    if (std::abs(z) > kZCutoff) {
        throw MittagLefflerRangeError(z, "mittag_leffler: |z| exceeds validated cutoff 5");
    }

    const long double alpha = static_cast<long double>(order.value());
    const long double zl = static_cast<long double>(z);

    // Neumaier-compensated summation in long double; abs_sum tracks the total
    // mass of the terms so the final rounding bound eps*abs_sum is available.
    long double sum = 1.0L;  // k = 0 term, 1/Gamma(1)
    long double comp = 0.0L;
    long double abs_sum = 1.0L;
    long double power = 1.0L;
    int small_streak = 0;
    bool converged = false;

    for (int k = 1; k <= kMaxTerms; ++k) {
        power *= zl;
        const long double term = power / std::tgamma(alpha * static_cast<long double>(k) + 1.0L);
        const long double t = sum + term;
        if (std::fabs(sum) >= std::fabs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        abs_sum += std::fabs(term);

        if (std::fabs(term) < 1e-16L * std::fabs(sum + comp) + LDBL_MIN) {
            if (++small_streak >= 2) {
                converged = true;
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    if (!converged) {
        throw MittagLefflerRangeError(z, "mittag_leffler: series did not converge");
    }

    const long double cancellation_bound = LDBL_EPSILON * abs_sum;
    if (cancellation_bound > static_cast<long double>(kAbsAccuracy)) {
        throw MittagLefflerRangeError(
            z, "mittag_leffler: cancellation exceeds 1e-10 accuracy for this (alpha, z)");
    }

    return static_cast<double>(sum + comp);
}

namespace {

double sup_error_at_end(const Trajectory& traj, const std::vector<double>& ref) {
    const std::vector<double>& end = traj.back();
    double err = 0.0;
    for (std::size_t i = 0; i < end.size(); ++i) {
        err = std::max(err, std::abs(end[i] - ref[i]));
    }
    return err;
}

double order_from_errors(const std::vector<double>& errors, const std::vector<double>& ref_end) {
    double scale = 1.0;
    for (double r : ref_end) {
        scale = std::max(scale, std::abs(r));
    }
    const double noise_floor = 1e-12 * scale;
    for (double e : errors) {
        if (e <= noise_floor) {
            throw IndeterminateOrderError(
                "estimate_convergence_order: error below accumulation noise floor");
        }
    }
    const double p1 = std::log2(errors[0] / errors[1]);
    const double p2 = std::log2(errors[1] / errors[2]);
    return 0.5 * (p1 + p2);
}

}  // namespace

double estimate_convergence_order(const VectorField& field, const std::vector<double>& y0,
                                  FractionalOrder order, const TimeGrid& base_grid,
                                  const ReferenceSolution& reference) {
    const std::vector<double> ref_end = reference(base_grid.tf);
    if (ref_end.size() != y0.size()) {
        throw std::invalid_argument("estimate_convergence_order: reference dimension mismatch");
    }
    std::vector<double> errors;
    for (std::size_t factor : {1u, 2u, 4u}) {
        TimeGrid g(base_grid.t0, base_grid.tf, base_grid.n_steps * factor);
        errors.push_back(sup_error_at_end(caputo_pece_solve(field, y0, order, g), ref_end));
    }
    return order_from_errors(errors, ref_end);
}

double estimate_convergence_order(const VectorField& field, const std::vector<double>& y0,
                                  FractionalOrder order, const TimeGrid& base_grid,
                                  const Trajectory& reference) {
    if (std::abs(reference.grid.tf - base_grid.tf) >
        1e-12 * std::max(1.0, std::abs(base_grid.tf))) {
        throw std::invalid_argument("estimate_convergence_order: reference horizon mismatch");
    }
    const std::vector<double> ref_end = reference.back();
    return estimate_convergence_order(field, y0, order, base_grid,
                                      [&ref_end](double) { return ref_end; });
}

}  // namespace fracsica::frackit
