#include "fracsica/sica.hpp"

#include <algorithm>
#include <cmath>

namespace fracsica::sica {

void SicaParams::validate() const {
    const std::array<std::pair<const char*, double>, 7> fields{{{"Lambda", Lambda},
                                                                {"mu", mu},
                                                                {"phi", phi},
                                                                {"rho", rho},
                                                                {"sigma", sigma},
                                                                {"omega", omega},
                                                                {"d", d}}};
    for (const auto& [name, value] : fields) {
        if (!std::isfinite(value) || value < 0.0) {
            throw std::domain_error(std::string("SicaParams: ") + name +
                                    " must be finite and non-negative");
        }
    }
    if (mu <= 0.0) {
        throw std::domain_error("SicaParams: mu must be strictly positive");
    }
}

DerivedConstants derive(const SicaParams& p) {
    DerivedConstants c{};
    c.xi1 = p.rho + p.phi + p.mu;
    c.xi2 = p.omega + p.mu;
    c.xi3 = p.sigma + p.mu + p.d;
    c.script_d = p.mu * (c.xi2 * (c.xi3 + p.rho) + p.phi * c.xi3 + p.rho * p.d) +
                 p.rho * p.omega * p.d;
    return c;
}

SicaState SicaState::from_vector(const std::vector<double>& v) {
    if (v.size() != 4) {
        throw std::invalid_argument("SicaState: expected 4 components");
    }
    return {v[0], v[1], v[2], v[3]};
}

namespace {

class BilinearIncidence final : public IncidenceModel {
public:
    explicit BilinearIncidence(double beta) : beta_(beta) {}
    double value(double S, double) const override { return beta_ * S; }
    double d_dS(double, double) const override { return beta_; }
    double d_dI(double, double) const override { return 0.0; }
    std::string name() const override { return "bilinear"; }

private:
    double beta_;
};

class SaturatedIncidence final : public IncidenceModel {
public:
    SaturatedIncidence(double beta, double a) : beta_(beta), a_(a) {}
    double value(double S, double I) const override { return beta_ * S / (1.0 + a_ * I); }
    double d_dS(double, double I) const override { return beta_ / (1.0 + a_ * I); }
    double d_dI(double S, double I) const override {
        const double den = 1.0 + a_ * I;
        return -beta_ * S * a_ / (den * den);
    }
    std::string name() const override { return "saturated"; }

private:
    double beta_;
    double a_;
};

class HattafYousfiIncidence final : public IncidenceModel {
public:
    HattafYousfiIncidence(double beta, double a0, double a1, double a2)
        : beta_(beta), a0_(a0), a1_(a1), a2_(a2) {}
    double value(double S, double I) const override { return beta_ * S / den(S, I); }
    double d_dS(double S, double I) const override {
        const double q = den(S, I);
        return beta_ * (a0_ + a2_ * I) / (q * q);
    }
    double d_dI(double S, double I) const override {
        const double q = den(S, I);
        return -beta_ * S * a2_ / (q * q);
    }
    std::string name() const override { return "hattaf_yousfi"; }

private:
    double den(double S, double I) const { return a0_ + a1_ * S + a2_ * I; }
    double beta_;
    double a0_;
    double a1_;
    double a2_;
};

}  // namespace

IncidencePtr bilinear(double beta) { return std::make_shared<BilinearIncidence>(beta); }

IncidencePtr saturated(double beta, double a) {
    return std::make_shared<SaturatedIncidence>(beta, a);
}

IncidencePtr hattaf_yousfi(double beta, double a0, double a1, double a2) {
    return std::make_shared<HattafYousfiIncidence>(beta, a0, a1, a2);
}

std::array<double, 4> sica_derivative(const SicaParams& p, const IncidenceModel& incidence,
                                      const SicaState& x) {
    const DerivedConstants c = derive(p);
    const double f = incidence.value(x.S, x.I);
    return {p.Lambda - p.mu * x.S - f * x.I,
            f * x.I - c.xi1 * x.I + p.sigma * x.A + p.omega * x.C,
            p.phi * x.I - c.xi2 * x.C,
            p.rho * x.I - c.xi3 * x.A};
}

frackit::VectorField sica_rhs(const SicaParams& params, const IncidencePtr& incidence) {
    params.validate();
    if (!incidence) {
        throw std::invalid_argument("sica_rhs: null incidence model");
    }
    return [params, incidence](const std::vector<double>& y, std::vector<double>& dydt, double) {
        const auto d = sica_derivative(params, *incidence, SicaState{y[0], y[1], y[2], y[3]});
        dydt.assign(d.begin(), d.end());
    };
}

double basic_reproduction_number(const SicaParams& params, const IncidencePtr& incidence) {
    params.validate();
    const DerivedConstants c = derive(params);
    const double s0 = params.Lambda / params.mu;
    return incidence->value(s0, 0.0) * c.xi2 * c.xi3 / c.script_d;
}

SicaState disease_free_equilibrium(const SicaParams& params) {
    if (!(params.mu > 0.0)) {
        throw std::domain_error("disease_free_equilibrium: mu must be positive");
    }
    return {params.Lambda / params.mu, 0.0, 0.0, 0.0};
}

std::optional<SicaState> endemic_equilibrium(const SicaParams& params,
                                             const IncidencePtr& incidence) {
    params.validate();
    if (basic_reproduction_number(params, incidence) <= 1.0) {
        return std::nullopt;
    }

    const DerivedConstants c = derive(params);
    const double s_upper = params.Lambda / params.mu;
    // At any equilibrium with I > 0: f(S, I) = script_d / (xi2*xi3) and
    // I = (Lambda - mu*S) * xi2*xi3 / script_d, which reduces (4-component
    // root-finding) to a scalar equation in S, increasing under H2/H3.
    const double f_target = c.script_d / (c.xi2 * c.xi3);
    const auto i_of_s = [&](double s) {
        return (params.Lambda - params.mu * s) / f_target;
    };
    const auto residual = [&](double s) {
        return incidence->value(s, i_of_s(s)) - f_target;
    };

    double lo = 0.0;
    double hi = s_upper;
    double r_lo = residual(lo);
    double r_hi = residual(hi);
    if (!(r_lo < 0.0 && r_hi > 0.0)) {
        throw InternalInconsistencyError(
            "endemic_equilibrium: root not bracketed despite R0 > 1; incidence model likely "
            "violates H2/H3");
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    const double s_star = 0.5 * (lo + hi);
    const double i_star = i_of_s(s_star);
    SicaState eq{s_star, i_star, params.phi * i_star / c.xi2, params.rho * i_star / c.xi3};

    const auto res = sica_derivative(params, *incidence, eq);
    for (double r : res) {
        if (!(std::abs(r) < 1e-9)) {
            throw InternalInconsistencyError(
                "endemic_equilibrium: residual above 1e-9 after bisection");
        }
    }
    return eq;
}

frackit::Trajectory simulate(const SicaParams& params, const IncidencePtr& incidence,
                             const SicaState& y0, frackit::FractionalOrder order,
                             const frackit::TimeGrid& grid) {
    if (y0.S < 0.0 || y0.I < 0.0 || y0.C < 0.0 || y0.A < 0.0) {
        throw std::domain_error("simulate: initial state must be non-negative");
    }
    frackit::Trajectory traj =
        frackit::caputo_pece_solve(sica_rhs(params, incidence), y0.to_vector(), order, grid);

    constexpr double kTol = 1e-9;
    const double n_bound = y0.total() + params.Lambda / params.mu + kTol;
    for (std::size_t k = 0; k < traj.values.size(); ++k) {
        const auto& v = traj.values[k];
        double total = 0.0;
        for (double x : v) {
            if (x < -kTol) {
                throw InvariantViolationError(
                    k, "simulate: negative compartment beyond tolerance at node " +
                           std::to_string(k));
            }
            total += x;
        }
        if (total > n_bound) {
            throw InvariantViolationError(
                k, "simulate: total population exceeds N(0) + Lambda/mu at node " +
                       std::to_string(k));
        }
    }
    return traj;
}

SicaParams morocco_params() {
    SicaParams p{};
    p.mu = 1.0 / 74.02;
    p.Lambda = 2.19 * p.mu;
    p.phi = 1.0;
    p.rho = 0.1;
    p.sigma = 0.33;
    p.omega = 0.09;
    p.d = 1.0;
    return p;
}

SicaState morocco_initial_state() {
    const double n0 = kMoroccoPopulation;
    return {(n0 - 11.0) / n0, 2.0 / n0, 0.0, 9.0 / n0};
}

}  // namespace fracsica::sica
