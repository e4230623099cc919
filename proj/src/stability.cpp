#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "fracsica/sica.hpp"

namespace fracsica::sica {

Matrix4 jacobian(const SicaParams& params, const IncidencePtr& incidence, const SicaState& at) {
    params.validate();
    const DerivedConstants c = derive(params);
    const double fv = incidence->value(at.S, at.I);
    const double fs = incidence->d_dS(at.S, at.I);
    const double fi = incidence->d_dI(at.S, at.I);
    // d/dS and d/dI of the infection term f(S,I)*I.
    const double gs = fs * at.I;
    const double gi = fi * at.I + fv;
    return {{{-params.mu - gs, -gi, 0.0, 0.0},
             {gs, gi - c.xi1, params.omega, params.sigma},
             {0.0, params.phi, -c.xi2, 0.0},
             {0.0, params.rho, 0.0, -c.xi3}}};
}

CharCoefficients dfe_characteristic_coefficients(const SicaParams& params,
                                                 const IncidencePtr& incidence) {
    params.validate();
    const DerivedConstants c = derive(params);
    const double f0 = incidence->value(params.Lambda / params.mu, 0.0);
    CharCoefficients out{};
    out.a1 = c.xi1 + c.xi2 + c.xi3 - f0;
    out.a2 = c.xi1 * c.xi2 + c.xi1 * c.xi3 + c.xi2 * c.xi3 - (c.xi2 + c.xi3) * f0 -
             params.phi * params.omega - params.rho * params.sigma;
    out.a3 = (1.0 - basic_reproduction_number(params, incidence)) * c.script_d;
    return out;
}

namespace {

using Complex = std::complex<double>;

// Horner evaluation of p and its first two derivatives; coeffs are low-to-high.
struct PolyEval {
    Complex p;
    Complex dp;
    Complex d2p;
};

PolyEval eval_poly(const std::vector<Complex>& coeffs, Complex x) {
    PolyEval e{coeffs.back(), 0.0, 0.0};
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
        e.d2p = e.d2p * x + e.dp;
        e.dp = e.dp * x + e.p;
        e.p = e.p * x + coeffs[i];
    }
    e.d2p *= 2.0;
    return e;
}

// Laguerre's method; breaks limit cycles with the classic fractional steps.
Complex laguerre_root(const std::vector<Complex>& coeffs, Complex x) {
    static constexpr double kFrac[] = {0.5, 0.25, 0.75, 0.13, 0.38, 0.62, 0.88, 1.0};
    const auto m = static_cast<double>(coeffs.size() - 1);
    for (int iter = 1; iter <= 80; ++iter) {
        const PolyEval e = eval_poly(coeffs, x);
        double err = std::abs(e.p);
        double abx = std::abs(x);
        double b = std::abs(coeffs.back());
        for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
            b = b * abx + std::abs(coeffs[i]);
        }
        if (err <= 1e-15 * b) {
            return x;
        }
        const Complex g = e.dp / e.p;
        const Complex g2 = g * g;
        const Complex h = g2 - e.d2p / e.p;
        const Complex sq = std::sqrt((m - 1.0) * (m * h - g2));
        Complex gp = g + sq;
        Complex gm = g - sq;
        if (std::abs(gp) < std::abs(gm)) {
            gp = gm;
        }
        Complex dx = (std::abs(gp) > 0.0)
                         ? Complex(m, 0.0) / gp
                         : std::polar(1.0 + abx, static_cast<double>(iter));
        if (iter % 10 == 0) {
            dx *= kFrac[(iter / 10 - 1) % 8];
        }
        const Complex x1 = x - dx;
        if (x1 == x) {
            return x;
        }
        x = x1;
    }
    return x;  // best effort; residual polish below tightens it
}

std::vector<Complex> polynomial_roots(const std::vector<double>& real_coeffs) {
    std::vector<Complex> coeffs(real_coeffs.begin(), real_coeffs.end());
    std::vector<Complex> deflated = coeffs;
    std::vector<Complex> roots;
    const std::size_t degree = real_coeffs.size() - 1;

    for (std::size_t j = 0; j < degree; ++j) {
        Complex root = laguerre_root(deflated, Complex(0.0, 0.0));
        // A real-coefficient polynomial has conjugate-paired roots; snap
        // near-real results so deflation stays real-dominated.
        if (std::abs(root.imag()) <= 2e-13 * (1.0 + std::abs(root.real()))) {
            root = Complex(root.real(), 0.0);
        }
        roots.push_back(root);
        // synthetic division by (x - root)
        std::vector<Complex> next(deflated.size() - 1);
        Complex carry = deflated.back();
        for (std::size_t i = deflated.size() - 1; i-- > 0;) {
            next[i] = carry;
            carry = deflated[i] + carry * root;
        }
        deflated = std::move(next);
    }
    // polish against the undeflated polynomial
    for (auto& r : roots) {
        r = laguerre_root(coeffs, r);
        if (std::abs(r.imag()) <= 2e-13 * (1.0 + std::abs(r.real()))) {
            r = Complex(r.real(), 0.0);
        }
    }
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) {
            return a.real() < b.real();
        }
        return a.imag() < b.imag();
    });
    return roots;
}

}  // namespace

std::array<std::complex<double>, 4> eigenvalues(const Matrix4& m) {
    // Faddeev-LeVerrier: exact characteristic coefficients for a 4x4.
    // p(x) = x^4 + c3 x^3 + c2 x^2 + c1 x + c0
    auto mat_mul = [](const Matrix4& a, const Matrix4& b) {
        Matrix4 r{};
        for (int i = 0; i < 4; ++i) {
            for (int k = 0; k < 4; ++k) {
                for (int j = 0; j < 4; ++j) {
                    r[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        return r;
    };
    auto trace = [](const Matrix4& a) { return a[0][0] + a[1][1] + a[2][2] + a[3][3]; };
    auto add_diag = [](Matrix4 a, double s) {
        for (int i = 0; i < 4; ++i) {
            a[i][i] += s;
        }
        return a;
    };

    Matrix4 m1 = m;
    const double c3 = -trace(m1);
    Matrix4 m2 = mat_mul(m, add_diag(m1, c3));
    const double c2 = -trace(m2) / 2.0;
    Matrix4 m3 = mat_mul(m, add_diag(m2, c2));
    const double c1 = -trace(m3) / 3.0;
    Matrix4 m4 = mat_mul(m, add_diag(m3, c1));
    const double c0 = -trace(m4) / 4.0;

    const auto roots = polynomial_roots({c0, c1, c2, c3, 1.0});
    return {roots[0], roots[1], roots[2], roots[3]};
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::stable:
            return "stable";
        case Stability::unstable:
            return "unstable";
        case Stability::marginal:
            return "marginal";
    }
    return "unknown";
}

MatignonResult matignon_classify(const std::vector<std::complex<double>>& eigs,
                                 frackit::FractionalOrder order) {
    constexpr double kBoundaryTol = 1e-9;
    const double threshold = order.value() * std::numbers::pi / 2.0;

    MatignonResult out{Stability::stable, std::numeric_limits<double>::infinity(), false};
    for (const auto& z : eigs) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw std::domain_error("matignon_classify: non-finite eigenvalue");
        }
        if (z == std::complex<double>(0.0, 0.0)) {
            out.zero_eigenvalue = true;  // arg undefined
            continue;
        }
        out.margin = std::min(out.margin, std::abs(std::arg(z)) - threshold);
    }
    if (eigs.empty()) {
        throw std::invalid_argument("matignon_classify: empty spectrum");
    }
    if (out.zero_eigenvalue && !std::isfinite(out.margin)) {
        out.margin = 0.0;
    }
    if (out.zero_eigenvalue || std::abs(out.margin) <= kBoundaryTol) {
        out.classification = Stability::marginal;
    } else if (out.margin > 0.0) {
        out.classification = Stability::stable;
    } else {
        out.classification = Stability::unstable;
    }
    return out;
}

StabilityReport classify_equilibrium(const SicaParams& params, const IncidencePtr& incidence,
                                     const SicaState& at, frackit::FractionalOrder order) {
    const auto eig = eigenvalues(jacobian(params, incidence, at));
    const std::vector<std::complex<double>> spectrum(eig.begin(), eig.end());
    const MatignonResult mr = matignon_classify(spectrum, order);
    return {at, spectrum, order.value(), mr.classification, mr.margin, mr.zero_eigenvalue};
}

}  // namespace fracsica::sica
