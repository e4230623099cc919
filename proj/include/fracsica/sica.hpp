#ifndef FRACSICA_SICA_HPP
#define FRACSICA_SICA_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracsica/frackit.hpp"

// The SICA HIV/AIDS compartment model with a general incidence function:
// parameters, right-hand side, equilibria, basic reproduction number, and
// fractional (Matignon) stability classification.
namespace fracsica::sica {

/// Epidemiological rate constants, all in 1/year. Compartments are measured
/// as fractions of the initial total population.
struct SicaParams {
    double Lambda;  // recruitment rate
    double mu;      // natural death rate
    double phi;    // HIV treatment rate for I
    double rho;    // default treatment rate for I
    double sigma;  // AIDS treatment rate
    double omega;  // default treatment rate for C
    double d;      // AIDS-induced death rate

    void validate() const;

    friend bool operator==(const SicaParams&, const SicaParams&) = default;
};

/// Grouped transfer rates and the R0 denominator, pure functions of the params:
///   xi1 = rho + phi + mu,  xi2 = omega + mu,  xi3 = sigma + mu + d,
///   script_d = mu*[xi2*(xi3 + rho) + phi*xi3 + rho*d] + rho*omega*d.
struct DerivedConstants {
    double xi1;
    double xi2;
    double xi3;
    double script_d;
};

DerivedConstants derive(const SicaParams& params);

/// Compartment values (S, I, C, A), population fractions.
struct SicaState {
    double S;
    double I;
    double C;
    double A;

    double total() const noexcept { return S + I + C + A; }
    std::vector<double> to_vector() const { return {S, I, C, A}; }
    static SicaState from_vector(const std::vector<double>& v);

    friend bool operator==(const SicaState&, const SicaState&) = default;
};

/// Incidence function f(S, I) with analytically supplied partial derivatives.
/// The model multiplies f by I, so f itself is the per-contact rate.
class IncidenceModel {
public:
    virtual ~IncidenceModel() = default;
    virtual double value(double S, double I) const = 0;
    virtual double d_dS(double S, double I) const = 0;
    virtual double d_dI(double S, double I) const = 0;
    virtual std::string name() const = 0;
};

using IncidencePtr = std::shared_ptr<const IncidenceModel>;

IncidencePtr bilinear(double beta);                    // f = beta*S
IncidencePtr saturated(double beta, double a);         // f = beta*S / (1 + a*I)
IncidencePtr hattaf_yousfi(double beta, double a0, double a1,
                           double a2);                 // f = beta*S / (a0 + a1*S + a2*I)

/// Four-component field of the uncontrolled model, in order (S, I, C, A).
frackit::VectorField sica_rhs(const SicaParams& params, const IncidencePtr& incidence);

std::array<double, 4> sica_derivative(const SicaParams& params, const IncidenceModel& incidence,
                                      const SicaState& state);

// --- hypothesis checks -----------------------------------------------------

/// Rectangle [0, s_max] x [0, i_max] scanned on a density x density lattice
/// (axes included, so the boundary lines S = 0 and I = 0 are covered).
struct SampleRegion {
    double s_max;
    double i_max;
    std::size_t density = 200;
};

struct Witness {
    double S;
    double I;
    double value;  // offending quantity at the point
};

struct HypothesisCheck {
    bool pass = true;
    std::optional<Witness> witness;
};

/// Pass/fail for the four incidence hypotheses:
///   H1: f(0, I) = 0;  H2: df/dS > 0 for S > 0;  H3: df/dI <= 0;
///   H4: (1 - f(S,I)/f(S,I*)) * (f(S,I*)/f(S,I) - I/I*) <= 0 on the interior.
/// The scan is a falsifier, not a proof: it samples the lattice only.
struct HypothesisReport {
    HypothesisCheck h1;
    HypothesisCheck h2;
    HypothesisCheck h3;
    HypothesisCheck h4;
    bool all_pass() const { return h1.pass && h2.pass && h3.pass && h4.pass; }
};

struct EvaluationError : std::runtime_error {
    EvaluationError(double S_, double I_, const std::string& what)
        : std::runtime_error(what), S(S_), I(I_) {}
    double S;
    double I;
};

HypothesisReport check_hypotheses(const IncidencePtr& incidence, const SampleRegion& region,
                                  double i_star);

// --- equilibria and threshold ----------------------------------------------

/// R0 = f(Lambda/mu, 0) * xi2 * xi3 / script_d.
double basic_reproduction_number(const SicaParams& params, const IncidencePtr& incidence);

/// E_f = (Lambda/mu, 0, 0, 0).
SicaState disease_free_equilibrium(const SicaParams& params);

/// Signals an incidence model that breaks the H2/H3 monotonicity the
/// equilibrium reduction relies on.
struct InternalInconsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unique interior equilibrium when R0 > 1, found by bisection in S on
/// (0, Lambda/mu) after eliminating I*, C*, A*; nullopt when R0 <= 1.
std::optional<SicaState> endemic_equilibrium(const SicaParams& params,
                                             const IncidencePtr& incidence);

// --- linearization and stability ---------------------------------------------

using Matrix4 = std::array<std::array<double, 4>, 4>;

/// Full linearization of the model at `at` (the I-column carries both the
/// df/dI*I + f incidence terms and the -xi1 diagonal loss).
Matrix4 jacobian(const SicaParams& params, const IncidencePtr& incidence, const SicaState& at);

/// Coefficients of the cubic factor lambda^3 + a1*lambda^2 + a2*lambda + a3 of
/// the characteristic polynomial at E_f (the fourth eigenvalue is -mu).
struct CharCoefficients {
    double a1;
    double a2;
    double a3;
};

CharCoefficients dfe_characteristic_coefficients(const SicaParams& params,
                                                 const IncidencePtr& incidence);

/// All four eigenvalues, via Laguerre root-finding on the characteristic
/// polynomial with deflation and a polishing pass; sorted by (re, im).
std::array<std::complex<double>, 4> eigenvalues(const Matrix4& m);

enum class Stability { stable, unstable, marginal };

std::string to_string(Stability s);

/// Matignon test outcome: margin = min over eigenvalues of |arg z| - alpha*pi/2.
struct MatignonResult {
    Stability classification;
    double margin;
    bool zero_eigenvalue = false;
};

/// |arg z| > alpha*pi/2 for every eigenvalue => stable; any |arg z| below the
/// threshold => unstable; within 1e-9 of it (or an exactly zero eigenvalue,
/// whose argument is undefined) => marginal.
MatignonResult matignon_classify(const std::vector<std::complex<double>>& eigs,
                                 frackit::FractionalOrder order);

struct StabilityReport {
    SicaState equilibrium;
    std::vector<std::complex<double>> eigenvalues;
    double alpha;
    Stability classification;
    double margin;
    bool zero_eigenvalue;
};

StabilityReport classify_equilibrium(const SicaParams& params, const IncidencePtr& incidence,
                                     const SicaState& at, frackit::FractionalOrder order);

// --- simulation ----------------------------------------------------------------

/// Positivity (components >= -1e-9) or boundedness (N <= N(0) + Lambda/mu + 1e-9)
/// broke at `node`; usually means the step size is too large.
struct InvariantViolationError : std::runtime_error {
    InvariantViolationError(std::size_t node_index, const std::string& what)
        : std::runtime_error(what), node(node_index) {}
    std::size_t node;
};

/// PECE solve of the uncontrolled model with the state invariants checked at
/// every node.
frackit::Trajectory simulate(const SicaParams& params, const IncidencePtr& incidence,
                             const SicaState& y0, frackit::FractionalOrder order,
                             const frackit::TimeGrid& grid);

// --- Morocco scenario preset ------------------------------------------------

/// Initial total population behind the normalized Morocco initial state.
inline constexpr double kMoroccoPopulation = 23023935.0;

/// Fitted rates for the Moroccan HIV epidemic (mu = 1/74.02, Lambda = 2.19*mu,
/// phi = 1, rho = 0.1, sigma = 0.33, omega = 0.09, d = 1).
SicaParams morocco_params();

/// Effective transmission rate fitted with the bilinear incidence.
inline constexpr double kMoroccoBeta = 0.755;

/// (S, I, C, A)(0) = ((N0-11)/N0, 2/N0, 0, 9/N0) with N0 = kMoroccoPopulation.
SicaState morocco_initial_state();

}  // namespace fracsica::sica

#endif
