// model.hpp: System parameters, Hamiltonian assembly and closed-form effective quantities

#pragma once

#include "emsim/operators.hpp"

#include <functional>
#include <string>
#include <vector>

namespace emsim {

struct NonlinearityModel {
    enum class Kind { DiagonalKerr, Quartic };

    Kind kind = Kind::DiagonalKerr;
    double strength_mhz = 0.0;  // beta for DiagonalKerr, U for Quartic

    static NonlinearityModel kerr(double beta_mhz) { return {Kind::DiagonalKerr, beta_mhz}; }
    static NonlinearityModel quartic(double u_mhz) { return {Kind::Quartic, u_mhz}; }

    // beta b†b†bb or U (b + b†)^4 on a single mode of the given dimension, rad/us.
    Matrix hamiltonian(int dim) const;
    void validate() const;
};

std::string to_string(const NonlinearityModel& m);

// Frequencies in MHz (omega / 2pi). Rates are gamma / 2pi in Hz.
struct SystemParams {
    double omega1_mhz = 85.0;
    double omega2_mhz = 75.0;
    double Omega_mhz = 10000.0;
    NonlinearityModel nl1 = NonlinearityModel::kerr(3.0);
    NonlinearityModel nl2 = NonlinearityModel::kerr(3.0);
    double g1_mhz = 6.0;
    double g2_mhz = 6.0;
    double gamma1_hz = 50.0;
    double gamma2_hz = 50.0;
    double gamma1d_hz = 0.0;
    double gamma2d_hz = 0.0;
    double gammaTR_hz = 1e5;
    double gammaTRd_hz = 1e5;

    double omega_mhz(int qubit) const;
    double g_mhz(int qubit) const;
    const NonlinearityModel& nl(int qubit) const;
    double detuning_mhz(int qubit) const { return omega_mhz(qubit) - Omega_mhz; }

    // Throws InvalidInput on nonpositive frequencies or negative rates.
    void validate() const;
    // Messages for soft conditions such as g / |Delta| > 0.1.
    std::vector<std::string> warnings() const;
};

struct RabiParams {
    double omega_mhz = 100.0;
    double Omega_mhz = 500.0;
    double g_mhz = 0.0;

    void validate() const;
};

// Embedded operators of the standard (NR1, transmon, NR2) layout.
struct OperatorSet {
    explicit OperatorSet(const ops::SubsystemLayout& layout);

    ops::SubsystemLayout layout;
    Matrix b1, b2;
    Matrix n1, n2;
    Matrix x1, x2;  // b + b†
    Matrix sz, sx, sm;

    const Matrix& b(int qubit) const { return qubit == 1 ? b1 : b2; }
    const Matrix& n(int qubit) const { return qubit == 1 ? n1 : n2; }
    const Matrix& x(int qubit) const { return qubit == 1 ? x1 : x2; }
    Matrix nonlinearity(int qubit, const NonlinearityModel& m) const;
};

// H0 + H_int of the full system in rad/us, without any rotating-wave approximation.
Matrix build_full_hamiltonian(const SystemParams& params, const ops::SubsystemLayout& layout);

Matrix build_rabi_hamiltonian(const RabiParams& params, int n_max);

// delta = omega21 - omega10 of omega b†b + H_nl by exact diagonalization, MHz.
double nonlinear_shift(const NonlinearityModel& model, double omega_mhz, int n_max = 10);

struct SpectrumReport {
    std::vector<double> eigenvalues_mhz;  // ascending
    double delta_mhz = 0.0;
    std::vector<double> p;         // p_n = |<n, ground | psi_n>|^2 for n = 0, 1, 2
    std::vector<double> leakage;   // SC-excited probability of psi_0 .. psi_2
    std::vector<double> fidelity;  // |<n | n_nl>| for n = 0 .. 3
    Matrix X;                      // <k|b|l> in the dressed basis, k, l = 0 .. 3
    int n_max_used = 0;
};

// Quartic U such that nonlinear_shift equals delta_target. Bisection over [0, 0.1 omega].
double calibrate_quartic(double omega_mhz, double delta_target_mhz, int n_max = 10,
                         double rel_tol = 1e-6);

SpectrumReport dressed_basis_report(const NonlinearityModel& model, double omega_mhz,
                                    int n_max = 10);

// Exact diagonalization of the Rabi model. n_max is increased in steps of 5 until delta
// agrees with the n_max + 5 result to 1%; ConvergenceError beyond max_n_max.
SpectrumReport rabi_spectrum(const RabiParams& params, int n_max = 20, int max_n_max = 80);

// Fourth-order perturbative shift, MHz.
double perturbative_delta(const RabiParams& params);

struct EffectiveParams {
    double Gamma_mhz = 0.0;
    double lambda1_mhz = 0.0;
    double lambda2_mhz = 0.0;

    double lambda_mhz(int qubit) const { return qubit == 1 ? lambda1_mhz : lambda2_mhz; }
};

// Requires diagonal-Kerr nonlinearity on both modes.
EffectiveParams effective_params(const SystemParams& params);
// Same formulas at explicit NR and transmon frequencies (used for shifted configurations).
EffectiveParams effective_params(const SystemParams& params, double omega1_mhz,
                                 double omega2_mhz, double Omega_mhz);

double effective_lambda(double g_mhz, double omega_mhz, double Omega_mhz, double beta_mhz);
double effective_gamma(double g1_mhz, double g2_mhz, double omega1_mhz, double omega2_mhz,
                       double Omega_mhz);

}  // namespace emsim
