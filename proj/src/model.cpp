// model.cpp: Hamiltonians of the two-NR + transmon system and the NR-SC Rabi model

#include "emsim/model.hpp"

#include "emsim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace emsim {

using ops::Axis;
using ops::Subsystem;

Matrix NonlinearityModel::hamiltonian(int dim) const {
    validate();
    const Matrix b = ops::annihilation_operator(dim);
    const double s = angular(strength_mhz);
    if (kind == Kind::DiagonalKerr) {
        Matrix h = Matrix::Zero(dim, dim);
        for (int n = 0; n < dim; ++n) h(n, n) = s * n * (n - 1.0);
        return h;
    }
    // (b + b†)^4 built from the truncated ladder operators, as in a plain Fock-space model.
    const Matrix x = b + b.adjoint();
    const Matrix x2 = x * x;
    return s * x2 * x2;
}

void NonlinearityModel::validate() const {
    if (!std::isfinite(strength_mhz) || strength_mhz < 0.0) {
        throw InvalidInput("NonlinearityModel: strength must be finite and >= 0, got " +
                           std::to_string(strength_mhz));
    }
}

std::string to_string(const NonlinearityModel& m) {
    std::ostringstream os;
    os << (m.kind == NonlinearityModel::Kind::DiagonalKerr ? "kerr(" : "quartic(")
       << m.strength_mhz << " MHz)";
    return os.str();
}

double SystemParams::omega_mhz(int qubit) const {
    if (qubit != 1 && qubit != 2) throw InvalidInput("qubit index must be 1 or 2");
    return qubit == 1 ? omega1_mhz : omega2_mhz;
}

double SystemParams::g_mhz(int qubit) const {
    if (qubit != 1 && qubit != 2) throw InvalidInput("qubit index must be 1 or 2");
    return qubit == 1 ? g1_mhz : g2_mhz;
}

const NonlinearityModel& SystemParams::nl(int qubit) const {
    if (qubit != 1 && qubit != 2) throw InvalidInput("qubit index must be 1 or 2");
    return qubit == 1 ? nl1 : nl2;
}

void SystemParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw InvalidInput(std::string("SystemParams: ") + name + " must be > 0, got " +
                               std::to_string(v));
        }
    };
    auto nonnegative = [](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidInput(std::string("SystemParams: ") + name + " must be >= 0, got " +
                               std::to_string(v));
        }
    };
    positive(omega1_mhz, "omega1");
    positive(omega2_mhz, "omega2");
    positive(Omega_mhz, "Omega");
    nonnegative(g1_mhz, "g1");
    nonnegative(g2_mhz, "g2");
    nonnegative(gamma1_hz, "gamma1");
    nonnegative(gamma2_hz, "gamma2");
    nonnegative(gamma1d_hz, "gamma1d");
    nonnegative(gamma2d_hz, "gamma2d");
    nonnegative(gammaTR_hz, "gammaTR");
    nonnegative(gammaTRd_hz, "gammaTRd");
    nl1.validate();
    nl2.validate();
}

std::vector<std::string> SystemParams::warnings() const {
    std::vector<std::string> out;
    for (int q = 1; q <= 2; ++q) {
        const double ratio = g_mhz(q) / std::abs(detuning_mhz(q));
        if (ratio > 0.1) {
            out.push_back("g" + std::to_string(q) + "/|Delta" + std::to_string(q) +
                          "| = " + std::to_string(ratio) +
                          " exceeds 0.1; effective parameters are not reliable");
        }
    }
    return out;
}

void RabiParams::validate() const {
    if (!(omega_mhz > 0.0) || !(Omega_mhz > omega_mhz) || !std::isfinite(Omega_mhz)) {
        throw InvalidInput("RabiParams: require Omega_SC > omega_NR > 0");
    }
    if (!std::isfinite(g_mhz) || g_mhz < 0.0) {
        throw InvalidInput("RabiParams: g must be finite and >= 0");
    }
}

OperatorSet::OperatorSet(const ops::SubsystemLayout& l) : layout(l) {
    if (!layout.contains(Subsystem::NR1) || !layout.contains(Subsystem::NR2) ||
        !layout.contains(Subsystem::Transmon)) {
        throw DimensionError("OperatorSet: layout must contain NR1, transmon and NR2");
    }
    const int d1 = layout.dim(Subsystem::NR1);
    const int d2 = layout.dim(Subsystem::NR2);
    b1 = ops::embed(ops::annihilation_operator(d1), Subsystem::NR1, layout);
    b2 = ops::embed(ops::annihilation_operator(d2), Subsystem::NR2, layout);
    n1 = ops::embed(ops::number_operator(d1), Subsystem::NR1, layout);
    n2 = ops::embed(ops::number_operator(d2), Subsystem::NR2, layout);
    x1 = b1 + b1.adjoint();
    x2 = b2 + b2.adjoint();
    sz = ops::embed(ops::pauli(Axis::Z), Subsystem::Transmon, layout);
    sx = ops::embed(ops::pauli(Axis::X), Subsystem::Transmon, layout);
    sm = ops::embed(ops::pauli(Axis::Minus), Subsystem::Transmon, layout);
}

Matrix OperatorSet::nonlinearity(int qubit, const NonlinearityModel& m) const {
    const Subsystem s = qubit == 1 ? Subsystem::NR1 : Subsystem::NR2;
    return ops::embed(m.hamiltonian(layout.dim(s)), s, layout);
}

Matrix build_full_hamiltonian(const SystemParams& p, const ops::SubsystemLayout& layout) {
    p.validate();
    const OperatorSet o(layout);
    Matrix h = angular(p.omega1_mhz) * o.n1 + angular(p.omega2_mhz) * o.n2 +
               o.nonlinearity(1, p.nl1) + o.nonlinearity(2, p.nl2) +
               0.5 * angular(p.Omega_mhz) * o.sz;
    h += angular(p.g1_mhz) * o.x1 * o.sx + angular(p.g2_mhz) * o.x2 * o.sx;
    return h;
}

Matrix build_rabi_hamiltonian(const RabiParams& p, int n_max) {
    p.validate();
    const auto layout = ops::SubsystemLayout::rabi(n_max);
    const Matrix b = ops::embed(ops::annihilation_operator(n_max + 1), Subsystem::NR, layout);
    const Matrix sz = ops::embed(ops::pauli(Axis::Z), Subsystem::SC, layout);
    const Matrix sx = ops::embed(ops::pauli(Axis::X), Subsystem::SC, layout);
    return angular(p.omega_mhz) * b.adjoint() * b + 0.5 * angular(p.Omega_mhz) * sz +
           angular(p.g_mhz) * (b + b.adjoint()) * sx;
}

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> diagonalize(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
    return es;
}

double gap_difference(const Eigen::VectorXd& e) {
    return ((e(2) - e(1)) - (e(1) - e(0))) / kTwoPi;
}

Matrix single_mode_hamiltonian(const NonlinearityModel& m, double omega_mhz, int n_max) {
    const int dim = n_max + 1;
    return angular(omega_mhz) * ops::number_operator(dim) + m.hamiltonian(dim);
}

}  // namespace

double nonlinear_shift(const NonlinearityModel& model, double omega_mhz, int n_max) {
    if (n_max < 3) throw InvalidInput("nonlinear_shift: n_max must be >= 3");
    if (!(omega_mhz > 0.0)) throw InvalidInput("nonlinear_shift: omega must be > 0");
    return gap_difference(diagonalize(single_mode_hamiltonian(model, omega_mhz, n_max)).eigenvalues());
}

double calibrate_quartic(double omega_mhz, double delta_target_mhz, int n_max, double rel_tol) {
    if (!(delta_target_mhz > 0.0)) throw InvalidInput("calibrate_quartic: target must be > 0");
    double lo = 0.0;
    double hi = 0.1 * omega_mhz;
    auto f = [&](double u) {
        return nonlinear_shift(NonlinearityModel::quartic(u), omega_mhz, n_max) - delta_target_mhz;
    };
    if (f(hi) < 0.0) {
        throw ConvergenceError("calibrate_quartic: target delta " + std::to_string(delta_target_mhz) +
                               " MHz not reachable with U <= 0.1 omega");
    }
    for (int it = 0; it < 200 && hi - lo > rel_tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

SpectrumReport dressed_basis_report(const NonlinearityModel& model, double omega_mhz, int n_max) {
    if (n_max < 3) throw InvalidInput("dressed_basis_report: n_max must be >= 3");
    const auto es = diagonalize(single_mode_hamiltonian(model, omega_mhz, n_max));
    Matrix v = es.eigenvectors();
    // Fix the eigenvector phase so that <n|n_nl> is real and positive.
    for (int k = 0; k < v.cols(); ++k) {
        const cplx d = v(k, k);
        if (std::abs(d) > 0) v.col(k) *= std::conj(d) / std::abs(d);
    }
    SpectrumReport r;
    r.n_max_used = n_max;
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
        r.eigenvalues_mhz.push_back(es.eigenvalues()(k) / kTwoPi);
    }
    r.delta_mhz = gap_difference(es.eigenvalues());
    for (int n = 0; n < 4; ++n) r.fidelity.push_back(std::abs(v(n, n)));
    const Matrix x = v.adjoint() * ops::annihilation_operator(n_max + 1) * v;
    r.X = x.topLeftCorner(4, 4);
    return r;
}

namespace {

SpectrumReport rabi_once(const RabiParams& p, int n_max) {
    const auto es = diagonalize(build_rabi_hamiltonian(p, n_max));
    const auto layout = ops::SubsystemLayout::rabi(n_max);
    SpectrumReport r;
    r.n_max_used = n_max;
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
        r.eigenvalues_mhz.push_back(es.eigenvalues()(k) / kTwoPi);
    }
    r.delta_mhz = gap_difference(es.eigenvalues());
    const Matrix& v = es.eigenvectors();
    for (int n = 0; n < 3; ++n) {
        r.p.push_back(std::norm(v(layout.index({n, ops::kTransmonGround}), n)));
        double leak = 0.0;
        for (int m = 0; m <= n_max; ++m) {
            leak += std::norm(v(layout.index({m, ops::kTransmonExcited}), n));
        }
        r.leakage.push_back(leak);
    }
    return r;
}

}  // namespace

SpectrumReport rabi_spectrum(const RabiParams& p, int n_max, int max_n_max) {
    p.validate();
    if (n_max < 3) throw InvalidInput("rabi_spectrum: n_max must be >= 3");
    for (int n = n_max; n + 5 <= max_n_max; n += 5) {
        SpectrumReport a = rabi_once(p, n);
        const SpectrumReport b = rabi_once(p, n + 5);
        const double diff = std::abs(a.delta_mhz - b.delta_mhz);
        if (diff <= 0.01 * std::abs(b.delta_mhz) || diff < 1e-9) return a;
    }
    throw ConvergenceError("rabi_spectrum: delta not converged at n_max = " +
                           std::to_string(max_n_max));
}

double perturbative_delta(const RabiParams& p) {
    const double w = p.omega_mhz;
    const double W = p.Omega_mhz;
    if (W == w) throw DomainError("perturbative_delta: Omega equals omega");
    const double g = p.g_mhz;
    const double dm = W - w;
    const double dp = W + w;
    return 2.0 * std::pow(g, 4) *
           (2.0 / (dm * dm * dp) + 2.0 / (dp * dp * dm) + 1.0 / (dp * dp * dp) + 1.0 / (dm * dm * dm));
}

double effective_gamma(double g1, double g2, double w1, double w2, double W) {
    const double den = (W * W - w1 * w1) * (W * W - w2 * w2);
    if (den == 0.0) throw DomainError("effective_gamma: resonant denominator");
    return 4.0 * g1 * g2 * W * (w1 * w1 + w2 * w2 - 2.0 * W * W) / den;
}

double effective_lambda(double g, double w, double W, double beta) {
    const double den = (2.0 * beta + W + w) * (W * W - w * w);
    if (den == 0.0) throw DomainError("effective_lambda: resonant denominator");
    return -2.0 * g * g * (W * W + w * (2.0 * beta + W)) / den;
}

EffectiveParams effective_params(const SystemParams& p, double w1, double w2, double W) {
    if (p.nl1.kind != NonlinearityModel::Kind::DiagonalKerr ||
        p.nl2.kind != NonlinearityModel::Kind::DiagonalKerr) {
        throw InvalidInput("effective_params: requires diagonal-Kerr nonlinearity");
    }
    EffectiveParams e;
    e.Gamma_mhz = effective_gamma(p.g1_mhz, p.g2_mhz, w1, w2, W);
    e.lambda1_mhz = effective_lambda(p.g1_mhz, w1, W, p.nl1.strength_mhz);
    e.lambda2_mhz = effective_lambda(p.g2_mhz, w2, W, p.nl2.strength_mhz);
    return e;
}

EffectiveParams effective_params(const SystemParams& p) {
    return effective_params(p, p.omega1_mhz, p.omega2_mhz, p.Omega_mhz);
}

}  // namespace emsim
