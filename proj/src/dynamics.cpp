// dynamics.cpp: Density-matrix utilities and the lab / interaction-picture RK4 integrators

#include "emsim/dynamics.hpp"

#include "dressed_frame.hpp"
#include "emsim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace emsim {

DensityMatrix::DensityMatrix(Matrix rho, ops::SubsystemLayout layout)
    : rho_(std::move(rho)), layout_(std::move(layout)) {
    if (rho_.rows() != layout_.total_dim() || rho_.cols() != layout_.total_dim()) {
        throw DimensionError("DensityMatrix: dimension does not match layout");
    }
    const auto c = check_density(rho_);
    if (c.hermiticity_error > 1e-8 || c.trace_error > 1e-8 || c.min_eigenvalue < -1e-8) {
        throw InvalidInput("DensityMatrix: not a valid density matrix");
    }
}

DensityMatrix DensityMatrix::pure(const Vector& psi, ops::SubsystemLayout layout) {
    if (std::abs(psi.norm() - 1.0) > 1e-8) throw InvalidInput("DensityMatrix::pure: unnormalized state");
    return DensityMatrix(psi * psi.adjoint(), std::move(layout));
}

DensityCheck check_density(const Matrix& rho) {
    DensityCheck c;
    c.trace_error = std::abs(rho.trace() - cplx{1.0, 0.0});
    c.hermiticity_error = ops::hermiticity_error(rho);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    return c;
}

void LindbladSpec::add(Matrix op, double rate, std::string label) {
    terms.push_back({std::move(op), rate, std::move(label)});
}

void LindbladSpec::append(const LindbladSpec& other) {
    terms.insert(terms.end(), other.terms.begin(), other.terms.end());
}

void LindbladSpec::validate(int dim) const {
    for (const auto& t : terms) {
        if (!std::isfinite(t.rate) || t.rate < 0.0) {
            throw InvalidInput("LindbladSpec: rate of '" + t.label + "' must be >= 0");
        }
        if (t.op.rows() != dim || t.op.cols() != dim) {
            throw DimensionError("LindbladSpec: operator '" + t.label + "' has wrong dimension");
        }
    }
}

double ThermalBathSpec::occupation(double omega_mhz, double temperature_mhz) {
    if (!(omega_mhz > 0.0) || !(temperature_mhz > 0.0)) {
        throw InvalidInput("ThermalBathSpec: omega and T must be > 0");
    }
    return 1.0 / std::expm1(omega_mhz / temperature_mhz);
}

ThermalBathSpec ThermalBathSpec::from_temperature(double chi_hz, double omega_mhz,
                                                  double temperature_mhz) {
    return {chi_hz, occupation(omega_mhz, temperature_mhz)};
}

void ThermalBathSpec::validate() const {
    if (!std::isfinite(chi_hz) || chi_hz < 0.0) throw InvalidInput("ThermalBathSpec: chi must be >= 0");
    if (!std::isfinite(nbar) || nbar < 0.0) throw InvalidInput("ThermalBathSpec: nbar must be >= 0");
}

LindbladSpec thermal_dissipators(const ThermalBathSpec& bath, const Matrix& b) {
    bath.validate();
    const double chi = angular_rate_hz(bath.chi_hz);
    LindbladSpec spec;
    spec.add(b, chi * (bath.nbar + 1.0), "thermal-down");
    if (bath.nbar > 0.0) spec.add(b.adjoint(), chi * bath.nbar, "thermal-up");
    return spec;
}

std::string to_string(Frame f) {
    switch (f) {
        case Frame::Lab: return "lab";
        case Frame::Interaction: return "interaction";
        case Frame::Dressed: return "dressed";
    }
    return "?";
}

void IntegratorConfig::validate() const {
    if (!std::isfinite(step) || step < 0.0) throw InvalidInput("IntegratorConfig: step must be >= 0");
    if (stride < 1) throw InvalidInput("IntegratorConfig: stride must be >= 1");
    if (!(secular_cutoff_mhz > 0.0)) throw InvalidInput("IntegratorConfig: cutoff must be > 0");
    if (!(step_relax >= 1.0)) throw InvalidInput("IntegratorConfig: step_relax must be >= 1");
    if (!(samples_per_period >= 4.0) || !(drive_samples_per_period >= 4.0)) {
        throw InvalidInput("IntegratorConfig: samples per period must be >= 4");
    }
}

double default_step(double max_frequency_mhz, double samples_per_period) {
    if (!(max_frequency_mhz > 0.0)) throw InvalidInput("default_step: frequency must be > 0");
    return 1.0 / (samples_per_period * max_frequency_mhz);
}

namespace detail {

std::vector<double> integration_edges(const ControlledHamiltonian& h,
                                      const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw InvalidInput("lindblad_evolve: empty time grid");
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (!std::isfinite(t_grid[k]) || t_grid[k] < 0.0 || (k > 0 && t_grid[k] < t_grid[k - 1])) {
            throw InvalidInput("lindblad_evolve: time grid must be finite, nonnegative and sorted");
        }
    }
    std::vector<double> pts = t_grid;
    for (double b : h.breakpoints()) {
        if (b > t_grid.front() && b < t_grid.back()) pts.push_back(b);
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double p : pts) {
        if (out.empty() || p - out.back() > 1e-13) out.push_back(p);
    }
    return out;
}

void check_trace(const Matrix& rho, double t, Trajectory& traj) {
    const double drift = std::abs(rho.trace().real() - 1.0);
    traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
    if (drift > 1e-6 || !rho.allFinite()) {
        throw IntegrationError("lindblad_evolve: trace drift " + std::to_string(drift) +
                               " at t = " + std::to_string(t) + " us exceeds 1e-6");
    }
}

}  // namespace detail

namespace {

struct DenseDissipator {
    std::vector<Matrix> l;  // sqrt(rate) * L
    Matrix k;               // sum rate L† L
};

DenseDissipator dense_dissipator(const LindbladSpec& diss, int dim) {
    DenseDissipator d;
    d.k = Matrix::Zero(dim, dim);
    for (const auto& t : diss.terms) {
        if (t.rate == 0.0) continue;
        d.l.push_back(std::sqrt(t.rate) * t.op);
        d.k += t.rate * t.op.adjoint() * t.op;
    }
    return d;
}

// -i H rho + i rho H + sum L rho L† - {K, rho}/2 for Hermitian rho.
Matrix lindblad_rhs(const Matrix& h, const std::vector<Matrix>& l, const Matrix& k,
                    const Matrix& rho) {
    const Matrix heff = h - 0.5 * kI * k;
    Matrix q = -kI * (heff * rho);
    Matrix out = q + q.adjoint();
    for (const auto& op : l) out.noalias() += op * rho * op.adjoint();
    return out;
}

// Fastest oscillation RK4 must resolve. Lab frame: spectral width of H. Interaction
// frame: largest |D_a - D_b| over nonzero couplings and jump elements (D = first-segment
// diagonal), plus drive carriers.
double fastest_frequency_mhz(const ControlledHamiltonian& h, const DenseDissipator& dd, bool lab) {
    double wmax = 0.0;
    const Eigen::VectorXd d = h.segments().front().h.diagonal().real();
    auto couplings = [&](const Matrix& m, double extra) {
        for (Eigen::Index a = 0; a < m.rows(); ++a) {
            for (Eigen::Index b = 0; b < m.cols(); ++b) {
                if (a != b && std::abs(m(a, b)) > 0.0) {
                    wmax = std::max(wmax, std::abs(d(a) - d(b)) + extra);
                }
            }
        }
    };
    for (const auto& s : h.segments()) {
        if (lab) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(s.h, Eigen::EigenvaluesOnly);
            wmax = std::max(wmax, es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff());
        } else {
            couplings(s.h, 0.0);
            const Eigen::VectorXd ds = s.h.diagonal().real() - d;
            wmax = std::max(wmax, ds.cwiseAbs().maxCoeff());
        }
    }
    for (const auto& dr : h.drives()) {
        wmax = std::max(wmax, std::abs(dr.carrier));
        if (!lab) couplings(dr.op, std::abs(dr.carrier));
    }
    if (!lab) {
        for (const auto& op : dd.l) couplings(op, 0.0);
    }
    return wmax / kTwoPi;
}

Trajectory evolve_dense(const ControlledHamiltonian& h, const LindbladSpec& diss,
                        const Matrix& rho0, const std::vector<double>& t_grid,
                        const IntegratorConfig& cfg, const Observer& observer, bool interaction) {
    const int dim = h.dim();
    const auto dd = dense_dissipator(diss, dim);
    const auto edges = detail::integration_edges(h, t_grid);

    double hmax = default_step(std::max(fastest_frequency_mhz(h, dd, !interaction), 1e-6), cfg.samples_per_period);
    const double rate_norm = dd.k.cwiseAbs().rowwise().sum().maxCoeff();
    if (rate_norm > 0.0) hmax = std::min(hmax, 0.05 / rate_norm);
    hmax *= cfg.step_relax;
    if (cfg.step > 0.0) hmax = std::min(hmax, cfg.step);

    // Interaction frame: rho_I = e^{iDt} rho e^{-iDt} with D the diagonal of the first segment.
    const Eigen::VectorXd diag = h.segments().front().h.diagonal().real();
    const Matrix dmat = diag.cast<cplx>().asDiagonal();
    auto phases = [&](double t) {
        Vector u(dim);
        for (int a = 0; a < dim; ++a) u(a) = std::exp(kI * diag(a) * t);
        return Matrix(u * u.adjoint());
    };
    auto to_lab = [&](const Matrix& x, double t) -> Matrix {
        if (!interaction) return x;
        return x.cwiseProduct(phases(t).conjugate());
    };
    auto rhs = [&](double t, double mid, const Matrix& x) -> Matrix {
        if (!interaction) return lindblad_rhs(h.at(t, mid), dd.l, dd.k, x);
        const Matrix p = phases(t);
        std::vector<Matrix> li;
        li.reserve(dd.l.size());
        for (const auto& op : dd.l) li.push_back(op.cwiseProduct(p));
        return lindblad_rhs((h.at(t, mid) - dmat).cwiseProduct(p), li, dd.k.cwiseProduct(p), x);
    };

    Trajectory traj;
    Matrix x = rho0;
    if (interaction) x = rho0.cwiseProduct(phases(t_grid.front()));
    std::size_t next_out = 0;
    auto emit = [&](double t) {
        while (next_out < t_grid.size() && std::abs(t_grid[next_out] - t) <= 1e-13) {
            Matrix r = to_lab(x, t);
            r = 0.5 * (r + r.adjoint());
            detail::check_trace(r, t, traj);
            traj.times.push_back(t_grid[next_out]);
            traj.states.push_back(std::move(r));
            ++next_out;
        }
    };
    if (observer) observer(t_grid.front(), rho0);
    emit(edges.front());
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double a = edges[e];
        const double b = edges[e + 1];
        const double mid = 0.5 * (a + b);
        const long n = std::max<long>(1, static_cast<long>(std::ceil((b - a) / hmax - 1e-9)));
        const double step = (b - a) / n;
        for (long s = 0; s < n; ++s) {
            const double t = a + s * step;
            const Matrix k1 = rhs(t, mid, x);
            const Matrix k2 = rhs(t + 0.5 * step, mid, x + 0.5 * step * k1);
            const Matrix k3 = rhs(t + 0.5 * step, mid, x + 0.5 * step * k2);
            const Matrix k4 = rhs(t + step, mid, x + step * k3);
            x += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            // The right-hand side assumes Hermitian x; an anti-Hermitian residue is undamped.
            x = 0.5 * (x + x.adjoint()).eval();
            ++traj.steps;
            if (observer && traj.steps % cfg.stride == 0) {
                const double tn = s + 1 == n ? b : t + step;
                observer(tn, to_lab(x, tn));
            }
        }
        emit(b);
    }
    return traj;
}

}  // namespace

Trajectory lindblad_evolve(const ControlledHamiltonian& h, const LindbladSpec& diss,
                           const Matrix& rho0, const std::vector<double>& t_grid,
                           const IntegratorConfig& cfg, const Observer& observer) {
    cfg.validate();
    diss.validate(h.dim());
    if (rho0.rows() != h.dim() || rho0.cols() != h.dim()) {
        throw DimensionError("lindblad_evolve: rho0 dimension does not match H");
    }
    if (!rho0.allFinite()) throw NumericInputError("lindblad_evolve: non-finite rho0");
    switch (cfg.frame) {
        case Frame::Lab: return evolve_dense(h, diss, rho0, t_grid, cfg, observer, false);
        case Frame::Interaction: return evolve_dense(h, diss, rho0, t_grid, cfg, observer, true);
        case Frame::Dressed: return detail::evolve_dressed(h, diss, rho0, t_grid, cfg, observer);
    }
    throw InvalidInput("lindblad_evolve: unknown frame");
}

double extract_decay_time(const std::vector<double>& t, const std::vector<double>& value) {
    if (t.size() != value.size()) throw InvalidInput("extract_decay_time: size mismatch");
    const std::size_t n = t.size();
    if (n < 10) throw InvalidInput("extract_decay_time: need at least 10 samples");
    const std::size_t tail = std::max<std::size_t>(1, n / 20);
    double baseline = 0.0;
    for (std::size_t k = n - tail; k < n; ++k) baseline += value[k];
    baseline /= static_cast<double>(tail);

    const double v0 = value.front() - baseline;
    if (!(v0 > 0.0)) throw FitError("extract_decay_time: series does not decay above its baseline");
    // Fit window ends where the signal has dropped by e^-3 (three decay constants).
    std::size_t end = 0;
    while (end < n && value[end] - baseline > 0.0 && value[end] - baseline >= v0 * std::exp(-3.0)) ++end;
    end = std::max<std::size_t>(end, std::min<std::size_t>(n, 10));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t k = 0; k < end; ++k) {
        const double y = value[k] - baseline;
        if (!(y > 0.0)) break;
        const double ly = std::log(y);
        sx += t[k];
        sy += ly;
        sxx += t[k] * t[k];
        sxy += t[k] * ly;
        ++m;
    }
    if (m < 3) throw FitError("extract_decay_time: fewer than 3 positive samples in the fit window");
    const double den = m * sxx - sx * sx;
    if (den <= 0.0) throw FitError("extract_decay_time: degenerate time axis");
    const double slope = (m * sxy - sx * sy) / den;
    if (!(slope < 0.0)) throw FitError("extract_decay_time: series is not decaying");
    return -1.0 / slope;
}

}  // namespace emsim
