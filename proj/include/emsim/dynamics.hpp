// dynamics.hpp: Lindblad and Bloch-Redfield time evolution of density matrices

#pragma once

#include "emsim/controls.hpp"
#include "emsim/operators.hpp"

#include <functional>
#include <string>
#include <vector>

namespace emsim {

// Valid density matrix: Hermitian, unit trace, numerically positive.
class DensityMatrix {
public:
    DensityMatrix(Matrix rho, ops::SubsystemLayout layout);
    static DensityMatrix pure(const Vector& psi, ops::SubsystemLayout layout);

    const Matrix& matrix() const noexcept { return rho_; }
    const ops::SubsystemLayout& layout() const noexcept { return layout_; }

private:
    Matrix rho_;
    ops::SubsystemLayout layout_;
};

struct DensityCheck {
    double trace_error = 0.0;
    double hermiticity_error = 0.0;
    double min_eigenvalue = 0.0;
};
DensityCheck check_density(const Matrix& rho);

struct LindbladTerm {
    Matrix op;
    double rate;  // 1/us, multiplies D(op) = op rho op† - {op† op, rho}/2
    std::string label;
};

struct LindbladSpec {
    std::vector<LindbladTerm> terms;

    void add(Matrix op, double rate, std::string label = {});
    void append(const LindbladSpec& other);
    void validate(int dim) const;
};

struct ThermalBathSpec {
    double chi_hz = 0.0;  // chi / 2pi
    double nbar = 0.0;

    static double occupation(double omega_mhz, double temperature_mhz);
    static ThermalBathSpec from_temperature(double chi_hz, double omega_mhz, double temperature_mhz);
    void validate() const;
};

// chi (nbar + 1) D(b) + chi nbar D(b†)
LindbladSpec thermal_dissipators(const ThermalBathSpec& bath, const Matrix& b);

enum class Frame {
    Lab,          // RK4 on the full H(t)
    Interaction,  // RK4 in the frame of the diagonal of the first static part
    Dressed       // RK4 in the eigenframe of each static part, secular filtering
};

std::string to_string(Frame f);

struct IntegratorConfig {
    double step = 0.0;  // upper bound on the RK4 step (us); 0 selects the automatic bound
    int stride = 1;     // observer is called every `stride` internal steps
    Frame frame = Frame::Dressed;
    double secular_cutoff_mhz = 50.0;  // Dressed frame only
    double step_relax = 1.0;           // multiplies automatic bounds (fast mode uses 4)
    double samples_per_period = 40.0;        // Lab and Interaction frames
    double drive_samples_per_period = 10.0;  // Dressed frame, fastest retained drive phase

    void validate() const;
};

// Automatic RK4 step for the Lab and Interaction frames: (1/40) 2pi / max frequency.
double default_step(double max_frequency_mhz, double samples_per_period = 40.0);

struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix> states;  // lab frame, re-Hermitized
    double max_trace_drift = 0.0;
    long steps = 0;
};

using Observer = std::function<void(double t, const Matrix& rho)>;

// Integrates d rho/dt = -i[H(t), rho] + sum_k rate_k D(L_k) rho from t_grid.front() and
// stores the state at each time in t_grid (sorted, nonnegative).
Trajectory lindblad_evolve(const ControlledHamiltonian& h, const LindbladSpec& diss,
                           const Matrix& rho0, const std::vector<double>& t_grid,
                           const IntegratorConfig& cfg, const Observer& observer = {});

// Bath coupling operator with a zero-temperature white spectrum: S(0) = rate_zero,
// S(w > 0) = rate_positive, S(w < 0) = 0. Rates in 1/us.
struct NoiseCoupling {
    Matrix op;
    double rate_zero = 0.0;
    double rate_positive = 0.0;
    std::string label;

    double spectrum(double w, double zero_tol) const noexcept;
};

struct BlochRedfieldOptions {
    // Cross terms with |w_ab - w_cd| > secular_factor * max rate are dropped.
    double secular_factor = 10.0;
};

Trajectory bloch_redfield_evolve(const Matrix& h, const std::vector<NoiseCoupling>& couplings,
                                 const Matrix& rho0, const std::vector<double>& t_grid,
                                 const BlochRedfieldOptions& opts = {});

// Fits log(value - baseline) over the first three decay constants; baseline is the mean of
// the final 5% of the series. Returns the decay time in the units of t.
double extract_decay_time(const std::vector<double>& t, const std::vector<double>& value);

}  // namespace emsim
