// pulses.hpp: Gate protocols rendered as piecewise control schedules

#pragma once

#include "emsim/controls.hpp"
#include "emsim/model.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace emsim {

enum class Channel {
    NR1Shift,       // delta omega_1(t) b1†b1
    NR2Shift,       // delta omega_2(t) b2†b2
    TransmonShift,  // delta Omega(t) sigma_z / 2
    NR1Comp,        // change of the -lambda_1 compensation while Omega is shifted
    NR2Comp,
};

std::string to_string(Channel c);
Channel channel_from_string(const std::string& s);

// Square step on a frequency channel, MHz.
struct StepPulse {
    Channel channel;
    double start;
    double duration;
    double amplitude_mhz;

    double end() const noexcept { return start + duration; }
};

// A(t) * V0 * cos(2 pi carrier t + phase) (b_q + b_q†)
struct DrivePulse {
    int qubit;
    double amplitude_mhz;  // V0 / 2pi
    double carrier_mhz;
    double phase;
    Envelope envelope;
};

class PulseSchedule {
public:
    PulseSchedule() = default;
    static PulseSchedule idle(double duration);

    const std::vector<StepPulse>& steps() const noexcept { return steps_; }
    const std::vector<DrivePulse>& drives() const noexcept { return drives_; }
    double duration() const noexcept { return duration_; }
    bool empty() const noexcept { return steps_.empty() && drives_.empty() && duration_ == 0.0; }

    // Permanent -lambda_i shifts (MHz). Unset means "derive from the idle parameters".
    const std::optional<std::array<double, 2>>& compensation() const noexcept { return comp_; }
    void set_compensation(std::array<double, 2> comp_mhz) { comp_ = comp_mhz; }

    void add_step(const StepPulse& s);
    void add_drive(const DrivePulse& d);
    void extend_to(double duration);

    // Sequential composition: `next` starts at this schedule's end, after optional idle
    // padding to the next multiple of `align` (us).
    void append(const PulseSchedule& next, double align = 0.0);
    // Parallel composition on a common time origin.
    void overlay(const PulseSchedule& other);

    // Channels never overlap; duration covers every segment.
    void validate() const;

    std::string serialize() const;
    static PulseSchedule parse(const std::string& text);

private:
    std::vector<StepPulse> steps_;
    std::vector<DrivePulse> drives_;
    double duration_ = 0.0;
    std::optional<std::array<double, 2>> comp_;
};

enum class EnvelopeKind { Square, Gaussian };

struct GateSpec {
    enum class Kind { Rx, Ry, Rz, SqrtISwap, XYEvolve };

    Kind kind = Kind::Rx;
    int qubit = 1;
    double angle = 0.0;  // rotation angle, or theta of exp(-i s theta (XX+YY)/2) for XYEvolve

    static GateSpec rx(int q, double a) { return {Kind::Rx, q, a}; }
    static GateSpec ry(int q, double a) { return {Kind::Ry, q, a}; }
    static GateSpec rz(int q, double a) { return {Kind::Rz, q, a}; }
    static GateSpec sqrt_iswap() { return {Kind::SqrtISwap, 0, 0.0}; }
    static GateSpec xy(double theta) { return {Kind::XYEvolve, 0, theta}; }

    void validate() const;
};

std::string to_string(const GateSpec& g);

struct GateOptions {
    double drive_amplitude_mhz = 0.3;  // V0 / 2pi of xy rotations
    EnvelopeKind envelope = EnvelopeKind::Gaussian;
    double gaussian_truncation = 3.0;
    double rz_shift_mhz = 1.0;           // |delta omega| / 2pi of z rotations
    double transmon_shift_mhz = -7500.0;  // delta Omega / 2pi during XY windows
};

// Step pulse of duration |angle| / |delta omega| realizing exp(-i angle sigma_z / 2).
PulseSchedule schedule_rz(int qubit, double angle, double shift_mhz);

// Resonant drive with carrier omega_q; area V0 * integral A = |angle|.
PulseSchedule schedule_rxy(int qubit, double angle, double axis_phase, double amplitude_mhz,
                           EnvelopeKind kind, double carrier_mhz, double truncation = 3.0);

struct XYWindow {
    double omega_r_mhz;
    double xi1_mhz, xi2_mhz;
    double Omega_gate_mhz;
    double Gamma_mhz;  // effective coupling at (omega_r, omega_r, Omega_gate)
    double tau;        // interaction time
    double rephase1, rephase2;
};

XYWindow plan_xy_window(const SystemParams& params, double transmon_shift_mhz, double theta);

// Resonant XY evolution by theta (pi/4 gives sqrt(iSWAP)) with rephasing z pulses.
PulseSchedule schedule_xy(const SystemParams& params, double transmon_shift_mhz, double theta);
PulseSchedule schedule_sqrt_iswap(const SystemParams& params, double transmon_shift_mhz);

PulseSchedule schedule_gate(const GateSpec& gate, const SystemParams& params,
                            const GateOptions& opts);

// Period that XY windows must start on so that the exchange phase (omega1 - omega2) t
// vanishes in the bare rotating frame.
double xy_alignment(const SystemParams& params);

// H(t) = H0 + H_int + sum (comp_i + delta omega_i(t)) n_i + drives + delta Omega(t) sigma_z / 2.
ControlledHamiltonian render_hamiltonian(const PulseSchedule& schedule, const SystemParams& params,
                                         const ops::SubsystemLayout& layout);

// Permanent compensation -lambda_i at the idle configuration, MHz.
std::array<double, 2> idle_compensation(const SystemParams& params);

}  // namespace emsim
