// pulses.cpp: Schedules for Rz, Rx/Ry and XY-exchange gates

#include "emsim/pulses.hpp"

#include "emsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace emsim {

namespace {
constexpr double kEdgeTol = 1e-9;  // us
}

std::string to_string(Channel c) {
    switch (c) {
        case Channel::NR1Shift: return "nr1_shift";
        case Channel::NR2Shift: return "nr2_shift";
        case Channel::TransmonShift: return "tr_shift";
        case Channel::NR1Comp: return "nr1_comp";
        case Channel::NR2Comp: return "nr2_comp";
    }
    return "?";
}

Channel channel_from_string(const std::string& s) {
    for (Channel c : {Channel::NR1Shift, Channel::NR2Shift, Channel::TransmonShift,
                      Channel::NR1Comp, Channel::NR2Comp}) {
        if (to_string(c) == s) return c;
    }
    throw ScheduleError("unknown schedule channel '" + s + "'");
}

PulseSchedule PulseSchedule::idle(double duration) {
    if (!(duration >= 0.0)) throw ScheduleError("idle: duration must be >= 0");
    PulseSchedule s;
    s.duration_ = duration;
    return s;
}

void PulseSchedule::add_step(const StepPulse& s) {
    if (!std::isfinite(s.start) || !std::isfinite(s.duration) || !std::isfinite(s.amplitude_mhz) ||
        s.start < 0.0 || s.duration <= 0.0) {
        throw ScheduleError("add_step: start must be >= 0 and duration > 0");
    }
    steps_.push_back(s);
    duration_ = std::max(duration_, s.end());
}

void PulseSchedule::add_drive(const DrivePulse& d) {
    if (d.qubit != 1 && d.qubit != 2) throw ScheduleError("add_drive: qubit must be 1 or 2");
    if (!(d.amplitude_mhz > 0.0)) throw ScheduleError("add_drive: amplitude must be > 0");
    d.envelope.validate();
    if (d.envelope.begin() < -kEdgeTol) throw ScheduleError("add_drive: pulse starts before t = 0");
    drives_.push_back(d);
    duration_ = std::max(duration_, d.envelope.end());
}

void PulseSchedule::extend_to(double duration) { duration_ = std::max(duration_, duration); }

void PulseSchedule::append(const PulseSchedule& next, double align) {
    double offset = duration_;
    if (align > 0.0 && !next.empty()) offset = std::ceil(offset / align - 1e-9) * align;
    for (auto s : next.steps_) {
        s.start += offset;
        steps_.push_back(s);
    }
    for (auto d : next.drives_) {
        d.envelope.t0 += offset;
        drives_.push_back(d);
    }
    duration_ = std::max(duration_, offset + next.duration_);
    if (!comp_ && next.comp_) comp_ = next.comp_;
}

void PulseSchedule::overlay(const PulseSchedule& other) {
    steps_.insert(steps_.end(), other.steps_.begin(), other.steps_.end());
    drives_.insert(drives_.end(), other.drives_.begin(), other.drives_.end());
    duration_ = std::max(duration_, other.duration_);
    if (!comp_ && other.comp_) comp_ = other.comp_;
}

void PulseSchedule::validate() const {
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (steps_[i].end() > duration_ + kEdgeTol) throw ScheduleError("schedule: step beyond duration");
        for (std::size_t j = i + 1; j < steps_.size(); ++j) {
            if (steps_[i].channel != steps_[j].channel) continue;
            if (steps_[i].start < steps_[j].end() - kEdgeTol && steps_[j].start < steps_[i].end() - kEdgeTol) {
                throw ScheduleError("schedule: overlapping segments on channel " + to_string(steps_[i].channel));
            }
        }
    }
    for (std::size_t i = 0; i < drives_.size(); ++i) {
        if (drives_[i].envelope.end() > duration_ + kEdgeTol) throw ScheduleError("schedule: drive beyond duration");
        for (std::size_t j = i + 1; j < drives_.size(); ++j) {
            if (drives_[i].qubit != drives_[j].qubit) continue;
            const auto& a = drives_[i].envelope;
            const auto& b = drives_[j].envelope;
            if (a.begin() < b.end() - kEdgeTol && b.begin() < a.end() - kEdgeTol) {
                throw ScheduleError("schedule: overlapping drives on qubit " + std::to_string(drives_[i].qubit));
            }
        }
    }
}

std::string PulseSchedule::serialize() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "# channel kind start duration amplitude_mhz carrier_mhz phase [sigma]\n";
    os << "duration " << duration_ << "\n";
    if (comp_) os << "compensation " << (*comp_)[0] << " " << (*comp_)[1] << "\n";
    for (const auto& s : steps_) {
        os << to_string(s.channel) << " step " << s.start << " " << s.duration << " " << s.amplitude_mhz
           << " 0 0\n";
    }
    for (const auto& d : drives_) {
        const auto& e = d.envelope;
        os << "nr" << d.qubit << "_drive " << (e.kind == Envelope::Kind::Square ? "square" : "gaussian")
           << " " << e.begin() << " " << e.end() - e.begin() << " " << d.amplitude_mhz << " "
           << d.carrier_mhz << " " << d.phase;
        if (e.kind == Envelope::Kind::Gaussian) os << " " << e.width;
        os << "\n";
    }
    return os.str();
}

PulseSchedule PulseSchedule::parse(const std::string& text) {
    PulseSchedule s;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    double duration = 0.0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        auto fail = [&](const std::string& why) {
            throw ScheduleError("schedule line " + std::to_string(lineno) + ": " + why);
        };
        if (head == "duration") {
            if (!(ls >> duration)) fail("bad duration");
            continue;
        }
        if (head == "compensation") {
            std::array<double, 2> c{};
            if (!(ls >> c[0] >> c[1])) fail("bad compensation");
            s.comp_ = c;
            continue;
        }
        std::string kind;
        double start, dur, amp, carrier, phase;
        if (!(ls >> kind >> start >> dur >> amp >> carrier >> phase)) fail("expected 7 fields");
        if (head == "nr1_drive" || head == "nr2_drive") {
            DrivePulse d{head == "nr1_drive" ? 1 : 2, amp, carrier, phase, {}};
            if (kind == "square") {
                d.envelope = Envelope::square(start, dur);
            } else if (kind == "gaussian") {
                double sigma;
                if (!(ls >> sigma) || !(sigma > 0.0)) fail("gaussian drive needs sigma");
                d.envelope = Envelope::gaussian(start + 0.5 * dur, sigma, 0.5 * dur / sigma);
            } else {
                fail("unknown envelope '" + kind + "'");
            }
            s.add_drive(d);
        } else {
            if (kind != "step") fail("frequency channels only support 'step'");
            Channel c{};
            try {
                c = channel_from_string(head);
            } catch (const ScheduleError& e) {
                fail(e.what());
            }
            s.add_step({c, start, dur, amp});
        }
    }
    s.extend_to(duration);
    s.validate();
    return s;
}

void GateSpec::validate() const {
    if (!std::isfinite(angle)) throw ScheduleError("GateSpec: angle must be finite");
    if ((kind == Kind::Rx || kind == Kind::Ry || kind == Kind::Rz) && qubit != 1 && qubit != 2) {
        throw ScheduleError("GateSpec: qubit must be 1 or 2");
    }
}

std::string to_string(const GateSpec& g) {
    std::ostringstream os;
    os << std::setprecision(12);
    switch (g.kind) {
        case GateSpec::Kind::Rx: os << "Rx q" << g.qubit << " " << g.angle; break;
        case GateSpec::Kind::Ry: os << "Ry q" << g.qubit << " " << g.angle; break;
        case GateSpec::Kind::Rz: os << "Rz q" << g.qubit << " " << g.angle; break;
        case GateSpec::Kind::SqrtISwap: os << "SqrtISwap"; break;
        case GateSpec::Kind::XYEvolve: os << "XY " << g.angle; break;
    }
    return os.str();
}

PulseSchedule schedule_rz(int qubit, double angle, double shift_mhz) {
    if (qubit != 1 && qubit != 2) throw ScheduleError("schedule_rz: qubit must be 1 or 2");
    if (!(std::abs(shift_mhz) > 0.0) || !std::isfinite(shift_mhz)) {
        throw ScheduleError("schedule_rz: frequency shift must be nonzero");
    }
    if (!std::isfinite(angle)) throw ScheduleError("schedule_rz: angle must be finite");
    PulseSchedule s;
    if (angle == 0.0) return s;
    // A shift d on b†b multiplies |1> by e^{-i d dt}; Rz(angle) needs +angle on |1>.
    const double signed_shift = angle > 0.0 ? -std::abs(shift_mhz) : std::abs(shift_mhz);
    const double dt = std::abs(angle) / angular(std::abs(shift_mhz));
    s.add_step({qubit == 1 ? Channel::NR1Shift : Channel::NR2Shift, 0.0, dt, signed_shift});
    return s;
}

PulseSchedule schedule_rxy(int qubit, double angle, double axis_phase, double amplitude_mhz,
                           EnvelopeKind kind, double carrier_mhz, double truncation) {
    if (qubit != 1 && qubit != 2) throw ScheduleError("schedule_rxy: qubit must be 1 or 2");
    if (!(amplitude_mhz > 0.0)) throw ScheduleError("schedule_rxy: amplitude must be > 0");
    if (!std::isfinite(angle) || !std::isfinite(axis_phase)) throw ScheduleError("schedule_rxy: non-finite angle");
    PulseSchedule s;
    if (angle == 0.0) return s;
    // In the frame rotating with the qubit, V cos(w t + phi)(b + b†) acts as
    // (V/2)(cos(phi) sigma_x - sin(phi) sigma_y); the rotation axis at angle a needs phi = -a,
    // and a negative angle flips the axis.
    double phase = -axis_phase + (angle < 0.0 ? std::numbers::pi : 0.0);
    phase = std::remainder(phase, kTwoPi);
    const double v0 = angular(amplitude_mhz);
    const double a = std::abs(angle);
    Envelope env = kind == EnvelopeKind::Square
                       ? Envelope::square(0.0, a / v0)
                       : Envelope::gaussian(0.0, a / (std::sqrt(kTwoPi) * v0), truncation);
    if (kind == EnvelopeKind::Gaussian) env.t0 = truncation * env.width;
    s.add_drive({qubit, amplitude_mhz, carrier_mhz, phase, env});
    return s;
}

XYWindow plan_xy_window(const SystemParams& p, double transmon_shift_mhz, double theta) {
    p.validate();
    XYWindow w{};
    w.omega_r_mhz = 0.5 * (p.omega1_mhz + p.omega2_mhz);
    w.xi1_mhz = w.omega_r_mhz - p.omega1_mhz;
    w.xi2_mhz = w.omega_r_mhz - p.omega2_mhz;
    w.Omega_gate_mhz = p.Omega_mhz + transmon_shift_mhz;
    const double gmax = std::max(p.g1_mhz, p.g2_mhz);
    const double wmax = std::max(p.omega1_mhz, p.omega2_mhz);
    if (w.Omega_gate_mhz < wmax + 10.0 * gmax) {
        throw ScheduleError("schedule_xy: shifted transmon frequency " + std::to_string(w.Omega_gate_mhz) +
                            " MHz is closer than 10 g to the resonators");
    }
    w.Gamma_mhz = effective_gamma(p.g1_mhz, p.g2_mhz, w.omega_r_mhz, w.omega_r_mhz, w.Omega_gate_mhz);
    if (w.Gamma_mhz == 0.0) throw ScheduleError("schedule_xy: effective coupling vanishes");
    // U_XY(t) = exp(-i Gamma t (XX+YY)/8)  ->  theta = |Gamma| t / 4.
    w.tau = 4.0 * std::abs(theta) / angular(std::abs(w.Gamma_mhz));
    auto rephase = [&](double xi_mhz) {
        const double xi = angular(std::abs(xi_mhz));
        return xi == 0.0 ? 0.0 : std::fmod(xi * w.tau, kTwoPi) / xi;
    };
    w.rephase1 = rephase(w.xi1_mhz);
    w.rephase2 = rephase(w.xi2_mhz);
    return w;
}

std::array<double, 2> idle_compensation(const SystemParams& p) {
    const auto e = effective_params(p);
    return {-e.lambda1_mhz, -e.lambda2_mhz};
}

PulseSchedule schedule_xy(const SystemParams& p, double transmon_shift_mhz, double theta) {
    if (!std::isfinite(theta)) throw ScheduleError("schedule_xy: theta must be finite");
    PulseSchedule s;
    if (theta == 0.0) return s;
    const XYWindow w = plan_xy_window(p, transmon_shift_mhz, theta);
    const auto comp = idle_compensation(p);
    s.set_compensation(comp);
    const auto shifted = effective_params(p, w.omega_r_mhz, w.omega_r_mhz, w.Omega_gate_mhz);
    if (w.xi1_mhz != 0.0) s.add_step({Channel::NR1Shift, 0.0, w.tau, w.xi1_mhz});
    if (w.xi2_mhz != 0.0) s.add_step({Channel::NR2Shift, 0.0, w.tau, w.xi2_mhz});
    if (transmon_shift_mhz != 0.0) s.add_step({Channel::TransmonShift, 0.0, w.tau, transmon_shift_mhz});
    const double dc1 = -shifted.lambda1_mhz - comp[0];
    const double dc2 = -shifted.lambda2_mhz - comp[1];
    if (dc1 != 0.0) s.add_step({Channel::NR1Comp, 0.0, w.tau, dc1});
    if (dc2 != 0.0) s.add_step({Channel::NR2Comp, 0.0, w.tau, dc2});
    if (w.rephase1 > 0.0) s.add_step({Channel::NR1Shift, w.tau, w.rephase1, -w.xi1_mhz});
    if (w.rephase2 > 0.0) s.add_step({Channel::NR2Shift, w.tau, w.rephase2, -w.xi2_mhz});
    s.extend_to(w.tau + std::max(w.rephase1, w.rephase2));
    return s;
}

PulseSchedule schedule_sqrt_iswap(const SystemParams& p, double transmon_shift_mhz) {
    return schedule_xy(p, transmon_shift_mhz, std::numbers::pi / 4.0);
}

double xy_alignment(const SystemParams& p) {
    const double df = std::abs(p.omega1_mhz - p.omega2_mhz);
    return df > 0.0 ? 1.0 / df : 0.0;
}

PulseSchedule schedule_gate(const GateSpec& g, const SystemParams& p, const GateOptions& o) {
    g.validate();
    switch (g.kind) {
        case GateSpec::Kind::Rx:
            return schedule_rxy(g.qubit, g.angle, 0.0, o.drive_amplitude_mhz, o.envelope,
                                p.omega_mhz(g.qubit), o.gaussian_truncation);
        case GateSpec::Kind::Ry:
            return schedule_rxy(g.qubit, g.angle, 0.5 * std::numbers::pi, o.drive_amplitude_mhz,
                                o.envelope, p.omega_mhz(g.qubit), o.gaussian_truncation);
        case GateSpec::Kind::Rz: return schedule_rz(g.qubit, g.angle, o.rz_shift_mhz);
        case GateSpec::Kind::SqrtISwap: return schedule_sqrt_iswap(p, o.transmon_shift_mhz);
        case GateSpec::Kind::XYEvolve: return schedule_xy(p, o.transmon_shift_mhz, g.angle);
    }
    throw ScheduleError("schedule_gate: unknown gate");
}

ControlledHamiltonian render_hamiltonian(const PulseSchedule& schedule, const SystemParams& p,
                                         const ops::SubsystemLayout& layout) {
    schedule.validate();
    const OperatorSet o(layout);
    const Matrix h0 = build_full_hamiltonian(p, layout);
    const auto comp = schedule.compensation().value_or(idle_compensation(p));

    std::vector<double> edges{0.0, schedule.duration()};
    for (const auto& s : schedule.steps()) {
        edges.push_back(s.start);
        edges.push_back(s.end());
    }
    std::sort(edges.begin(), edges.end());
    std::vector<double> uniq;
    for (double e : edges) {
        if (uniq.empty() || e - uniq.back() > kEdgeTol) uniq.push_back(e);
    }

    std::vector<ControlledHamiltonian::Segment> segs;
    auto static_at = [&](double mid) {
        double d1 = comp[0], d2 = comp[1], dW = 0.0;
        for (const auto& s : schedule.steps()) {
            if (mid < s.start || mid >= s.end()) continue;
            switch (s.channel) {
                case Channel::NR1Shift:
                case Channel::NR1Comp: d1 += s.amplitude_mhz; break;
                case Channel::NR2Shift:
                case Channel::NR2Comp: d2 += s.amplitude_mhz; break;
                case Channel::TransmonShift: dW += s.amplitude_mhz; break;
            }
        }
        return Matrix(h0 + angular(d1) * o.n1 + angular(d2) * o.n2 + 0.5 * angular(dW) * o.sz);
    };
    if (uniq.size() == 1) {
        segs.push_back({0.0, 0.0, static_at(0.0)});
    } else {
        for (std::size_t k = 0; k + 1 < uniq.size(); ++k) {
            segs.push_back({uniq[k], uniq[k + 1], static_at(0.5 * (uniq[k] + uniq[k + 1]))});
        }
        // Idle configuration for any time after the schedule ends.
        const double tend = uniq.back();
        segs.push_back({tend, tend, static_at(tend + 1.0)});
    }
    std::vector<DriveTerm> drives;
    for (const auto& d : schedule.drives()) {
        drives.push_back({o.x(d.qubit), angular(d.amplitude_mhz), angular(d.carrier_mhz), d.phase, d.envelope});
    }
    return ControlledHamiltonian(std::move(segs), std::move(drives));
}

}  // namespace emsim
