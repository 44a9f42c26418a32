#include "emsim/compiler.hpp"

#include "emsim/errors.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>

namespace emsim {

namespace {

using ops::Axis;
constexpr double kPi = std::numbers::pi;

bool spatial(Axis a) { return a == Axis::X || a == Axis::Y || a == Axis::Z; }

GateSpec rot(Axis a, int q, double angle) {
    switch (a) {
        case Axis::X: return GateSpec::rx(q, angle);
        case Axis::Y: return GateSpec::ry(q, angle);
        case Axis::Z: return GateSpec::rz(q, angle);
        default: throw CompileError("rotation axis must be x, y or z");
    }
}

// Single-qubit rotation C with C sigma_x C† = sigma_a. Empty for a = x.
std::optional<GateSpec> x_to(Axis a, int q) {
    switch (a) {
        case Axis::X: return std::nullopt;
        case Axis::Y: return GateSpec::rz(q, 0.5 * kPi);
        case Axis::Z: return GateSpec::ry(q, -0.5 * kPi);
        default: throw CompileError("compile_two_body: unsupported axis");
    }
}

GateSpec inverse(const GateSpec& g) {
    GateSpec r = g;
    r.angle = -g.angle;
    return r;
}

void push(GateSequence& seq, const GateSpec& g, bool parallel = false) {
    if (g.angle == 0.0) return;
    seq.push_back({g, parallel && !seq.empty()});
}

// exp(-i J (XX + YY) t) from the native gate, conjugating by Rz^1(pi) when the sign of J
// disagrees with the device.
void append_xy(GateSequence& seq, double j_ang, double t, int s) {
    const double theta = 2.0 * std::abs(j_ang) * t;
    if (theta == 0.0) return;
    if ((j_ang > 0) == (s > 0)) {
        push(seq, GateSpec::xy(theta));
    } else {
        push(seq, GateSpec::rz(1, -kPi));
        push(seq, GateSpec::xy(theta));
        push(seq, GateSpec::rz(1, kPi));
    }
}

// exp(-i J (XX - YY) t): conjugation by sigma_x^1 maps XX+YY to XX-YY, sigma_y^1 to -(XX-YY).
// Both sides use R(+pi), so the product carries a global factor -1; a repeated drive pulse
// echoes away its own Stark-induced axis tilt, which R(-pi) R(pi) would double instead.
void append_xy_minus(GateSequence& seq, double j_ang, double t, int s) {
    const double theta = 2.0 * std::abs(j_ang) * t;
    if (theta == 0.0) return;
    const Axis a = (j_ang > 0) == (s > 0) ? Axis::X : Axis::Y;
    push(seq, rot(a, 1, kPi));
    push(seq, GateSpec::xy(theta));
    push(seq, rot(a, 1, kPi));
}

void append_conjugation(GateSequence& seq, Axis a, Axis b, bool forward) {
    auto c1 = x_to(a, 1);
    auto c2 = x_to(b, 2);
    bool first = true;
    for (auto& c : {c1, c2}) {
        if (!c) continue;
        push(seq, forward ? *c : inverse(*c), !first);
        first = false;
    }
}

}  // namespace

Matrix pauli2(Axis a, int qubit) {
    if (qubit == 1) return ops::kron(ops::pauli(a), ops::identity(2));
    if (qubit == 2) return ops::kron(ops::identity(2), ops::pauli(a));
    throw CompileError("qubit must be 1 or 2");
}

Matrix rotation(Axis a, int qubit, double angle) {
    return std::cos(0.5 * angle) * ops::identity(4) - kI * std::sin(0.5 * angle) * pauli2(a, qubit);
}

Matrix two_body_pauli(TwoBodyTerm::Form form, Axis a, Axis b) {
    if (!spatial(a) || !spatial(b)) throw CompileError("two-body axes must be x, y or z");
    switch (form) {
        case TwoBodyTerm::Form::Product: return pauli2(a, 1) * pauli2(b, 2);
        case TwoBodyTerm::Form::Exchange:
            if (a == b) throw CompileError("exchange form needs two distinct axes");
            return pauli2(a, 1) * pauli2(a, 2) + pauli2(b, 1) * pauli2(b, 2);
        case TwoBodyTerm::Form::XYMinus:
            return pauli2(Axis::X, 1) * pauli2(Axis::X, 2) - pauli2(Axis::Y, 1) * pauli2(Axis::Y, 2);
    }
    throw CompileError("unknown two-body form");
}

Matrix gate_unitary(const GateSpec& g, int s) {
    g.validate();
    switch (g.kind) {
        case GateSpec::Kind::Rx: return rotation(Axis::X, g.qubit, g.angle);
        case GateSpec::Kind::Ry: return rotation(Axis::Y, g.qubit, g.angle);
        case GateSpec::Kind::Rz: return rotation(Axis::Z, g.qubit, g.angle);
        case GateSpec::Kind::SqrtISwap:
        case GateSpec::Kind::XYEvolve: {
            const double theta = g.kind == GateSpec::Kind::SqrtISwap ? 0.25 * kPi : g.angle;
            // (XX + YY)/2 swaps |01> and |10> and annihilates |00>, |11>.
            const double phi = (s > 0 ? 1.0 : -1.0) * theta;
            Matrix u = ops::identity(4);
            u(1, 1) = u(2, 2) = std::cos(phi);
            u(1, 2) = u(2, 1) = -kI * std::sin(phi);
            return u;
        }
    }
    throw CompileError("gate_unitary: unknown gate");
}

Matrix sequence_unitary(const GateSequence& seq, int s) {
    Matrix u = ops::identity(4);
    for (const auto& r : seq) u = gate_unitary(r.gate, s) * u;
    return u;
}

GateSequence compile_two_body(TwoBodyTerm::Form form, Axis a, Axis b, double j_mhz, double t,
                              int s) {
    if (!std::isfinite(j_mhz) || !std::isfinite(t)) throw CompileError("compile_two_body: non-finite input");
    if (!spatial(a) || !spatial(b)) throw CompileError("compile_two_body: unsupported axis pair");
    if (s != 1 && s != -1) throw CompileError("compile_two_body: native sign must be +-1");
    GateSequence seq;
    const double j = angular(j_mhz);
    if (j == 0.0 || t == 0.0) return seq;
    if (t < 0.0) {
        j_mhz = -j_mhz;
        t = -t;
    }
    const double jj = angular(j_mhz);
    switch (form) {
        case TwoBodyTerm::Form::XYMinus: append_xy_minus(seq, jj, t, s); break;
        case TwoBodyTerm::Form::Product:
            append_conjugation(seq, a, b, false);
            append_xy_minus(seq, 0.5 * jj, t, s);
            append_xy(seq, 0.5 * jj, t, s);
            append_conjugation(seq, a, b, true);
            break;
        case TwoBodyTerm::Form::Exchange: {
            if (a == b) throw CompileError("compile_two_body: exchange needs distinct axes");
            Axis lo = std::min(a, b), hi = std::max(a, b);
            if (lo == Axis::X && hi == Axis::Y) {
                append_xy(seq, jj, t, s);
            } else {
                // R(pi/2) on both qubits maps XX+YY to XX+ZZ (about x) or YY+ZZ (about y).
                const Axis c = lo == Axis::X ? Axis::X : Axis::Y;
                push(seq, rot(c, 1, -0.5 * kPi));
                push(seq, rot(c, 2, -0.5 * kPi), true);
                append_xy(seq, jj, t, s);
                push(seq, rot(c, 1, 0.5 * kPi));
                push(seq, rot(c, 2, 0.5 * kPi), true);
            }
            break;
        }
    }
    return seq;
}

void SpinHamiltonianSpec::validate() const {
    for (const auto& o : one_body) {
        if (o.qubit != 1 && o.qubit != 2) throw CompileError("one-body term: qubit must be 1 or 2");
        if (!spatial(o.axis)) throw CompileError("one-body term: axis must be x, y or z");
        if (!std::isfinite(o.coeff_mhz)) throw CompileError("one-body term: non-finite coefficient");
    }
    for (const auto& t : two_body) {
        if (!spatial(t.a) || !spatial(t.b)) throw CompileError("two-body term: axes must be x, y or z");
        if (t.form == TwoBodyTerm::Form::Exchange && t.a == t.b) {
            throw CompileError("two-body term: exchange needs distinct axes");
        }
        if (!std::isfinite(t.coeff_mhz)) throw CompileError("two-body term: non-finite coefficient");
    }
}

std::vector<Matrix> SpinHamiltonianSpec::term_matrices() const {
    validate();
    std::vector<Matrix> out;
    // s_a s_b = sigma_a sigma_b / 4
    for (const auto& t : two_body) out.push_back(angular(t.coeff_mhz) * 0.25 * two_body_pauli(t.form, t.a, t.b));
    for (const auto& o : one_body) out.push_back(angular(o.coeff_mhz) * 0.5 * pauli2(o.axis, o.qubit));
    return out;
}

Matrix SpinHamiltonianSpec::matrix() const {
    Matrix h = Matrix::Zero(4, 4);
    for (const auto& m : term_matrices()) h += m;
    return h;
}

SpinHamiltonianSpec SpinHamiltonianSpec::tim(double lambda_mhz, double b_mhz) {
    SpinHamiltonianSpec s;
    s.two_body.push_back({TwoBodyTerm::Form::Product, Axis::X, Axis::X, lambda_mhz});
    s.one_body.push_back({1, Axis::Z, b_mhz});
    s.one_body.push_back({2, Axis::Z, b_mhz});
    return s;
}

SpinHamiltonianSpec map_spin1(double d, double e) {
    SpinHamiltonianSpec s;
    if (d != 0.0) s.two_body.push_back({TwoBodyTerm::Form::Product, Axis::Z, Axis::Z, 2.0 * d});
    if (e != 0.0) s.two_body.push_back({TwoBodyTerm::Form::XYMinus, Axis::X, Axis::Y, 2.0 * e});
    return s;
}

Matrix spin1_hamiltonian(double d, double e) {
    // Basis m = +1, 0, -1.
    const double r = 1.0 / std::sqrt(2.0);
    Matrix sx = Matrix::Zero(3, 3), sy = Matrix::Zero(3, 3), sz = Matrix::Zero(3, 3);
    sx(0, 1) = sx(1, 0) = sx(1, 2) = sx(2, 1) = r;
    sy(0, 1) = -kI * r;
    sy(1, 0) = kI * r;
    sy(1, 2) = -kI * r;
    sy(2, 1) = kI * r;
    sz(0, 0) = 1.0;
    sz(2, 2) = -1.0;
    return angular(d) * sz * sz + angular(e) * (sx * sx - sy * sy);
}

namespace {

int rotation_windows(const GateSequence& seq, bool two_qubit) {
    int n = 0;
    for (const auto& r : seq) {
        const bool tq = r.gate.kind == GateSpec::Kind::XYEvolve || r.gate.kind == GateSpec::Kind::SqrtISwap;
        if (tq == two_qubit) ++n;
    }
    return n;
}

}  // namespace

int TrotterPlan::two_qubit_count() const { return rotation_windows(gates, true); }
int TrotterPlan::single_qubit_count() const { return rotation_windows(gates, false); }

std::string TrotterPlan::serialize() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "trotter " << n_steps << " " << t << " " << native_sign << "\n";
    std::size_t step = 0;
    for (std::size_t i = 0; i < gates.size(); ++i) {
        while (step < step_end.size() && step_end[step] == i) {
            os << "step\n";
            ++step;
        }
        os << (gates[i].parallel ? "| " : "") << to_string(gates[i].gate) << "\n";
    }
    return os.str();
}

TrotterPlan trotterize(const SpinHamiltonianSpec& spec, double t, int n, int s) {
    spec.validate();
    if (n < 1) throw CompileError("trotterize: N must be >= 1");
    if (!std::isfinite(t)) throw CompileError("trotterize: t must be finite");
    TrotterPlan plan;
    plan.n_steps = n;
    plan.t = t;
    plan.tau = t / n;
    plan.native_sign = s;
    GateSequence step;
    for (const auto& tb : spec.two_body) {
        // coeff * s_a s_b = (coeff / 4) * Pauli form
        auto part = compile_two_body(tb.form, tb.a, tb.b, 0.25 * tb.coeff_mhz, plan.tau, s);
        step.insert(step.end(), part.begin(), part.end());
    }
    // Consecutive one-body rotations on different qubits share a window.
    int open_qubit = 0;  // qubit of a window that can still take a parallel rotation
    for (const auto& o : spec.one_body) {
        const std::size_t before = step.size();
        const bool parallel = open_qubit != 0 && open_qubit != o.qubit;
        // coeff * s_a = (coeff / 2) sigma_a  ->  R_a(coeff tau)
        push(step, rot(o.axis, o.qubit, angular(o.coeff_mhz) * plan.tau), parallel);
        if (step.size() > before) open_qubit = parallel ? 0 : o.qubit;
    }
    const Matrix u_step = sequence_unitary(step, s);
    Matrix u = ops::identity(4);
    for (int k = 0; k < n; ++k) {
        plan.gates.insert(plan.gates.end(), step.begin(), step.end());
        plan.step_end.push_back(plan.gates.size());
        u = u_step * u;
        plan.prefix_reference.push_back(u);
    }
    return plan;
}

Matrix trotter_exact(const SpinHamiltonianSpec& spec, double t, int n) {
    if (n < 1) throw CompileError("trotter_exact: N must be >= 1");
    const double tau = t / n;
    Matrix step = ops::identity(4);
    for (const auto& h : spec.term_matrices()) step = ops::matrix_exponential(Matrix(-kI * tau * h)) * step;
    Matrix u = ops::identity(4);
    for (int k = 0; k < n; ++k) u = step * u;
    return u;
}

Matrix reference_unitary(const TrotterPlan& plan) { return sequence_unitary(plan.gates, plan.native_sign); }

PulseSchedule schedule_sequence(const GateSequence& seq, const SystemParams& params, const GateOptions& opts,
                                std::vector<double>* gate_ends) {
    PulseSchedule out;
    if (gate_ends) gate_ends->clear();
    const double align = xy_alignment(params);
    double window_start = 0.0;
    for (const auto& r : seq) {
        PulseSchedule g = schedule_gate(r.gate, params, opts);
        const bool tq = r.gate.kind == GateSpec::Kind::XYEvolve || r.gate.kind == GateSpec::Kind::SqrtISwap;
        if (r.parallel && !tq) {
            PulseSchedule pad = PulseSchedule::idle(window_start);
            pad.append(g);
            out.overlay(pad);
            if (gate_ends) gate_ends->push_back(out.duration());
            continue;
        }
        window_start = out.duration();
        if (tq) {
            out.append(g, align);
            window_start = out.duration() - g.duration();
        } else {
            out.append(g);
        }
        if (gate_ends) gate_ends->push_back(out.duration());
    }
    return out;
}

}  // namespace emsim
