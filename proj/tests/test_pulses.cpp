#include <doctest.h>

#include "emsim/analysis.hpp"
#include "emsim/compiler.hpp"
#include "emsim/errors.hpp"
#include "emsim/pulses.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace emsim;

namespace {

constexpr double kPi = std::numbers::pi;

double drive_area(const DrivePulse& d) {
    // Trapezoid quadrature of V0 * A(t) over the support.
    const int n = 20000;
    const double a = d.envelope.begin(), b = d.envelope.end(), h = (b - a) / n;
    double s = 0.5 * (d.envelope.raw(a) + d.envelope.raw(b)) * d.envelope.scale;
    for (int k = 1; k < n; ++k) s += d.envelope(a + k * h);
    return angular(d.amplitude_mhz) * s * h;
}

SystemParams lossless() {
    SystemParams p;
    p.gamma1_hz = p.gamma2_hz = 0.0;
    p.gammaTR_hz = p.gammaTRd_hz = 0.0;
    return p;
}

double dressed_energy(const Eigen::SelfAdjointEigenSolver<Matrix>& es, int idx) {
    Eigen::Index best = 0;
    es.eigenvectors().row(idx).cwiseAbs2().maxCoeff(&best);
    return es.eigenvalues()(best);
}

}  // namespace

TEST_SUITE("pulses") {

TEST_CASE("z rotation schedules") {
    CHECK(schedule_rz(1, 0.0, 1.0).empty());
    const PulseSchedule s = schedule_rz(1, kPi / 2, 1.0);
    REQUIRE(s.steps().size() == 1);
    CHECK(s.duration() == doctest::Approx(0.25));
    CHECK(s.steps()[0].amplitude_mhz == doctest::Approx(-1.0));
    CHECK(schedule_rz(2, -kPi / 2, 1.0).steps()[0].amplitude_mhz == doctest::Approx(1.0));
    CHECK(schedule_rz(2, -kPi / 2, 1.0).steps()[0].channel == Channel::NR2Shift);
    CHECK_THROWS_AS(schedule_rz(1, 1.0, 0.0), ScheduleError);
    CHECK_THROWS_AS(schedule_rz(3, 1.0, 1.0), ScheduleError);
}

TEST_CASE("transverse drives obey the area rule") {
    for (EnvelopeKind k : {EnvelopeKind::Square, EnvelopeKind::Gaussian}) {
        for (double angle : {kPi / 2, kPi, -kPi / 3}) {
            const PulseSchedule s = schedule_rxy(1, angle, 0.0, 0.3, k, 85.0);
            REQUIRE(s.drives().size() == 1);
            CHECK(drive_area(s.drives()[0]) == doctest::Approx(std::abs(angle)).epsilon(1e-6));
            CHECK(s.drives()[0].envelope.begin() == doctest::Approx(0.0));
        }
    }
    const PulseSchedule g = schedule_rxy(1, kPi, 0.0, 0.3, EnvelopeKind::Gaussian, 85.0);
    const Envelope& e = g.drives()[0].envelope;
    CHECK(e.width == doctest::Approx(kPi / (std::sqrt(kTwoPi) * angular(0.3))));
    CHECK(e.end() == doctest::Approx(6.0 * e.width));
    // Peak amplitude 0.3 MHz up to the truncation renormalization.
    CHECK(g.drives()[0].amplitude_mhz * e(e.t0) == doctest::Approx(0.3).epsilon(3e-3));
    CHECK_THROWS_AS(schedule_rxy(1, kPi, 0.0, 0.0, EnvelopeKind::Square, 85.0), ScheduleError);
    CHECK_THROWS_AS(Envelope::gaussian(1.0, 0.1, 2.0).validate(), ScheduleError);
    // Ry drives are phase-shifted copies of Rx drives.
    const GateOptions o;
    const SystemParams p;
    CHECK(std::abs(schedule_gate(GateSpec::ry(1, kPi), p, o).drives()[0].phase - schedule_gate(GateSpec::rx(1, kPi), p, o).drives()[0].phase) ==
          doctest::Approx(kPi / 2));
}

TEST_CASE("XY window timing") {
    const SystemParams p;
    const auto w = plan_xy_window(p, -7500.0, kPi / 4);
    CHECK(w.omega_r_mhz == doctest::Approx(80.0));
    CHECK(w.Gamma_mhz < 0.0);
    CHECK(w.tau == doctest::Approx(kPi / angular(std::abs(w.Gamma_mhz))));
    CHECK(w.tau == doctest::Approx(4.34).epsilon(0.01));
    const auto w0 = plan_xy_window(p, 0.0, kPi / 4);
    CHECK(w0.tau / w.tau == doctest::Approx(w.Gamma_mhz / w0.Gamma_mhz));
    CHECK(w0.tau / w.tau == doctest::Approx(4.0).epsilon(0.05));
    CHECK_THROWS_AS(plan_xy_window(p, -9900.0, kPi / 4), ScheduleError);

    const PulseSchedule s = schedule_sqrt_iswap(p, -7500.0);
    CHECK(s.duration() == doctest::Approx(w.tau + std::max(w.rephase1, w.rephase2)));
    // Phase accumulated by each detuned qubit is a multiple of 2 pi after rephasing.
    for (double xi : {w.xi1_mhz, w.xi2_mhz}) {
        const double rp = xi == w.xi1_mhz ? w.rephase1 : w.rephase2;
        const double phi = angular(xi) * w.tau - angular(xi) * rp;
        CHECK(std::abs(std::remainder(phi, kTwoPi)) < 1e-9);
    }
    CHECK(schedule_xy(p, -7500.0, 0.0).empty());
    CHECK(xy_alignment(p) == doctest::Approx(0.1));
}

TEST_CASE("sqrt(iSWAP) target follows the sign of Gamma") {
    const Matrix u = gate_unitary(GateSpec::sqrt_iswap(), -1);
    CHECK(std::abs(u(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(u(3, 3) - 1.0) < 1e-14);
    CHECK(std::abs(u(1, 1) - 1.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(u(1, 2) - kI / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(u(2, 1) - kI / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(gate_unitary(GateSpec::sqrt_iswap(), 1)(1, 2) + kI / std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("rendered Hamiltonian") {
    const SystemParams p;
    const auto layout = ops::SubsystemLayout::standard(2);
    const OperatorSet o(layout);
    const auto comp = idle_compensation(p);
    const Matrix h_idle = build_full_hamiltonian(p, layout) + angular(comp[0]) * o.n1 + angular(comp[1]) * o.n2;
    const ControlledHamiltonian empty = render_hamiltonian(PulseSchedule{}, p, layout);
    CHECK(ops::max_abs(empty.at(0.3) - h_idle) < 1e-9);

    PulseSchedule s = schedule_gate(GateSpec::rx(1, kPi / 2), p, GateOptions{});
    s.append(schedule_sqrt_iswap(p, -7500.0), xy_alignment(p));
    const ControlledHamiltonian h = render_hamiltonian(s, p, layout);
    const auto edges = h.breakpoints();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, s.duration());
    int checked = 0;
    for (int k = 0; k < 1000; ++k) {
        const double t = u(rng);
        CHECK(ops::hermiticity_error(h.at(t)) < 1e-9);
        bool near_edge = false;
        for (double e : edges) near_edge = near_edge || std::abs(t - e) < 1e-6;
        if (near_edge) continue;
        ++checked;
        CHECK(ops::max_abs(h.at(t + 1e-8) - h.at(t - 1e-8)) < 1e-3);
    }
    CHECK(checked > 900);
    // Jumps do occur at the declared edges of the XY window.
    const double t_xy = s.steps().front().start;
    CHECK(ops::max_abs(h.at(t_xy + 1e-8) - h.at(t_xy - 1e-8)) > 1.0);
    // Outside the schedule the idle configuration holds.
    CHECK(ops::max_abs(h.at(s.duration() + 1.0) - h_idle) < 1e-9);
}

TEST_CASE("compensation removes the dispersive qubit shifts") {
    const SystemParams p;
    const auto layout = ops::SubsystemLayout::standard(4);
    const ControlledHamiltonian h = render_hamiltonian(PulseSchedule{}, p, layout);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(h.at(0.0));
    const int g = layout.index({0, ops::kTransmonGround, 0});
    const double e0 = dressed_energy(es, g);
    const double w1 = dressed_energy(es, layout.index({1, ops::kTransmonGround, 0})) - e0;
    const double w2 = dressed_energy(es, layout.index({0, ops::kTransmonGround, 1})) - e0;
    CHECK(std::abs(w1 - angular(p.omega1_mhz)) < 1e-3);
    CHECK(std::abs(w2 - angular(p.omega2_mhz)) < 1e-3);
}

TEST_CASE("schedule composition and serialization") {
    const SystemParams p;
    PulseSchedule s = schedule_rz(1, kPi / 3, 1.0);
    PulseSchedule r = schedule_gate(GateSpec::ry(2, kPi / 2), p, GateOptions{});
    s.overlay(r);
    s.append(schedule_sqrt_iswap(p, -7500.0), xy_alignment(p));
    CHECK_NOTHROW(s.validate());
    for (const auto& st : s.steps()) {
        if (st.channel == Channel::TransmonShift) CHECK(std::abs(std::remainder(st.start, 0.1)) < 1e-9);
    }

    const std::string text = s.serialize();
    const PulseSchedule back = PulseSchedule::parse(text);
    CHECK(back.serialize() == text);
    CHECK(back.duration() == doctest::Approx(s.duration()));
    CHECK(back.steps().size() == s.steps().size());
    CHECK(back.drives().size() == s.drives().size());
    REQUIRE(back.compensation().has_value());

    PulseSchedule clash = schedule_rz(1, 1.0, 1.0);
    clash.add_step({Channel::NR1Shift, 0.1, 0.2, 1.0});
    CHECK_THROWS_AS(clash.validate(), ScheduleError);
    try {
        PulseSchedule::parse("duration 1\nbogus step 0 1 1 0 0\n");
        FAIL("parse accepted an unknown channel");
    } catch (const ScheduleError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("simulated gates without dissipation") {
    const SystemParams p = lossless();
    const GateOptions o;
    FidelityRun run;
    run.leakage_samples = 40;

    SUBCASE("Rz(theta) then Rz(-theta)") {
        PulseSchedule s = schedule_rz(1, 0.7, 1.0);
        s.append(schedule_rz(1, -0.7, 1.0));
        // Bare product states are not eigenstates of the coupled system, which puts a floor
        // near 1e-5 under bare-basis scores at g = 6 MHz. The floor scales as g^2.
        SystemParams weak = p;
        weak.g1_mhz = weak.g2_mhz = 0.6;
        const auto rep = gate_fidelity_experiment(weak, s, Matrix::Identity(4, 4), standard_input_states(), run);
        CHECK(rep.min > 1.0 - 1e-6);
        // At full coupling the pulse pair is indistinguishable from idling.
        for (const auto& in : standard_input_states()) {
            CAPTURE(in.label);
            const auto x = run_sequence(p, s, in.psi, in.psi, run);
            const auto y = run_sequence(p, PulseSchedule::idle(s.duration()), in.psi, in.psi, run);
            CHECK(std::sqrt((x.rho * y.rho).trace().real()) > 1.0 - 1e-5);
        }
    }
    SUBCASE("Rz(2 pi) is the identity up to a global phase") {
        const auto rep = gate_fidelity_experiment(p, schedule_rz(2, kTwoPi, 1.0), Matrix::Identity(4, 4),
                                                  standard_input_states(), run);
        CHECK(rep.min > 1.0 - 1e-4);
    }
    SUBCASE("sqrt(iSWAP) truth table, leakage and transmon virtuality") {
        const auto rep = gate_fidelity_experiment(p, schedule_sqrt_iswap(p, o.transmon_shift_mhz),
                                                  gate_unitary(GateSpec::sqrt_iswap(), -1),
                                                  standard_input_states(), run);
        CHECK(rep.mean > 0.999);
        // Fock n >= 2 plus transmon excitation.
        CHECK(rep.max_leakage < 1e-3);
    }
    SUBCASE("sqrt(iSWAP) twice is iSWAP") {
        PulseSchedule s = schedule_sqrt_iswap(p, o.transmon_shift_mhz);
        s.append(schedule_sqrt_iswap(p, o.transmon_shift_mhz), xy_alignment(p));
        const Matrix u = gate_unitary(GateSpec::sqrt_iswap(), -1);
        const auto rep = gate_fidelity_experiment(p, s, u * u, standard_input_states(), run);
        CHECK(rep.min > 1.0 - 1e-3);
    }
    SUBCASE("Rx(pi) stays in the computational subspace") {
        const auto rep = gate_fidelity_experiment(p, schedule_gate(GateSpec::rx(1, kPi), p, o),
                                                  gate_unitary(GateSpec::rx(1, kPi), -1), standard_input_states(), run);
        CHECK(rep.mean > 0.999);
        CHECK(rep.max_leakage < 1e-3);
    }
}

TEST_CASE("Gaussian envelope beats a square pulse at small nonlinearity") {
    SystemParams p = lossless();
    p.nl1 = p.nl2 = NonlinearityModel::kerr(1.0);  // delta = 2 MHz
    const Matrix target = gate_unitary(GateSpec::rx(1, kPi), -1);
    GateOptions gauss, square;
    square.envelope = EnvelopeKind::Square;
    const auto fg = gate_fidelity_experiment(p, schedule_gate(GateSpec::rx(1, kPi), p, gauss), target, standard_input_states());
    const auto fs = gate_fidelity_experiment(p, schedule_gate(GateSpec::rx(1, kPi), p, square), target, standard_input_states());
    CHECK(fg.mean > fs.mean);
}

}  // TEST_SUITE
