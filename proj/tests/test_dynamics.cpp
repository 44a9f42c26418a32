#include "emsim/analysis.hpp"
#include "emsim/dynamics.hpp"
#include "emsim/errors.hpp"
#include "emsim/pulses.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace emsim;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> grid(double t_end, int n) {
    std::vector<double> t(n + 1);
    for (int k = 0; k <= n; ++k) t[k] = t_end * k / n;
    return t;
}

Matrix sigma_minus() {
    Matrix m = Matrix::Zero(2, 2);
    m(ops::kTransmonGround, ops::kTransmonExcited) = 1.0;
    return m;
}

// Column-stacked Liouvillian: vec(A rho B) = (B^T kron A) vec(rho).
Matrix liouvillian(const Matrix& h, const LindbladSpec& d) {
    const int n = static_cast<int>(h.rows());
    const Matrix id = ops::identity(n);
    Matrix l = -kI * (ops::kron(id, h) - ops::kron(h.transpose(), id));
    for (const auto& t : d.terms) {
        const Matrix ldl = t.op.adjoint() * t.op;
        l += t.rate * (ops::kron(t.op.conjugate(), t.op) - 0.5 * ops::kron(id, ldl) -
                       0.5 * ops::kron(ldl.transpose(), id));
    }
    return l;
}

Matrix dense_evolve(const Matrix& h, const LindbladSpec& d, const Matrix& rho0, double t) {
    const int n = static_cast<int>(h.rows());
    const Vector v = ops::matrix_exponential(liouvillian(h, d) * t) * rho0.reshaped();
    return v.reshaped(n, n);
}

IntegratorConfig frame_cfg(Frame f) {
    IntegratorConfig c;
    c.frame = f;
    // RK4 phase error at the default 40 samples per period is ~1e-5 over these runs.
    if (f == Frame::Lab) c.samples_per_period = 100.0;
    return c;
}

const Frame kFrames[] = {Frame::Lab, Frame::Interaction, Frame::Dressed};

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("density matrix validation") {
    const auto layout = ops::SubsystemLayout::rabi(1);
    Vector psi = Vector::Zero(4);
    psi(0) = 1.0;
    CHECK_NOTHROW(DensityMatrix::pure(psi, layout));
    CHECK_THROWS_AS(DensityMatrix::pure(2.0 * psi, layout), InvalidInput);
    CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(4, 4), layout), InvalidInput);
    CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(3, 3) / 3.0, layout), DimensionError);
    const auto c = check_density(Matrix::Identity(4, 4) / 4.0);
    CHECK(c.trace_error < 1e-15);
    CHECK(c.min_eigenvalue == doctest::Approx(0.25));
}

TEST_CASE("amplitude decay matches exp(-gamma t) in every frame") {
    const double gamma = 0.3;
    const Matrix h = 0.5 * angular(5.0) * ops::pauli(ops::Axis::Z);
    LindbladSpec d;
    d.add(sigma_minus(), gamma, "decay");
    Matrix rho0 = Matrix::Zero(2, 2);
    rho0(ops::kTransmonExcited, ops::kTransmonExcited) = 1.0;
    const auto t = grid(10.0, 20);
    for (Frame f : kFrames) {
        CAPTURE(to_string(f));
        const auto tr = lindblad_evolve(ControlledHamiltonian::constant(h, 10.0), d, rho0, t, frame_cfg(f));
        REQUIRE(tr.states.size() == t.size());
        for (std::size_t k = 0; k < t.size(); ++k) {
            CHECK(std::abs(tr.states[k](0, 0).real() - std::exp(-gamma * t[k])) < 1e-6);
        }
    }
}

TEST_CASE("sigma_z dephasing decays coherences as exp(-2 gamma t)") {
    const double gamma = 0.2;
    const Matrix h = 0.5 * angular(3.0) * ops::pauli(ops::Axis::Z);
    LindbladSpec d;
    d.add(ops::pauli(ops::Axis::Z), gamma, "dephasing");
    const Matrix rho0 = Matrix::Constant(2, 2, 0.5);
    const auto t = grid(8.0, 16);
    for (Frame f : kFrames) {
        CAPTURE(to_string(f));
        const auto tr = lindblad_evolve(ControlledHamiltonian::constant(h, 8.0), d, rho0, t, frame_cfg(f));
        for (std::size_t k = 0; k < t.size(); ++k) {
            CHECK(std::abs(std::abs(tr.states[k](0, 1)) - 0.5 * std::exp(-2.0 * gamma * t[k])) < 1e-6);
            CHECK(std::abs(tr.states[k](0, 0).real() - 0.5) < 1e-9);
        }
        const Matrix ref = dense_evolve(h, d, rho0, t.back());
        CHECK(ops::max_abs(tr.states.back() - ref) < 1e-6);
    }
}

TEST_CASE("anharmonic mode with decay and dephasing against the dense Liouvillian") {
    const int dim = 4;
    const Matrix b = ops::annihilation_operator(dim);
    const Matrix n = ops::number_operator(dim);
    const Matrix h = angular(3.0) * n + angular(0.5) * (n * n - n);
    LindbladSpec d;
    d.add(b, 0.2, "decay");
    d.add(n, 0.1, "dephasing");
    Vector psi = Vector::Zero(dim);
    psi(1) = 0.6;
    psi(2) = cplx(0.0, 0.8);
    const Matrix rho0 = psi * psi.adjoint();
    const auto t = grid(6.0, 6);
    for (Frame f : kFrames) {
        CAPTURE(to_string(f));
        const auto tr = lindblad_evolve(ControlledHamiltonian::constant(h, 6.0), d, rho0, t, frame_cfg(f));
        for (std::size_t k = 0; k < t.size(); ++k) {
            CHECK(ops::max_abs(tr.states[k] - dense_evolve(h, d, rho0, t[k])) < 1e-6);
        }
    }
}

TEST_CASE("driven gate: frames agree and invariants hold along the trajectory") {
    SystemParams p;
    p.Omega_mhz = 400.0;
    p.gammaTR_hz = 1e4;
    p.gammaTRd_hz = 1e4;
    p.gamma1d_hz = 1e3;
    GateOptions o;
    o.drive_amplitude_mhz = 1.0;
    const auto layout = ops::SubsystemLayout::standard(2);
    const PulseSchedule s = schedule_gate(GateSpec::rx(1, kPi / 2), p, o);
    const ControlledHamiltonian h = render_hamiltonian(s, p, layout);
    const LindbladSpec d = system_dissipators(p, layout);
    const Vector psi = embed_computational(Vector::Unit(4, 0), layout);
    const Matrix rho0 = psi * psi.adjoint();
    const std::vector<double> t{0.0, 0.5 * s.duration(), s.duration()};

    std::vector<Trajectory> tr;
    for (Frame f : kFrames) tr.push_back(lindblad_evolve(h, d, rho0, t, frame_cfg(f)));
    for (const auto& x : tr) {
        for (const auto& rho : x.states) {
            const auto c = check_density(rho);
            CHECK(c.trace_error < 1e-9);
            CHECK(c.hermiticity_error < 1e-12);
            CHECK(c.min_eigenvalue > -1e-9);
        }
    }
    // Same equation, different RK4 discretization (40 samples per period each).
    CHECK(ops::max_abs(tr[0].states.back() - tr[1].states.back()) < 1e-4);
    // The dressed frame drops counter-rotating drive terms at ~2 omega.
    CHECK(ops::max_abs(tr[0].states.back() - tr[2].states.back()) < 2e-3);
    // And the qubit really rotated.
    const auto obs = spin_observables(to_rotating_frame(tr[2].states.back(), p, layout, s.duration()), layout);
    CHECK(obs.populations[2] == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("integrator config validation") {
    IntegratorConfig c;
    CHECK_NOTHROW(c.validate());
    c.samples_per_period = 2.0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c = {};
    c.step = -1.0;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    CHECK(default_step(10.0) == doctest::Approx(1.0 / 400.0));

    const Matrix h = ops::pauli(ops::Axis::Z);
    const Matrix rho0 = Matrix::Identity(2, 2) / 2.0;
    CHECK_THROWS_AS(lindblad_evolve(ControlledHamiltonian::constant(h, 1.0), {}, rho0, {1.0, 0.5}, {}), InvalidInput);
    CHECK_THROWS_AS(lindblad_evolve(ControlledHamiltonian::constant(h, 1.0), {}, Matrix::Identity(3, 3) / 3.0, {0.0}, {}),
                    DimensionError);
}

TEST_CASE("thermal bath occupation and steady state") {
    CHECK(ThermalBathSpec::occupation(100.0, 100.0 / std::log(11.0)) == doctest::Approx(0.1));
    CHECK_THROWS_AS(ThermalBathSpec::occupation(-1.0, 1.0), InvalidInput);
    CHECK_THROWS_AS((ThermalBathSpec{-1.0, 0.1}.validate()), InvalidInput);

    const int dim = 6;
    const Matrix b = ops::annihilation_operator(dim);
    const ThermalBathSpec bath{1e6, 0.1};
    const LindbladSpec d = thermal_dissipators(bath, b);
    REQUIRE(d.terms.size() == 2);
    CHECK(d.terms[0].rate == doctest::Approx(angular_rate_hz(1e6) * 1.1));
    CHECK(d.terms[1].rate == doctest::Approx(angular_rate_hz(1e6) * 0.1));

    const Matrix h = angular(2.0) * ops::number_operator(dim);
    Matrix rho0 = Matrix::Zero(dim, dim);
    rho0(0, 0) = 1.0;
    const auto tr = lindblad_evolve(ControlledHamiltonian::constant(h, 8.0), d, rho0, {0.0, 8.0}, {});
    const double n_mean = (tr.states.back() * ops::number_operator(dim)).trace().real();
    // Truncated geometric distribution; the cutoff correction is ~ nbar^6.
    CHECK(n_mean == doctest::Approx(0.1).epsilon(1e-4));
}

TEST_CASE("Bloch-Redfield T1 and T2 of a weakly anharmonic mode") {
    const int dim = 3;
    const Matrix b = ops::annihilation_operator(dim);
    const Matrix n = ops::number_operator(dim);
    const Matrix h = angular(85.0) * n + angular(3.0) * (n * n - n);
    const double gamma = 0.05, gamma_d = 0.2;
    std::vector<NoiseCoupling> c{{b + b.adjoint(), 0.0, gamma, "x"}, {n, gamma_d, 0.0, "n"}};

    Vector psi = Vector::Zero(dim);
    psi(0) = psi(1) = 1.0 / std::sqrt(2.0);
    const auto t = grid(200.0, 400);
    const auto tr = bloch_redfield_evolve(h, c, psi * psi.adjoint(), t);
    std::vector<double> p1, coh;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const Matrix& r = tr.states[k];
        CHECK(r(1, 1).real() == doctest::Approx(0.5 * std::exp(-gamma * t[k])).epsilon(1e-9));
        CHECK(std::abs(r(0, 1)) == doctest::Approx(0.5 * std::exp(-0.5 * (gamma + gamma_d) * t[k])).epsilon(1e-9));
        CHECK(r(2, 2).real() < 1e-12);
        p1.push_back(r(1, 1).real());
        coh.push_back(std::abs(r(0, 1)));
    }
    CHECK(extract_decay_time(t, p1) == doctest::Approx(1.0 / gamma).epsilon(0.01));
    CHECK_THROWS_AS(bloch_redfield_evolve(h, {{b, 0.0, 1.0, "bad"}}, psi * psi.adjoint(), t), InvalidInput);
}

TEST_CASE("decay-time extraction") {
    std::vector<double> t, v;
    for (int k = 0; k <= 400; ++k) {
        t.push_back(0.1 * k);
        v.push_back(0.3 + 0.7 * std::exp(-t.back() / 2.0));
    }
    CHECK(extract_decay_time(t, v) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK_THROWS_AS(extract_decay_time({0, 1, 2}, {1, 0.5, 0.25}), InvalidInput);
    std::vector<double> flat(t.size(), 1.0);
    CHECK_THROWS_AS(extract_decay_time(t, flat), FitError);
}

}  // TEST_SUITE
