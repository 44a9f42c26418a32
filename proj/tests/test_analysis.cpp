#include <doctest.h>

#include "emsim/analysis.hpp"
#include "emsim/compiler.hpp"
#include "emsim/errors.hpp"

#include <cmath>
#include <numbers>

using namespace emsim;

TEST_SUITE("analysis") {

TEST_CASE("state fidelity") {
    Vector a = Vector::Zero(4), b = Vector::Zero(4);
    a(0) = 1.0;
    b(1) = 1.0;
    CHECK(fidelity(a * a.adjoint(), a) == doctest::Approx(1.0));
    CHECK(fidelity(a * a.adjoint(), b) == doctest::Approx(0.0));
    CHECK(fidelity(Matrix::Identity(4, 4) / 4.0, a) == doctest::Approx(0.5));
    CHECK_THROWS_AS(fidelity(a * a.adjoint(), 2.0 * a), InvalidInput);
    CHECK_THROWS_AS(fidelity(Matrix::Identity(3, 3) / 3.0, a), DimensionError);
}

TEST_CASE("standard input states") {
    const auto in = standard_input_states();
    REQUIRE(in.size() == 9);
    for (const auto& s : in) CHECK(s.psi.norm() == doctest::Approx(1.0));
    CHECK(in[0].label == "00");
    CHECK(in.back().label == "bell");
    CHECK(std::abs(in.back().psi(3)) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("computational embedding and observables") {
    const auto layout = ops::SubsystemLayout::standard(4);
    const auto idx = computational_indices(layout);
    REQUIRE(idx.size() == 4);
    CHECK(idx[0] == layout.index({0, ops::kTransmonGround, 0}));
    CHECK(idx[1] == layout.index({0, ops::kTransmonGround, 1}));
    CHECK(idx[2] == layout.index({1, ops::kTransmonGround, 0}));
    CHECK(idx[3] == layout.index({1, ops::kTransmonGround, 1}));

    Vector pp = Vector::Constant(4, 0.5);
    const Vector e = embed_computational(pp, layout);
    CHECK(e.norm() == doctest::Approx(1.0));
    const auto o = spin_observables(e * e.adjoint(), layout);
    CHECK(o.sx == doctest::Approx(1.0));
    CHECK(o.sz == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(spin_observables(Matrix(Vector::Unit(4, 0) * Vector::Unit(4, 0).adjoint())).sz == doctest::Approx(1.0));
    CHECK(spin_observables(Matrix(Vector::Unit(4, 3) * Vector::Unit(4, 3).adjoint())).sz == doctest::Approx(-1.0));

    // 20% leaked into n1 = 2 and 10% into the transmon excited state.
    Matrix rho = Matrix::Zero(50, 50);
    rho(idx[1], idx[1]) = 0.7;
    rho(layout.index({2, ops::kTransmonGround, 0}), layout.index({2, ops::kTransmonGround, 0})) = 0.2;
    rho(layout.index({0, ops::kTransmonExcited, 0}), layout.index({0, ops::kTransmonExcited, 0})) = 0.1;
    CHECK(leakage(rho, layout) == doctest::Approx(0.3));
    const auto p = spin_observables(rho, layout);
    CHECK(p.discarded == doctest::Approx(0.3));
    CHECK(p.populations[1] == doctest::Approx(1.0));
    CHECK(p.sz == doctest::Approx(0.0));
    CHECK_THROWS_AS(spin_observables(rho), DimensionError);
}

TEST_CASE("rotating frame") {
    SystemParams p;
    const auto layout = ops::SubsystemLayout::standard(2);
    const Vector e = embed_computational(Vector::Constant(4, 0.5), layout);
    const Matrix rho = e * e.adjoint();
    CHECK(ops::max_abs(to_rotating_frame(rho, p, layout, 0.0) - rho) < 1e-15);
    // Free evolution under the reference Hamiltonian is undone exactly.
    const OperatorSet o(layout);
    const Matrix href = angular(p.omega1_mhz) * o.n1 + angular(p.omega2_mhz) * o.n2 + 0.5 * angular(p.Omega_mhz) * o.sz;
    const Matrix u = ops::matrix_exponential(-kI * href * 0.37);
    CHECK(ops::max_abs(to_rotating_frame(u * rho * u.adjoint(), p, layout, 0.37) - rho) < 1e-9);
}

TEST_CASE("system dissipators") {
    SystemParams p;
    p.gamma1d_hz = 1e3;
    const auto layout = ops::SubsystemLayout::standard(2);
    const LindbladSpec d = system_dissipators(p, layout);
    // nr decay x2, nr1 dephasing, transmon decay and dephasing; zero rates are omitted.
    REQUIRE(d.terms.size() == 5);
    CHECK(d.terms[0].rate == doctest::Approx(angular_rate_hz(50.0)));
    CHECK(d.terms[2].label == "nr1_dephasing");
    CHECK(d.terms[2].rate == doctest::Approx(angular_rate_hz(1e3)));
    const LindbladSpec t = system_dissipators(p, layout, ThermalBathSpec{50.0, 0.1});
    CHECK(t.terms.size() == 7);
    p.gamma1_hz = -1.0;
    CHECK_THROWS_AS(system_dissipators(p, layout), InvalidInput);
}

TEST_CASE("fidelity experiment bookkeeping") {
    SystemParams p;
    const auto rep = gate_fidelity_experiment(p, schedule_rz(1, 0.5, 1.0), gate_unitary(GateSpec::rz(1, 0.5), -1),
                                              standard_input_states());
    REQUIRE(rep.fidelities.size() == 9);
    double mean = 0.0, lo = 1.0;
    for (double f : rep.fidelities) {
        mean += f / 9.0;
        lo = std::min(lo, f);
    }
    CHECK(rep.mean == doctest::Approx(mean));
    CHECK(rep.min == doctest::Approx(lo));
    CHECK(rep.mean > 0.9999);
    CHECK(rep.duration == doctest::Approx(0.5 / angular(1.0)));
    CHECK_THROWS_AS(run_sequence(p, PulseSchedule::idle(0.1), Vector::Zero(3), Vector::Zero(4)), DimensionError);
}

}  // TEST_SUITE
