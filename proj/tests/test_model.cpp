#include <doctest.h>

#include "emsim/errors.hpp"
#include "emsim/model.hpp"

#include <cmath>

using namespace emsim;

namespace {

// Eigenvalue (MHz) of the eigenvector with the largest overlap on basis state `idx`.
double dressed_energy_mhz(const Matrix& h, int idx) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    int best = 0;
    double ov = -1.0;
    for (int k = 0; k < h.rows(); ++k) {
        const double o = std::norm(es.eigenvectors()(idx, k));
        if (o > ov) {
            ov = o;
            best = k;
        }
    }
    return es.eigenvalues()(best) / kTwoPi;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("nonlinearity models") {
    CHECK(nonlinear_shift(NonlinearityModel::kerr(3.0), 85.0) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK_THROWS_AS(nonlinear_shift(NonlinearityModel::kerr(3.0), 85.0, 2), InvalidInput);
    CHECK_THROWS(NonlinearityModel::kerr(-1.0).validate());

    // First-order perturbation: <n|x^4|n> = 6n^2 + 6n + 3, so delta = 12 U.
    const double u = 1e-4 * 85.0;
    CHECK(nonlinear_shift(NonlinearityModel::quartic(u), 85.0) == doctest::Approx(12.0 * u).epsilon(2e-3));

    // Quartic shift exceeds the diagonal-Kerr shift at equal strength.
    for (double r : {0.001, 0.01, 0.1}) {
        const double s = r * 85.0;
        CHECK(nonlinear_shift(NonlinearityModel::quartic(s), 85.0) > nonlinear_shift(NonlinearityModel::kerr(s), 85.0));
    }
}

TEST_CASE("Kerr term adds beta n (n - 1)") {
    const Matrix h = NonlinearityModel::kerr(2.5).hamiltonian(5);
    for (int n = 0; n < 5; ++n) CHECK(h(n, n).real() == doctest::Approx(kTwoPi * 2.5 * n * (n - 1)));
}

TEST_CASE("calibrated quartic model: eigenvector fidelities and matrix elements") {
    // Values from an independent dense diagonalization (truncated b, n_max = 10, delta = 6 MHz).
    struct Row {
        double omega, f1, f2, f3, x01, x12;
    };
    for (const Row& r : {Row{85.0, 0.99958, 0.99710, 0.98992, 1.00051, 1.41703},
                         Row{75.0, 0.99945, 0.99626, 0.98717, 1.00068, 1.41786}}) {
        CAPTURE(r.omega);
        const double u = calibrate_quartic(r.omega, 6.0);
        CHECK(nonlinear_shift(NonlinearityModel::quartic(u), r.omega) == doctest::Approx(6.0).epsilon(1e-5));
        const SpectrumReport rep = dressed_basis_report(NonlinearityModel::quartic(u), r.omega);
        // Table rows n = 1, 2, 3 are the three lowest levels.
        CHECK(rep.fidelity[0] == doctest::Approx(r.f1).epsilon(2e-5));
        CHECK(rep.fidelity[1] == doctest::Approx(r.f2).epsilon(2e-5));
        CHECK(rep.fidelity[2] == doctest::Approx(r.f3).epsilon(2e-5));
        CHECK(std::abs(rep.X(0, 1)) == doctest::Approx(r.x01).epsilon(2e-5));
        CHECK(std::abs(rep.X(1, 2)) == doctest::Approx(r.x12).epsilon(2e-5));
        // Parity-even model: diagonal elements vanish.
        for (int k = 0; k < 4; ++k) CHECK(std::abs(rep.X(k, k)) < 1e-10);
    }
    CHECK_THROWS_AS(calibrate_quartic(85.0, 1e4), ConvergenceError);
}

TEST_CASE("harmonic limit of the dressed basis report") {
    const SpectrumReport rep = dressed_basis_report(NonlinearityModel::quartic(0.0), 85.0);
    for (double f : rep.fidelity) CHECK(f == doctest::Approx(1.0));
    CHECK(std::abs(rep.X(0, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(rep.X(1, 2)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("full Hamiltonian") {
    const auto layout = ops::SubsystemLayout::standard(4);
    SystemParams p;
    const Matrix h = build_full_hamiltonian(p, layout);
    CHECK(ops::hermiticity_error(h) < 1e-12);

    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const int g0 = layout.index({0, ops::kTransmonGround, 0});
    CHECK(std::norm(es.eigenvectors()(g0, 0)) > 0.9999);

    SystemParams free = p;
    free.g1_mhz = free.g2_mhz = 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> ef(build_full_hamiltonian(free, layout));
    std::vector<double> bare;
    for (int n1 = 0; n1 < 5; ++n1)
        for (int s : {-1, 1})
            for (int n2 = 0; n2 < 5; ++n2)
                bare.push_back(kTwoPi * (85.0 * n1 + 3.0 * n1 * (n1 - 1) + 75.0 * n2 + 3.0 * n2 * (n2 - 1) + 0.5 * s * 1e4));
    std::sort(bare.begin(), bare.end());
    for (int k = 0; k < 50; ++k) CHECK(ef.eigenvalues()(k) == doctest::Approx(bare[k]).epsilon(1e-12));

    CHECK_THROWS(build_full_hamiltonian(p, ops::SubsystemLayout::rabi(4)));
}

TEST_CASE("parameter validation and warnings") {
    SystemParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.warnings().empty());
    p.gamma1_hz = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidInput);
    p = SystemParams{};
    p.Omega_mhz = 100.0;
    p.g1_mhz = 10.0;
    CHECK_FALSE(p.warnings().empty());
    CHECK_THROWS(RabiParams{500.0, 100.0, 1.0}.validate());
}

TEST_CASE("Rabi model spectrum") {
    const SpectrumReport free = rabi_spectrum({100.0, 500.0, 0.0});
    CHECK(free.delta_mhz == doctest::Approx(0.0).epsilon(1e-12));
    for (double pn : free.p) CHECK(pn == doctest::Approx(1.0));
    for (double l : free.leakage) CHECK(l == doctest::Approx(0.0));

    // Dense diagonalization oracle at g = 50 MHz.
    const SpectrumReport r50 = rabi_spectrum({100.0, 500.0, 50.0});
    CHECK(r50.delta_mhz == doctest::Approx(0.642).epsilon(2e-3));
    for (int n = 0; n < 2; ++n) CHECK(r50.leakage[n] <= 0.05);

    double prev = -1.0;
    for (double g = 0.0; g <= 60.0; g += 5.0) {
        const double d = rabi_spectrum({100.0, 500.0, g}).delta_mhz;
        CHECK(d > prev);
        prev = d;
    }
}

TEST_CASE("perturbative nonlinear shift") {
    CHECK(perturbative_delta({100.0, 500.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(perturbative_delta({100.0, 100.0, 1.0}), DomainError);
    const double p10 = perturbative_delta({100.0, 500.0, 10.0});
    CHECK(p10 == doctest::Approx(1.0995e-3).epsilon(1e-3));
    CHECK(p10 == doctest::Approx(rabi_spectrum({100.0, 500.0, 10.0}).delta_mhz).epsilon(0.10));
    for (double g : {1.0, 2.0, 5.0}) {
        const double exact = rabi_spectrum({100.0, 500.0, g}).delta_mhz;
        CHECK(perturbative_delta({100.0, 500.0, g}) == doctest::Approx(exact).epsilon(0.02));
    }
}

TEST_CASE("effective XY coupling and single-qubit shifts") {
    CHECK(effective_gamma(0.0, 6.0, 85.0, 75.0, 1e4) == 0.0);
    CHECK(effective_lambda(0.0, 85.0, 1e4, 3.0) == 0.0);
    const double w = 85.0, W = 1e4, g = 6.0;
    CHECK(effective_lambda(g, w, W, 0.0) == doctest::Approx(-2.0 * g * g * W / (W * W - w * w)));
    CHECK(effective_gamma(6.0, 6.0, 80.0, 80.0, 2500.0) == doctest::Approx(-0.1153).epsilon(1e-3));
    CHECK_THROWS_AS(effective_gamma(6.0, 6.0, 80.0, 80.0, 80.0), DomainError);

    SystemParams p;
    p.nl1 = NonlinearityModel::quartic(0.1);
    CHECK_THROWS_AS(effective_params(p), InvalidInput);
}

TEST_CASE("effective coupling matches the full-model exchange splitting") {
    SystemParams p;
    p.omega1_mhz = p.omega2_mhz = 80.0;
    p.Omega_mhz = 2500.0;
    const auto layout = ops::SubsystemLayout::standard(3);
    const Matrix h = build_full_hamiltonian(p, layout);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const int i10 = layout.index({1, ops::kTransmonGround, 0});
    const int i01 = layout.index({0, ops::kTransmonGround, 1});
    std::vector<double> e;
    for (int k = 0; k < h.rows(); ++k) {
        const double w = std::norm(es.eigenvectors()(i10, k)) + std::norm(es.eigenvectors()(i01, k));
        if (w > 0.4) e.push_back(es.eigenvalues()(k));
    }
    REQUIRE(e.size() == 2);
    // Population oscillates as sin^2(Gamma t / 4): angular frequency |Gamma| / 2.
    const double splitting_mhz = std::abs(e[1] - e[0]) / kTwoPi;
    const double gamma = effective_params(p).Gamma_mhz;
    CHECK(splitting_mhz == doctest::Approx(std::abs(gamma) / 2.0).epsilon(0.05));

    // Full transfer after half an oscillation period.
    const double t = kTwoPi / angular(std::abs(gamma));
    const Matrix u = ops::matrix_exponential(Matrix(-kI * t * h));
    CHECK(std::norm(u(i01, i10)) > 0.99);
}

}  // TEST_SUITE
