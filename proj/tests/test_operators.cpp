#include <doctest.h>

#include "emsim/errors.hpp"
#include "emsim/operators.hpp"

#include <random>

using namespace emsim;
using ops::Axis;

namespace {

Matrix random_hermitian(int dim, std::mt19937& rng) {
    std::normal_distribution<double> n;
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = {n(rng), n(rng)};
    return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("annihilation operator follows the sqrt(n) rule") {
    const Matrix b2 = ops::annihilation_operator(2);
    CHECK(b2(0, 1) == cplx(1.0));
    CHECK(ops::max_abs(b2 - Matrix{{0, 1}, {0, 0}}) == 0.0);

    const Matrix b3 = ops::annihilation_operator(3);
    CHECK(b3(0, 1).real() == doctest::Approx(1.0));
    CHECK(b3(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(std::abs(b3(1, 0)) == 0.0);

    const Matrix b4 = ops::annihilation_operator(4);
    const Matrix n = b4.adjoint() * b4;
    for (int k = 0; k < 4; ++k) CHECK(n(k, k).real() == doctest::Approx(k));
    CHECK(ops::max_abs(n - ops::number_operator(4)) < 1e-15);

    CHECK_THROWS_AS(ops::annihilation_operator(1), DimensionError);
}

TEST_CASE("commutator [b, b†] is the identity except on the top level") {
    const int d = 6;
    const Matrix b = ops::annihilation_operator(d);
    const Matrix c = ops::commutator(b, b.adjoint());
    for (int k = 0; k + 1 < d; ++k) CHECK(c(k, k).real() == doctest::Approx(1.0));
    CHECK(c(d - 1, d - 1).real() == doctest::Approx(-(d - 1)));
}

TEST_CASE("pauli matrices use the excited-first convention") {
    const Matrix z = ops::pauli(Axis::Z);
    CHECK(z(0, 0).real() == 1.0);
    CHECK(z(1, 1).real() == -1.0);
    const Matrix p = ops::pauli(Axis::Plus), m = ops::pauli(Axis::Minus);
    CHECK(ops::max_abs(p * m + m * p - ops::identity(2)) < 1e-15);
    // sigma_- lowers the excited state (index 0) to the ground state (index 1).
    CHECK(m(ops::kTransmonGround, ops::kTransmonExcited) == cplx(1.0));
    const Matrix x = ops::pauli(Axis::X), y = ops::pauli(Axis::Y);
    CHECK(ops::max_abs(ops::commutator(x, y) - 2.0 * kI * z) < 1e-15);
}

TEST_CASE("embedding on the standard layout") {
    const auto layout = ops::SubsystemLayout::standard(4);
    CHECK(layout.total_dim() == 50);
    CHECK(layout.dim(ops::Subsystem::Transmon) == 2);
    CHECK(layout.slot_of(ops::Subsystem::NR2) == 2);

    CHECK(ops::max_abs(ops::embed(ops::identity(5), ops::Subsystem::NR1, layout) - ops::identity(50)) == 0.0);
    const Matrix b1 = ops::embed(ops::annihilation_operator(5), ops::Subsystem::NR1, layout);
    const Matrix sx = ops::embed(ops::pauli(Axis::X), ops::Subsystem::Transmon, layout);
    CHECK(b1.rows() == 50);
    CHECK(ops::max_abs(ops::commutator(b1, sx)) == 0.0);

    // Hermiticity and spectral norm survive embedding.
    const Matrix x = ops::annihilation_operator(5) + ops::annihilation_operator(5).adjoint();
    const Matrix xe = ops::embed(x, ops::Subsystem::NR2, layout);
    CHECK(ops::is_hermitian(xe, 1e-15));
    Eigen::SelfAdjointEigenSolver<Matrix> s1(x), s2(xe);
    CHECK(s2.eigenvalues().cwiseAbs().maxCoeff() == doctest::Approx(s1.eigenvalues().cwiseAbs().maxCoeff()));

    CHECK_THROWS_AS(ops::embed(ops::identity(3), ops::Subsystem::Transmon, layout), DimensionError);
}

TEST_CASE("layout index round trip") {
    const auto layout = ops::SubsystemLayout::standard(3);
    for (int i = 0; i < layout.total_dim(); ++i) CHECK(layout.index(layout.levels(i)) == i);
    CHECK_THROWS(ops::SubsystemLayout({{ops::Subsystem::NR1, 1}}));
}

TEST_CASE("matrix exponential") {
    CHECK(ops::max_abs(ops::matrix_exponential(Matrix::Zero(3, 3)) - ops::identity(3)) < 1e-15);

    const double theta = 0.83;
    const Matrix x = ops::pauli(Axis::X);
    const Matrix expect = std::cos(theta / 2) * ops::identity(2) - kI * std::sin(theta / 2) * x;
    CHECK(ops::max_abs(ops::matrix_exponential(Matrix(-kI * theta / 2.0 * x)) - expect) < 1e-14);

    std::mt19937 rng(7);
    for (int dim : {2, 5, 16}) {
        const Matrix h = random_hermitian(dim, rng);
        const Matrix e = ops::matrix_exponential(h);
        const Matrix einv = ops::matrix_exponential(Matrix(-h));
        CHECK(ops::max_abs(e * einv - ops::identity(dim)) < 1e-12 * std::max(1.0, ops::max_abs(e)));
    }
    for (int dim : {8, 64}) {
        const Matrix u = ops::matrix_exponential(Matrix(-kI * random_hermitian(dim, rng)));
        CHECK(ops::max_abs(u.adjoint() * u - ops::identity(dim)) < 1e-10);
    }
    // General (non-normal) input goes through scaling and squaring.
    Matrix n{{0.0, 1.0}, {0.0, 0.0}};
    const Matrix en = ops::matrix_exponential(n);
    CHECK(ops::max_abs(en - Matrix{{1, 1}, {0, 1}}) < 1e-14);

    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ops::matrix_exponential(bad), NumericInputError);
}

}  // TEST_SUITE
