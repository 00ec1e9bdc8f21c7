#include <doctest.h>

#include <random>

#include "lambda_memory/errors.hpp"
#include "lambda_memory/state_algebra.hpp"
#include "oracles.hpp"

using namespace lambda_memory;

namespace {

Matrix random_matrix(std::mt19937& rng, int n)
{
    std::normal_distribution<double> nd;
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = Complex(nd(rng), nd(rng));
        }
    }
    return m;
}

Matrix random_hermitian(std::mt19937& rng, int n)
{
    const Matrix a = random_matrix(rng, n);
    return 0.5 * (a + a.adjoint());
}

} // namespace

TEST_CASE("projector builds a single unit entry")
{
    const auto p = projector(0, 2, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(p(i, j) == Complex((i == 0 && j == 2) ? 1.0 : 0.0));
        }
    }
    CHECK(p.adjoint() == projector(2, 0, 3));
    CHECK_THROWS_AS(projector(3, 0, 3), ArgumentError);
    CHECK_THROWS_AS(projector(0, -1, 3), ArgumentError);
}

TEST_CASE("projectors are complete")
{
    for (int n = 2; n <= 4; ++n) {
        ComplexOperator sum = ComplexOperator::zero(n);
        for (int k = 0; k < n; ++k) {
            sum = sum + projector(k, k, n);
        }
        CHECK(sum == ComplexOperator::identity(n));
    }
}

TEST_CASE("operator dimension and shape are checked")
{
    CHECK_THROWS_AS(ComplexOperator::zero(1), ArgumentError);
    CHECK_THROWS_AS(ComplexOperator::zero(kMaxDim + 1), ArgumentError);
    CHECK_THROWS_AS(ComplexOperator::identity(2) * ComplexOperator::identity(3), ArgumentError);
    CHECK_THROWS_AS(ComplexOperator::identity(2) + ComplexOperator::identity(3), ArgumentError);
}

TEST_CASE("algebra: associativity and adjoint involution")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexOperator a(random_matrix(rng, 4));
        const ComplexOperator b(random_matrix(rng, 4));
        const ComplexOperator c(random_matrix(rng, 4));
        CHECK(max_abs(((a * b) * c).matrix() - (a * (b * c)).matrix()) <= 1e-12);
        CHECK(a.adjoint().adjoint() == a);
        CHECK(max_abs((a * b).adjoint().matrix() - (b.adjoint() * a.adjoint()).matrix()) <= 1e-12);
    }
}

TEST_CASE("density matrix validation")
{
    Matrix twice = Matrix::Identity(3, 3);
    CHECK_THROWS_AS(DensityMatrix{twice}, ContractError);

    Matrix skew = Matrix::Zero(2, 2);
    skew(0, 0) = 1.0;
    skew(0, 1) = 0.3;
    CHECK_THROWS_AS(DensityMatrix{skew}, ContractError);

    Matrix negative = Matrix::Zero(2, 2);
    negative(0, 0) = 1.2;
    negative(1, 1) = -0.2;
    CHECK_THROWS_AS(DensityMatrix{negative}, ContractError);

    Matrix mixed = Matrix::Identity(2, 2) * 0.5;
    CHECK(DensityMatrix(mixed).purity() == doctest::Approx(0.5));
    CHECK(DensityMatrix::basis_state(1, 3).purity() == doctest::Approx(1.0));
    CHECK_THROWS_AS(DensityMatrix::basis_state(3, 3), ArgumentError);
}

TEST_CASE("expectation values")
{
    const auto rho = DensityMatrix::basis_state(0, 3);
    CHECK(expectation(rho, projector(0, 0, 3)) == Complex(1.0));
    CHECK(expectation(rho, projector(1, 1, 3)) == Complex(0.0));
    CHECK_THROWS_AS(expectation(rho, projector(0, 0, 4)), ArgumentError);
}

TEST_CASE("hermitian_eigen on identity keeps the basis order")
{
    const auto d = hermitian_eigen(ComplexOperator::identity(3));
    for (int k = 0; k < 3; ++k) {
        CHECK(d.eigenvalues(k) == doctest::Approx(1.0));
    }
    CHECK(max_abs(d.eigenvectors - Matrix::Identity(3, 3)) <= 1e-15);
}

TEST_CASE("hermitian_eigen matches characteristic polynomial roots")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::Matrix3d a;
        a << u(rng), 1.0, 0.0,
             1.0, u(rng), u(rng),
             0.0, 0.0, u(rng);
        a(2, 1) = a(1, 2);
        const auto ref = oracle::symmetric3_eigenvalues(a);
        const auto d = hermitian_eigen(ComplexOperator(a.cast<Complex>()));
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(d.eigenvalues(k) - ref[k]) <= 1e-10);
        }
    }

    Matrix h = Matrix::Zero(3, 3);
    h(0, 2) = h(2, 0) = 1.0;
    h(1, 2) = h(2, 1) = 1.0;
    auto d = hermitian_eigen(ComplexOperator(h));
    CHECK(d.eigenvalues(0) == doctest::Approx(-std::sqrt(2.0)));
    CHECK(std::abs(d.eigenvalues(1)) <= 1e-12);
    CHECK(d.eigenvalues(2) == doctest::Approx(std::sqrt(2.0)));

    h(2, 2) = 1.0;
    d = hermitian_eigen(ComplexOperator(h));
    CHECK(d.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(std::abs(d.eigenvalues(1)) <= 1e-12);
    CHECK(d.eigenvalues(2) == doctest::Approx(2.0));
}

TEST_CASE("hermitian_eigen properties on random matrices")
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 5;
        const Matrix a = random_hermitian(rng, n);
        const auto d = hermitian_eigen(ComplexOperator(a));
        const Matrix& v = d.eigenvectors;
        CHECK(max_abs(v.adjoint() * v - Matrix::Identity(n, n)) <= 1e-10);
        const Matrix recon = v * d.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
        CHECK(max_abs(recon - a) <= 1e-9);
        for (int k = 0; k < n; ++k) {
            if (k > 0) {
                CHECK(d.eigenvalues(k) >= d.eigenvalues(k - 1));
            }
            Eigen::Index big = 0;
            v.col(k).cwiseAbs().maxCoeff(&big);
            CHECK(std::abs(v(big, k).imag()) <= 1e-12);
            CHECK(v(big, k).real() > 0.0);
        }
    }
}

TEST_CASE("hermitian_eigen rejects non-Hermitian input")
{
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eigen(ComplexOperator(a)), ContractError);
}
