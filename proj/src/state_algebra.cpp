#include "lambda_memory/state_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "lambda_memory/errors.hpp"

namespace lambda_memory {

namespace {

void check_dim(int dim)
{
    if (dim < 2 || dim > kMaxDim) {
        throw ArgumentError("operator dimension " + std::to_string(dim) + " outside [2, " +
                            std::to_string(kMaxDim) + "]");
    }
}

void check_same_dim(int a, int b)
{
    if (a != b) {
        throw ArgumentError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

int dominant_index(const Vector& v)
{
    int best = 0;
    double best_mag = std::abs(v(0));
    for (int k = 1; k < v.size(); ++k) {
        const double mag = std::abs(v(k));
        // 1e-12 slack so that numerically equal magnitudes keep the lowest index
        if (mag > best_mag + 1e-12) {
            best = k;
            best_mag = mag;
        }
    }
    return best;
}

} // namespace

ComplexOperator::ComplexOperator(Matrix entries) : entries_(std::move(entries))
{
    if (entries_.rows() != entries_.cols()) {
        throw ArgumentError("operator must be square");
    }
    check_dim(static_cast<int>(entries_.rows()));
}

ComplexOperator ComplexOperator::zero(int dim)
{
    check_dim(dim);
    return ComplexOperator(Matrix::Zero(dim, dim));
}

ComplexOperator ComplexOperator::identity(int dim)
{
    check_dim(dim);
    return ComplexOperator(Matrix::Identity(dim, dim));
}

ComplexOperator ComplexOperator::adjoint() const
{
    return ComplexOperator(entries_.adjoint());
}

bool ComplexOperator::is_hermitian(double tol) const
{
    return max_abs(entries_ - entries_.adjoint()) <= tol;
}

ComplexOperator operator+(const ComplexOperator& a, const ComplexOperator& b)
{
    check_same_dim(a.dim(), b.dim());
    return ComplexOperator(a.entries_ + b.entries_);
}

ComplexOperator operator-(const ComplexOperator& a, const ComplexOperator& b)
{
    check_same_dim(a.dim(), b.dim());
    return ComplexOperator(a.entries_ - b.entries_);
}

ComplexOperator operator*(const ComplexOperator& a, const ComplexOperator& b)
{
    check_same_dim(a.dim(), b.dim());
    return ComplexOperator(a.entries_ * b.entries_);
}

ComplexOperator operator*(Complex s, const ComplexOperator& a)
{
    return ComplexOperator(s * a.entries_);
}

DensityMatrix::DensityMatrix(Matrix entries, const StateTolerances& tol) : entries_(std::move(entries))
{
    if (entries_.rows() != entries_.cols()) {
        throw ArgumentError("density matrix must be square");
    }
    check_dim(dim());
    const double herm = max_abs(entries_ - entries_.adjoint());
    if (herm > tol.hermiticity) {
        throw ContractError("density matrix not Hermitian (max |rho - rho^+| = " + std::to_string(herm) + ")");
    }
    const double tr = entries_.trace().real();
    if (std::abs(tr - 1.0) > tol.trace) {
        throw ContractError("density matrix trace " + std::to_string(tr) + " differs from 1");
    }
    const double lo = min_hermitian_eigenvalue(entries_);
    if (lo < -tol.positivity) {
        throw ContractError("density matrix not positive semidefinite (min eigenvalue " + std::to_string(lo) + ")");
    }
}

DensityMatrix DensityMatrix::basis_state(int k, int dim)
{
    check_dim(dim);
    if (k < 0 || k >= dim) {
        throw ArgumentError("basis index " + std::to_string(k) + " out of range");
    }
    Matrix m = Matrix::Zero(dim, dim);
    m(k, k) = 1.0;
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const Vector& psi)
{
    const double norm = psi.norm();
    if (norm == 0.0) {
        throw ArgumentError("zero state vector");
    }
    const Vector unit = psi / norm;
    return DensityMatrix(unit * unit.adjoint());
}

double DensityMatrix::purity() const
{
    return (entries_ * entries_).trace().real();
}

ComplexOperator projector(int i, int j, int dim)
{
    check_dim(dim);
    if (i < 0 || i >= dim || j < 0 || j >= dim) {
        throw ArgumentError("projector index (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") out of range for dim " + std::to_string(dim));
    }
    Matrix m = Matrix::Zero(dim, dim);
    m(i, j) = 1.0;
    return ComplexOperator(std::move(m));
}

EigenDecomposition hermitian_eigen(const ComplexOperator& a)
{
    if (!a.is_hermitian(1e-10)) {
        throw ContractError("hermitian_eigen: input operator is not Hermitian");
    }
    const int n = a.dim();
    const Matrix herm = 0.5 * (a.matrix() + a.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("hermitian_eigen: eigensolver did not converge");
    }

    std::vector<Vector> vecs(n);
    std::vector<int> lead(n);
    for (int k = 0; k < n; ++k) {
        Vector v = solver.eigenvectors().col(k);
        v /= v.norm();
        lead[k] = dominant_index(v);
        const Complex c = v(lead[k]);
        v *= std::conj(c) / std::abs(c);
        v(lead[k]) = std::abs(v(lead[k]));
        vecs[k] = v;
    }

    // solver output is ascending; reorder runs of (numerically) equal eigenvalues
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto& ev = solver.eigenvalues();
    for (int begin = 0; begin < n;) {
        int end = begin + 1;
        while (end < n && ev(end) - ev(end - 1) <= 1e-10) {
            ++end;
        }
        std::stable_sort(order.begin() + begin, order.begin() + end,
                         [&](int x, int y) { return lead[x] < lead[y]; });
        begin = end;
    }

    EigenDecomposition out{RealVector(n), Matrix(n, n)};
    for (int k = 0; k < n; ++k) {
        out.eigenvalues(k) = ev(order[k]);
        out.eigenvectors.col(k) = vecs[order[k]];
    }
    return out;
}

Complex expectation(const DensityMatrix& rho, const ComplexOperator& a)
{
    check_same_dim(rho.dim(), a.dim());
    return (rho.matrix() * a.matrix()).trace();
}

double max_abs(const Matrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double min_hermitian_eigenvalue(const Matrix& m)
{
    const Matrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

} // namespace lambda_memory
