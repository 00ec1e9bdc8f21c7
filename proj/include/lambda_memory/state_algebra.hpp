#pragma once

#include <complex>

#include <Eigen/Dense>

namespace lambda_memory {

using Complex = std::complex<double>;

/// Largest Hilbert-space dimension handled by the dense small-matrix types.
inline constexpr int kMaxDim = 8;

using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using RealVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

/// Tolerances used when validating density matrices.
struct StateTolerances {
    double hermiticity = 1e-10;
    double trace = 1e-8;
    double positivity = 1e-7;
};

/// Square complex matrix of dimension 2..kMaxDim acting on a small Hilbert space.
class ComplexOperator {
public:
    explicit ComplexOperator(Matrix entries);

    static ComplexOperator zero(int dim);
    static ComplexOperator identity(int dim);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& matrix() const { return entries_; }
    Complex operator()(int row, int col) const { return entries_(row, col); }

    ComplexOperator adjoint() const;
    bool is_hermitian(double tol) const;

    friend ComplexOperator operator+(const ComplexOperator& a, const ComplexOperator& b);
    friend ComplexOperator operator-(const ComplexOperator& a, const ComplexOperator& b);
    friend ComplexOperator operator*(const ComplexOperator& a, const ComplexOperator& b);
    friend ComplexOperator operator*(Complex s, const ComplexOperator& a);
    friend bool operator==(const ComplexOperator& a, const ComplexOperator& b)
    {
        return a.entries_ == b.entries_;
    }

private:
    Matrix entries_;
};

/// Validated density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
public:
    /// Throws ContractError when any invariant fails at the given tolerances.
    explicit DensityMatrix(Matrix entries, const StateTolerances& tol = {});

    /// |k><k| on a dim-dimensional space.
    static DensityMatrix basis_state(int k, int dim);
    /// |psi><psi| for a (normalised on entry) state vector.
    static DensityMatrix pure(const Vector& psi);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& matrix() const { return entries_; }
    Complex operator()(int row, int col) const { return entries_(row, col); }

    double trace() const { return entries_.trace().real(); }
    double purity() const;
    RealVector populations() const { return entries_.diagonal().real(); }

private:
    Matrix entries_;
};

struct EigenDecomposition {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // column k belongs to eigenvalues[k]
};

/// |i><j| on a dim-dimensional space.
ComplexOperator projector(int i, int j, int dim);

/// Eigen-decomposition of a Hermitian operator.
///
/// Eigenvalues come out ascending. Each eigenvector is rotated so that its
/// largest-magnitude component is real and positive (lowest index wins among
/// equal magnitudes). Eigenvalues that agree within 1e-10 are ordered by the
/// index of that largest component, so the output is reproducible.
EigenDecomposition hermitian_eigen(const ComplexOperator& a);

/// Tr(rho A).
Complex expectation(const DensityMatrix& rho, const ComplexOperator& a);

double max_abs(const Matrix& m);

/// Smallest eigenvalue of the Hermitian part of m.
double min_hermitian_eigenvalue(const Matrix& m);

} // namespace lambda_memory
