#pragma once

// Reference implementations used only by the tests. Each one takes a different
// route from the library code it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b)
{
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// column-stacked vec, so vec(A X B) = (B^T kron A) vec(X)
inline Vec vec(const Mat& m)
{
    return Eigen::Map<const Vec>(m.data(), m.size());
}

inline Mat unvec(const Vec& v, Eigen::Index n)
{
    return Eigen::Map<const Mat>(v.data(), n, n);
}

inline Mat liouvillian(const Mat& H, const std::vector<Mat>& jumps)
{
    const Eigen::Index n = H.rows();
    const Mat I = Mat::Identity(n, n);
    const C i(0.0, 1.0);
    Mat L = -i * (kron(I, H) - kron(H.transpose(), I));
    for (const auto& c : jumps) {
        const Mat cdc = c.adjoint() * c;
        L += kron(c.conjugate(), c) - 0.5 * kron(I, cdc) - 0.5 * kron(cdc.transpose(), I);
    }
    return L;
}

// Taylor series with scaling and squaring
inline Mat expm(const Mat& a)
{
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int s = norm > 0.5 ? static_cast<int>(std::ceil(std::log2(norm / 0.5))) : 0;
    const Mat b = a / std::pow(2.0, s);
    Mat term = Mat::Identity(a.rows(), a.cols());
    Mat sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * b / static_cast<double>(k);
        sum += term;
    }
    for (; s > 0; --s) {
        sum = sum * sum;
    }
    return sum;
}

inline Mat evolve(const Mat& H, const std::vector<Mat>& jumps, const Mat& rho, double t)
{
    return unvec(expm(liouvillian(H, jumps) * t) * vec(rho), rho.rows());
}

// roots of the characteristic polynomial of a real symmetric 3x3, ascending
inline std::array<double, 3> symmetric3_eigenvalues(const Eigen::Matrix3d& a)
{
    const double q = a.trace() / 3.0;
    const Eigen::Matrix3d b = a - q * Eigen::Matrix3d::Identity();
    const double p = std::sqrt((b * b).trace() / 6.0);
    if (p == 0.0) {
        return {q, q, q};
    }
    const double r = std::clamp((b / p).determinant() / 2.0, -1.0, 1.0);
    const double ang = std::acos(r) / 3.0;
    const double hi = q + 2.0 * p * std::cos(ang);
    const double lo = q + 2.0 * p * std::cos(ang + 2.0 * std::numbers::pi / 3.0);
    return {lo, 3.0 * q - hi - lo, hi};
}

template <class F>
Eigen::VectorXd rk4(F f, Eigen::VectorXd y, double t0, double t1, int steps)
{
    const double h = (t1 - t0) / steps;
    for (int k = 0; k < steps; ++k) {
        const double t = t0 + k * h;
        const Eigen::VectorXd k1 = f(t, y);
        const Eigen::VectorXd k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
        const Eigen::VectorXd k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
        const Eigen::VectorXd k4 = f(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

// <a|i><j|b> over every pair of basis vectors, by explicit outer product and sandwich
inline Mat outer_projection(const std::vector<Vec>& basis, int i, int j)
{
    const Eigen::Index n = static_cast<Eigen::Index>(basis.size());
    Vec ei = Vec::Zero(basis[0].size());
    Vec ej = Vec::Zero(basis[0].size());
    ei(i) = 1.0;
    ej(j) = 1.0;
    const Mat op = ei * ej.adjoint();
    Mat out(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            out(r, c) = (basis[r].adjoint() * op * basis[c])(0, 0);
        }
    }
    return out;
}

// |g><g|, |s><s|, |e><e|, |g><s|, |g><e|, |s><e| in (Phi0, Phi-, Phi+), closed forms typed in by hand
inline Eigen::Matrix3d tabulated_projection(const std::string& which, double th, double ph)
{
    const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    Eigen::Matrix3d m;
    if (which == "gg") {
        m << ct * ct, ct * st * cp, ct * st * sp,
             ct * st * cp, st * st * cp * cp, st * st * sp * cp,
             ct * st * sp, st * st * sp * cp, st * st * sp * sp;
    } else if (which == "ss") {
        m << st * st, -ct * st * sp, -ct * st * cp,
             -ct * st * sp, ct * ct * sp * sp, ct * ct * sp * cp,
             -ct * st * cp, ct * ct * sp * cp, ct * ct * cp * cp;
    } else if (which == "ee") {
        m << 0, 0, 0,
             0, cp * cp, -sp * cp,
             0, -sp * cp, sp * sp;
    } else if (which == "gs") {
        m << -ct * st, ct * ct * sp, ct * ct * cp,
             -st * st * cp, ct * st * sp * cp, ct * st * cp * cp,
             -st * st * sp, ct * st * sp * sp, ct * st * sp * cp;
    } else if (which == "ge") {
        m << 0, ct * cp, -ct * sp,
             0, st * cp * cp, -st * sp * cp,
             0, st * sp * cp, -st * sp * sp;
    } else {
        m << 0, -st * cp, st * sp,
             0, ct * sp * cp, -ct * sp * sp,
             0, ct * cp * cp, -ct * sp * cp;
    }
    return m;
}

} // namespace oracle
