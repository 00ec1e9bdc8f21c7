#include "lambda_memory/adiabatic.hpp"

#include <cmath>
#include <limits>

#include "lambda_memory/errors.hpp"
#include "lambda_memory/integrator.hpp"

namespace lambda_memory {

Eigen::Matrix3cd AdiabaticFrame::transform() const
{
    Eigen::Matrix3cd u;
    u.col(0) = dark;
    u.col(1) = bright_minus;
    u.col(2) = bright_plus;
    return u;
}

MixingAngles mixing_angles(double g, double omega, double Delta)
{
    if (g == 0.0 && omega == 0.0) {
        throw ArgumentError("mixing angles undefined for g = Omega = 0");
    }
    const double w = std::hypot(g, omega);
    return {std::atan2(g, omega), 0.5 * std::atan2(2.0 * w, Delta)};
}

AdiabaticFrame adiabatic_basis(double g, double omega, double Delta)
{
    const auto [theta, phi] = mixing_angles(g, omega, Delta);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double cp = std::cos(phi);
    const double sp = std::sin(phi);
    const double root = std::sqrt(Delta * Delta + 4.0 * g * g + 4.0 * omega * omega);

    AdiabaticFrame f;
    f.theta = theta;
    f.phi = phi;
    f.dark = Vector3(ct, -st, 0.0);
    f.bright_minus = Vector3(st * cp, ct * cp, -sp);
    f.bright_plus = Vector3(st * sp, ct * sp, cp);
    f.energy_dark = 0.0;
    f.energy_minus = 0.5 * (Delta - root);
    f.energy_plus = 0.5 * (Delta + root);
    return f;
}

AdiabaticFrame adiabatic_basis(const LambdaModel& m, double t)
{
    return adiabatic_basis(m.g(), m.pulse().value(t), m.Delta());
}

ComplexOperator project_to_adiabatic(AtomicLevel i, AtomicLevel j, const AdiabaticFrame& frame)
{
    const Eigen::Matrix3cd u = frame.transform();
    const int a = static_cast<int>(i);
    const int b = static_cast<int>(j);
    Matrix out(3, 3);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            out(r, c) = std::conj(u(a, r)) * u(b, c);
        }
    }
    return ComplexOperator(std::move(out));
}

DarkStateDecay::DarkStateDecay(double kappa, double omega0, double T, double d0, double t0, double v0)
    : kappa_(kappa), omega0_(omega0), T_(T), d0_(d0), t0_(t0), v0_(v0), log_c1_(0.0)
{
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        throw ArgumentError("kappa must be finite and >= 0");
    }
    if (!(omega0 > 1.0) || !std::isfinite(omega0)) {
        throw ArgumentError("omega0 must be finite and > 1");
    }
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw ArgumentError("T must be finite and > 0");
    }
    if (!std::isfinite(t0) || !(d0 >= 0.0 && d0 <= 1.0)) {
        throw ArgumentError("initial condition needs finite t0 and d0 in [0, 1]");
    }
    log_c1_ = (d0 > 0.0 ? std::log(d0) : -std::numeric_limits<double>::infinity()) - exponent(t0);
}

double DarkStateDecay::exponent(double t) const
{
    const double o2 = omega0_ * omega0_;
    const double x = t / T_;
    // T log((e^x + 1)^2 + omega0^2) - 2t, rewritten for x > 0 so that e^x never overflows
    // and the 2t terms cancel analytically.
    double log_term;
    if (x > 0.0) {
        const double em = std::exp(-x);
        log_term = T_ * std::log((1.0 + em) * (1.0 + em) + o2 * em * em);
    } else {
        const double u = std::exp(x) + 1.0;
        log_term = T_ * std::log(u * u + o2) - 2.0 * t;
    }
    // (e^x + 1)/omega0 -> inf is fine for atan
    const double atan_term = std::atan((std::exp(x) + 1.0) / omega0_);
    return kappa_ * o2 * log_term / (2.0 * (o2 + 1.0)) + 2.0 * kappa_ * omega0_ * T_ * atan_term / (2.0 * (o2 + 1.0));
}

double DarkStateDecay::c1() const
{
    return std::exp(log_c1_);
}

double DarkStateDecay::dark(double t) const
{
    if (kappa_ == 0.0) {
        return d0_;
    }
    return std::exp(log_c1_ + exponent(t));
}

double DarkStateDecay::decay_rate(double t) const
{
    const double omega = PulseShape::sigmoid(omega0_, T_).value(t);
    return kappa_ * omega * omega / (omega * omega + 1.0);
}

DarkStateDecay dark_decay_solution(double kappa, double omega0, double T, double d0, double t0)
{
    return {kappa, omega0, T, d0, t0};
}

double asymptotic_dark_population(double kappa, double omega0, double T)
{
    const double t0 = adiabatic_time(omega0, T, 0.001);
    const double t_end = adiabatic_time(omega0, T, 0.999) + 10.0 * T;
    return dark_decay_solution(kappa, omega0, T, 0.999, t0).dark(t_end);
}

} // namespace lambda_memory
