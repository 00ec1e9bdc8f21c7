#pragma once

#include <Eigen/Dense>

#include "lambda_memory/model.hpp"
#include "lambda_memory/state_algebra.hpp"

namespace lambda_memory {

using Vector3 = Eigen::Vector3cd;

struct MixingAngles {
    double theta; ///< atan2(g, Omega), in [0, pi/2]
    double phi;   ///< 1/2 atan2(2 sqrt(g^2 + Omega^2), Delta), in (0, pi/2)
};

/// Instantaneous eigenbasis of the three-state Hamiltonian (|g,1>, |s,0>, |e,0>) at delta = 0.
///
///   dark         =  cos(theta)|g> - sin(theta)|s>                           E0 = 0
///   bright_minus =  sin(theta)cos(phi)|g> + cos(theta)cos(phi)|s> - sin(phi)|e>  E- <= 0
///   bright_plus  =  sin(theta)sin(phi)|g> + cos(theta)sin(phi)|s> + cos(phi)|e>  E+ >= 0
///
/// with E+- = (Delta +- sqrt(Delta^2 + 4g^2 + 4 Omega^2)) / 2. At Delta = 0 the bright
/// states reduce to (sin(theta)|g> + cos(theta)|s> +- |e>)/sqrt(2).
struct AdiabaticFrame {
    double theta;
    double phi;
    Vector3 dark;
    Vector3 bright_minus;
    Vector3 bright_plus;
    double energy_dark;
    double energy_minus;
    double energy_plus;

    /// Columns (dark, bright_minus, bright_plus).
    Eigen::Matrix3cd transform() const;
};

/// Throws ArgumentError when g = Omega = 0.
MixingAngles mixing_angles(double g, double omega, double Delta);

AdiabaticFrame adiabatic_basis(double g, double omega, double Delta);
AdiabaticFrame adiabatic_basis(const LambdaModel& m, double t);

/// |i><j| in the ordered basis (dark, bright_minus, bright_plus): U^+ |i><j| U.
ComplexOperator project_to_adiabatic(AtomicLevel i, AtomicLevel j, const AdiabaticFrame& frame);

/// Closed-form dark-state population under cavity leakage in the adiabatic limit:
///   d'(t) = -kappa cos^2(theta(t)) d(t),   v'(t) = kappa cos^2(theta(t)) d(t),
/// for the sigmoid writing pulse Omega0 / (1 + exp(t/T)) and g = 1.
class DarkStateDecay {
public:
    /// Throws ArgumentError unless kappa >= 0, omega0 > 1 and T > 0.
    DarkStateDecay(double kappa, double omega0, double T, double d0, double t0, double v0 = 0.0);

    double kappa() const { return kappa_; }
    double omega0() const { return omega0_; }
    double T() const { return T_; }
    double t0() const { return t0_; }
    double d0() const { return d0_; }
    /// Integration constant of the general solution, fixed by d(t0) = d0.
    double c1() const;

    double dark(double t) const;
    double vacuum(double t) const { return d0_ - dark(t) + v0_; }
    /// kappa cos^2(theta(t)).
    double decay_rate(double t) const;

private:
    /// Exponent of the general solution without c1.
    double exponent(double t) const;

    double kappa_;
    double omega0_;
    double T_;
    double d0_;
    double t0_;
    double v0_;
    double log_c1_;
};

DarkStateDecay dark_decay_solution(double kappa, double omega0, double T, double d0, double t0);

/// d(t) at t(p = 0.999) + 10 T, starting from d0 = 0.999 at t(p = 0.001).
double asymptotic_dark_population(double kappa, double omega0, double T);

} // namespace lambda_memory
