#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lambda_memory/integrator.hpp"
#include "lambda_memory/model.hpp"

namespace lambda_memory {

enum class EfficiencyKind { writing, reading };

std::string to_string(EfficiencyKind kind);
EfficiencyKind parse_efficiency_kind(const std::string& name);

struct EfficiencyOptions {
    /// Overrides the automatic window (and step) selection.
    std::optional<TimeWindow> window{};
    bool keep_trajectory = false;
    /// Global step halving until the final populations change by < 1e-8.
    bool refine = false;
    PropagationOptions propagation{};
};

struct EfficiencyResult {
    double eta;
    EfficiencyKind kind;
    std::optional<Trajectory> trajectory;
};

/// Simulation window for a memory operation on m.
///
/// Sigmoid pulses use the adiabatic window [t(0.001) - 2T, t(0.999) + 2T]. An end
/// the pulse cannot reach falls back to the point where Omega is within 0.1% of
/// its limiting value, padded by the same 2T. Gaussian pulses run from the peak
/// (writing) or up to the peak (reading), over the flank where Omega falls to
/// sqrt(0.001/0.999), padded by two widths. The step is min(T, 1)/200, reduced
/// further to accurate_step when the control field is strong.
TimeWindow memory_window(const LambdaModel& m, EfficiencyKind kind);

/// Writing efficiency: start in |g,1><g,1|, return the final |s,0> population.
/// Throws ArgumentError for a reversed (rising) sigmoid. With the automatic window a
/// positivity or population breach is retried with dt halved, at most three times.
EfficiencyResult writing_efficiency(const LambdaModel& m, const EfficiencyOptions& opts = {});

/// Reading efficiency: start in |s,0><s,0| under the time-reversed control pulse,
/// return the final |g,1> population. A writing sigmoid on m is reversed here;
/// a sigmoid that is already reversed is used as is.
EfficiencyResult reading_efficiency(const LambdaModel& m, const EfficiencyOptions& opts = {});

EfficiencyResult efficiency(const LambdaModel& m, EfficiencyKind kind, const EfficiencyOptions& opts = {});

struct SweepResult {
    std::string axis1_name;
    std::string axis2_name;
    std::vector<double> axis1;
    std::vector<double> axis2;
    Eigen::MatrixXd values; ///< values(i, j) <-> (axis1[i], axis2[j]); NaN for failed cells
    std::vector<std::string> warnings;
};

/// Efficiency over an (Omega0, T) grid of sigmoid pulses; all other settings from base.
/// Failed cells become NaN with a warning; row-major (Omega0, T) order regardless of scheduling.
SweepResult efficiency_sweep(const LambdaModel& base, std::span<const double> omega0s, std::span<const double> Ts,
                             EfficiencyKind kind, int workers = 1);

/// Writing efficiency for each rate on channel gamma_ij, other channels as in base.
std::vector<double> dephasing_sensitivity(const LambdaModel& base, AtomicLevel i, AtomicLevel j,
                                          std::span<const double> rates, int workers = 1);

struct AbsorptionCurve {
    std::vector<double> detunings;
    std::vector<double> efficiencies;
    double hwhm;
    double peak;
    double peak_detuning;
};

/// Half width at half maximum by linear interpolation on both sides of the peak, averaged.
/// Throws ArgumentError("widen detuning grid") when a side never drops below half maximum.
double half_width_half_max(std::span<const double> x, std::span<const double> y);

/// Writing efficiency against one-photon detuning Delta.
AbsorptionCurve detuning_scan(const LambdaModel& base, std::span<const double> detunings, int workers = 1);

enum class BandwidthMode { full, simplified };

/// Physical signal bandwidth from the dimensionless HWHM sigma.
///   simplified: g sigma
///   full:       (C^2 sigma^2 + sqrt(C^4 sigma^4 + 4 C^2 sigma^2 omega_ge)) / 2,  C = g / sqrt(omega_ge)
double bandwidth_physical(double sigma, double g_phys, double omega_ge, BandwidthMode mode);

/// Semi-classical three-level STIRAP: Omega(t) = omega0 exp(-(t + tau/2)^2) on s-e,
/// g(t) = omega0 exp(-(t - tau/2)^2) on g-e, start in |g>; final |s> population.
double stirap_transfer(double omega0, double tau);

SweepResult stirap_benchmark(std::span<const double> omega0s, std::span<const double> taus, int workers = 1);

std::vector<double> log_grid(double lo, double hi, int points);
std::vector<double> linear_grid(double lo, double hi, int points);

} // namespace lambda_memory
