#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lambda_memory/model.hpp"
#include "lambda_memory/state_algebra.hpp"

namespace lambda_memory {

/// Integration interval and step, in units of 1/g.
class TimeWindow {
public:
    static constexpr double kMaxSteps = 1e7;

    /// Throws ArgumentError unless t_start < t_end, dt > 0 and the step count is <= 1e7.
    TimeWindow(double t_start, double t_end, double dt);

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    double dt() const { return dt_; }
    double length() const { return t_end_ - t_start_; }

    TimeWindow with_dt(double dt) const { return {t_start_, t_end_, dt}; }
    TimeWindow mirrored() const { return {-t_end_, -t_start_, dt_}; }

private:
    double t_start_;
    double t_end_;
    double dt_;
};

struct Trajectory {
    std::vector<double> times;
    Eigen::MatrixXd populations; ///< rows = samples, columns = basis states
    DensityMatrix final_state;
    double trace_error = 0.0;    ///< max |Tr rho - 1| over every step
    double min_eigenvalue = 0.0; ///< smallest eigenvalue at a recorded sample (positivity check only)
};

struct PropagationOptions {
    int samples = 1000;
    /// Validate positivity (eigenvalues) at every recorded sample.
    bool check_positivity = true;
    StateTolerances tolerances{};
};

/// -i[H(t), rho] + sum_k C rho C^+ - 1/2 {C^+ C, rho}.
Matrix lindblad_rhs(const Generator& gen, double t, const Matrix& rho);
Matrix lindblad_rhs(const LambdaModel& m, double t, const DensityMatrix& rho);

/// Fixed-step classic RK4. The step is shrunk slightly so that it divides the
/// window exactly, and to at most length/(samples - 1). rho is re-Hermitised after every step; trace is checked at
/// every step and positivity and population bounds at every recorded sample.
/// Throws NumericalError naming the step and the quantity on a breach.
Trajectory propagate(const Generator& gen, const DensityMatrix& rho0, const TimeWindow& w,
                     const PropagationOptions& opts = {});
Trajectory propagate(const LambdaModel& m, const DensityMatrix& rho0, const TimeWindow& w,
                     const PropagationOptions& opts = {});

/// Repeats propagate with dt halved until the final populations move by less
/// than `tol` (or `max_halvings` is reached, which throws NumericalError).
Trajectory propagate_converged(const Generator& gen, const DensityMatrix& rho0, const TimeWindow& w,
                               double tol = 1e-8, int max_halvings = 8, const PropagationOptions& opts = {});

/// Time at which the sigmoid writing pulse puts probability p of the dark state on |s,0>:
/// t(p) = T log(p |omega0| / sqrt(p (1 - p)) - 1).
/// Throws ArgumentError("pulse too weak for requested adiabatic overlap") when the log argument is <= 0.
double adiabatic_time(double omega0, double T, double p);

/// [t(p_lo) - 2T, t(p_hi) + 2T] with dt = min(T, 1)/200.
TimeWindow adiabatic_window(double omega0, double T, double p_lo = 0.001, double p_hi = 0.999);

/// Default step for a window: dt = min(T, 1)/200.
double default_step(double T);

/// |lambda dt| well inside RK4's stability interval (~2.8 on the imaginary axis).
inline constexpr double kStabilityFraction = 0.5;

/// fraction / (bound B on the Liouvillian spectral radius over [t0, t1]).
double stable_step(const Generator& gen, double t0, double t1, double fraction = kStabilityFraction);

/// RK4 shifts the relative phases of the fast bright/dark coherences by O((B dt)^5) per step.
/// Over a window of length L the drift shows up as negative eigenvalues of roughly
/// 0.3 (B dt)^4 L / B^2 (the initial bright content falls like 1/B^2). The step keeps
/// (B dt)^4 L / B^2 <= kPhaseBudget, with B dt capped at kMaxStepFraction.
/// Non-adiabatic passages leave extra bright content; callers halve the step on a breach.
inline constexpr double kPhaseBudget = 1e-7;
inline constexpr double kMaxStepFraction = 0.06;

double accurate_step(const Generator& gen, double t0, double t1);

} // namespace lambda_memory
