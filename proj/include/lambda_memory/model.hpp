#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lambda_memory/state_algebra.hpp"

namespace lambda_memory {

/// Dressed-state basis, fixed across the whole code base and every file output.
enum class BasisState : int {
    g1 = 0, ///< |g,1>  ground state, one signal photon
    s0 = 1, ///< |s,0>  metastable state, no photon
    e0 = 2, ///< |e,0>  excited state, no photon
    g0 = 3, ///< |g,0>  ground state dressed with vacuum (only with cavity / population decay)
};

constexpr int index(BasisState b) { return static_cast<int>(b); }

enum class AtomicLevel : int { g = 0, s = 1, e = 2 };

char level_name(AtomicLevel level);
AtomicLevel parse_level(char c);

struct SigmoidPulse {
    double omega0;
    double T;
    bool reversed = false;
};

struct GaussianPulse {
    double omega0;
    double center;
    double width;
};

struct ConstantPulse {
    double omega;
};

/// Control-field Rabi frequency Omega(t) in units of g.
///
/// Sigmoid:  omega0 / (1 + exp(t/T)), mirrored in t when reversed.
/// Gaussian: omega0 * exp(-((t - center)/width)^2).
class PulseShape {
public:
    using Variant = std::variant<SigmoidPulse, GaussianPulse, ConstantPulse>;

    static PulseShape sigmoid(double omega0, double T, bool reversed = false);
    static PulseShape gaussian(double omega0, double center, double width);
    /// Gaussian whose standard deviation is `sigma`: width = sqrt(2) * sigma.
    static PulseShape gaussian_std(double omega0, double center, double sigma);
    static PulseShape constant(double omega);

    const Variant& shape() const { return shape_; }
    double value(double t) const;
    /// Largest value on [t0, t1].
    double max_on(double t0, double t1) const;
    /// Same shape mirrored in time about t = 0 (sigmoid) or its center (Gaussian).
    PulseShape time_reversed() const;
    /// Pulse amplitude scale: omega0, or omega for a constant pulse.
    double peak() const;

private:
    explicit PulseShape(Variant v) : shape_(v) {}
    Variant shape_;
};

double pulse_value(const PulseShape& p, double t);

/// Dephasing (i == j) and population-decay (j -> i) rates plus cavity field decay, in units of g.
class DecayRates {
public:
    DecayRates() = default;

    /// Sets gamma_ij. Upward transitions (g->e, s->e, g->s) are rejected.
    DecayRates& set(AtomicLevel i, AtomicLevel j, double rate);
    DecayRates& set_kappa(double kappa);

    double gamma(AtomicLevel i, AtomicLevel j) const
    {
        return gamma_[static_cast<int>(i)][static_cast<int>(j)];
    }
    double kappa() const { return kappa_; }

    bool any_population_decay() const;
    bool all_zero() const;

private:
    std::array<std::array<double, 3>, 3> gamma_{};
    double kappa_ = 0.0;
};

struct ModelParams {
    double Delta = 0.0; ///< one-photon detuning
    double delta = 0.0; ///< two-photon detuning
    PulseShape pulse = PulseShape::sigmoid(100.0, 10.0);
    DecayRates decay{};
    /// Unset: |g,0> is included exactly when a decay channel needs it.
    /// true forces it in; false with such a channel is a configuration error.
    std::optional<bool> include_vacuum{};
};

/// Time-dependent Lindblad generator on a small Hilbert space:
/// H(t) = static_part + sum_k amplitude_k(t) * coupling_k, plus fixed jump operators.
struct Generator {
    struct Drive {
        Matrix coupling;
        PulseShape amplitude;
    };

    int dim = 0;
    Matrix static_part;
    std::vector<Drive> drives;
    std::vector<Matrix> jumps;

    void hamiltonian(double t, Matrix& out) const;
    /// Bound on the spectral radius of H(t) over [t0, t1].
    double frequency_bound(double t0, double t1) const;
};

/// Single Lambda system in a cavity, truncated to one excitation, with g = 1.
class LambdaModel {
public:
    /// Throws ConfigError when the decay channels need |g,0> but it is excluded,
    /// or when rates are invalid.
    explicit LambdaModel(ModelParams params);

    double g() const { return 1.0; }
    double Delta() const { return params_.Delta; }
    double delta() const { return params_.delta; }
    const PulseShape& pulse() const { return params_.pulse; }
    const DecayRates& decay() const { return params_.decay; }
    bool include_vacuum() const { return include_vacuum_; }
    int dim() const { return include_vacuum_ ? 4 : 3; }
    const ModelParams& params() const { return params_; }

    LambdaModel with_pulse(const PulseShape& p) const;
    LambdaModel with_detuning(double Delta) const;
    LambdaModel with_decay(const DecayRates& d) const;

    ComplexOperator hamiltonian(double t) const;
    std::vector<ComplexOperator> jump_operators() const;
    Generator generator() const;

private:
    ModelParams params_;
    bool include_vacuum_ = false;
};

ComplexOperator hamiltonian(const LambdaModel& m, double t);
std::vector<ComplexOperator> jump_operators(const LambdaModel& m);

/// Column name used for each basis state in CSV outputs.
std::string basis_column(BasisState b);

} // namespace lambda_memory
