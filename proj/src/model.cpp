#include "lambda_memory/model.hpp"

#include <algorithm>
#include <cmath>

#include "lambda_memory/errors.hpp"

namespace lambda_memory {

namespace {

void require_finite_positive(double v, const char* what)
{
    if (!std::isfinite(v) || v <= 0.0) {
        throw ArgumentError(std::string(what) + " must be finite and > 0");
    }
}

double row_sum_norm(const Matrix& m)
{
    return m.rows() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

char level_name(AtomicLevel level)
{
    switch (level) {
    case AtomicLevel::g: return 'g';
    case AtomicLevel::s: return 's';
    case AtomicLevel::e: return 'e';
    }
    return '?';
}

AtomicLevel parse_level(char c)
{
    switch (c) {
    case 'g': return AtomicLevel::g;
    case 's': return AtomicLevel::s;
    case 'e': return AtomicLevel::e;
    default: throw ArgumentError(std::string("unknown atomic level '") + c + "'");
    }
}

PulseShape PulseShape::sigmoid(double omega0, double T, bool reversed)
{
    require_finite_positive(omega0, "sigmoid omega0");
    require_finite_positive(T, "sigmoid T");
    return PulseShape(SigmoidPulse{omega0, T, reversed});
}

PulseShape PulseShape::gaussian(double omega0, double center, double width)
{
    require_finite_positive(omega0, "gaussian omega0");
    require_finite_positive(width, "gaussian width");
    if (!std::isfinite(center)) {
        throw ArgumentError("gaussian center must be finite");
    }
    return PulseShape(GaussianPulse{omega0, center, width});
}

PulseShape PulseShape::gaussian_std(double omega0, double center, double sigma)
{
    require_finite_positive(sigma, "gaussian sigma");
    return gaussian(omega0, center, std::sqrt(2.0) * sigma);
}

PulseShape PulseShape::constant(double omega)
{
    if (!std::isfinite(omega)) {
        throw ArgumentError("constant pulse value must be finite");
    }
    return PulseShape(ConstantPulse{omega});
}

double PulseShape::value(double t) const
{
    if (!std::isfinite(t)) {
        throw ArgumentError("pulse evaluated at non-finite time");
    }
    return std::visit(overloaded{
                          [t](const SigmoidPulse& p) {
                              const double x = p.reversed ? -t / p.T : t / p.T;
                              // exp overflows to inf for large x, giving the correct 0 limit
                              return p.omega0 / (1.0 + std::exp(x));
                          },
                          [t](const GaussianPulse& p) {
                              const double u = (t - p.center) / p.width;
                              return p.omega0 * std::exp(-u * u);
                          },
                          [](const ConstantPulse& p) { return p.omega; },
                      },
                      shape_);
}

double PulseShape::max_on(double t0, double t1) const
{
    if (const auto* gp = std::get_if<GaussianPulse>(&shape_)) {
        if (gp->center >= t0 && gp->center <= t1) {
            return gp->omega0;
        }
    }
    return std::max(std::abs(value(t0)), std::abs(value(t1)));
}

PulseShape PulseShape::time_reversed() const
{
    return std::visit(overloaded{
                          [](const SigmoidPulse& p) { return PulseShape(SigmoidPulse{p.omega0, p.T, !p.reversed}); },
                          [](const GaussianPulse& p) {
                              return PulseShape(GaussianPulse{p.omega0, -p.center, p.width});
                          },
                          [](const ConstantPulse& p) { return PulseShape(p); },
                      },
                      shape_);
}

double PulseShape::peak() const
{
    return std::visit(overloaded{
                          [](const SigmoidPulse& p) { return p.omega0; },
                          [](const GaussianPulse& p) { return p.omega0; },
                          [](const ConstantPulse& p) { return std::abs(p.omega); },
                      },
                      shape_);
}

double pulse_value(const PulseShape& p, double t)
{
    return p.value(t);
}

DecayRates& DecayRates::set(AtomicLevel i, AtomicLevel j, double rate)
{
    if (!std::isfinite(rate) || rate < 0.0) {
        throw ConfigError("decay rates must be finite and >= 0");
    }
    // gamma_ij drives j -> i; upward means the target lies above the source.
    const bool upward = (i == AtomicLevel::e && j != AtomicLevel::e) || (i == AtomicLevel::s && j == AtomicLevel::g);
    if (upward && rate > 0.0) {
        throw ConfigError(std::string("spontaneous excitation channel gamma_") + level_name(i) + level_name(j) +
                          " is not supported");
    }
    gamma_[static_cast<int>(i)][static_cast<int>(j)] = rate;
    return *this;
}

DecayRates& DecayRates::set_kappa(double kappa)
{
    if (!std::isfinite(kappa) || kappa < 0.0) {
        throw ConfigError("cavity decay kappa must be finite and >= 0");
    }
    kappa_ = kappa;
    return *this;
}

bool DecayRates::any_population_decay() const
{
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i != j && gamma_[i][j] > 0.0) {
                return true;
            }
        }
    }
    return false;
}

bool DecayRates::all_zero() const
{
    if (kappa_ > 0.0) {
        return false;
    }
    for (const auto& row : gamma_) {
        for (double r : row) {
            if (r > 0.0) {
                return false;
            }
        }
    }
    return true;
}

void Generator::hamiltonian(double t, Matrix& out) const
{
    out = static_part;
    for (const auto& d : drives) {
        out.noalias() += d.amplitude.value(t) * d.coupling;
    }
}

double Generator::frequency_bound(double t0, double t1) const
{
    double h = row_sum_norm(static_part);
    for (const auto& d : drives) {
        h += d.amplitude.max_on(t0, t1) * row_sum_norm(d.coupling);
    }
    double dissipative = 0.0;
    for (const auto& c : jumps) {
        dissipative += row_sum_norm(c.adjoint() * c);
    }
    return 2.0 * h + dissipative;
}

LambdaModel::LambdaModel(ModelParams params) : params_(std::move(params))
{
    if (!std::isfinite(params_.Delta) || !std::isfinite(params_.delta)) {
        throw ConfigError("detunings must be finite");
    }
    const bool needs_vacuum = params_.decay.kappa() > 0.0 || params_.decay.any_population_decay();
    if (params_.include_vacuum.has_value()) {
        if (!*params_.include_vacuum && needs_vacuum) {
            throw ConfigError(params_.decay.kappa() > 0.0
                                  ? "cavity decay kappa > 0 requires the |g,0> vacuum state"
                                  : "population decay requires the |g,0> vacuum state as target");
        }
        include_vacuum_ = *params_.include_vacuum;
    } else {
        include_vacuum_ = needs_vacuum;
    }
}

LambdaModel LambdaModel::with_pulse(const PulseShape& p) const
{
    ModelParams next = params_;
    next.pulse = p;
    return LambdaModel(next);
}

LambdaModel LambdaModel::with_detuning(double Delta) const
{
    ModelParams next = params_;
    next.Delta = Delta;
    return LambdaModel(next);
}

LambdaModel LambdaModel::with_decay(const DecayRates& d) const
{
    ModelParams next = params_;
    next.decay = d;
    return LambdaModel(next);
}

ComplexOperator LambdaModel::hamiltonian(double t) const
{
    Matrix h;
    generator().hamiltonian(t, h);
    return ComplexOperator(std::move(h));
}

std::vector<ComplexOperator> LambdaModel::jump_operators() const
{
    const int n = dim();
    const int g1 = index(BasisState::g1);
    const int s0 = index(BasisState::s0);
    const int e0 = index(BasisState::e0);
    const int g0 = index(BasisState::g0);
    const auto& d = params_.decay;

    if ((d.kappa() > 0.0 || d.any_population_decay()) && !include_vacuum_) {
        throw ConfigError("decay channel targets |g,0> but the vacuum state is not modelled");
    }

    std::vector<ComplexOperator> ops;
    auto add = [&](double rate, std::initializer_list<std::pair<int, int>> entries) {
        if (rate <= 0.0) {
            return;
        }
        Matrix m = Matrix::Zero(n, n);
        for (auto [r, c] : entries) {
            m(r, c) = std::sqrt(rate);
        }
        ops.emplace_back(std::move(m));
    };

    using L = AtomicLevel;
    // pure dephasing acts on every dressed state carrying the atomic label
    if (include_vacuum_) {
        add(d.gamma(L::g, L::g), {{g1, g1}, {g0, g0}});
    } else {
        add(d.gamma(L::g, L::g), {{g1, g1}});
    }
    add(d.gamma(L::s, L::s), {{s0, s0}});
    add(d.gamma(L::e, L::e), {{e0, e0}});

    // population decay keeps the photon label of the (zero-photon) source
    add(d.gamma(L::g, L::e), {{g0, e0}});
    add(d.gamma(L::s, L::e), {{s0, e0}});
    add(d.gamma(L::g, L::s), {{g0, s0}});

    add(d.kappa(), {{g0, g1}});
    return ops;
}

Generator LambdaModel::generator() const
{
    const int n = dim();
    Generator gen;
    gen.dim = n;
    gen.static_part = Matrix::Zero(n, n);
    const int g1 = index(BasisState::g1);
    const int s0 = index(BasisState::s0);
    const int e0 = index(BasisState::e0);
    gen.static_part(g1, e0) = g();
    gen.static_part(e0, g1) = g();
    gen.static_part(e0, e0) = params_.Delta;
    gen.static_part(s0, s0) = params_.delta;

    Matrix control = Matrix::Zero(n, n);
    control(s0, e0) = 1.0;
    control(e0, s0) = 1.0;
    gen.drives.push_back({std::move(control), params_.pulse});

    for (const auto& op : jump_operators()) {
        gen.jumps.push_back(op.matrix());
    }
    return gen;
}

ComplexOperator hamiltonian(const LambdaModel& m, double t)
{
    return m.hamiltonian(t);
}

std::vector<ComplexOperator> jump_operators(const LambdaModel& m)
{
    return m.jump_operators();
}

std::string basis_column(BasisState b)
{
    switch (b) {
    case BasisState::g1: return "pop_g1";
    case BasisState::s0: return "pop_s0";
    case BasisState::e0: return "pop_e0";
    case BasisState::g0: return "pop_g0";
    }
    return "pop_unknown";
}

} // namespace lambda_memory
