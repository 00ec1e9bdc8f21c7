#include "lambda_memory/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "lambda_memory/errors.hpp"
#include "lambda_memory/parallel.hpp"

namespace lambda_memory {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLowOverlap = 0.001;
constexpr double kHighOverlap = 0.999;

// Omega within 0.1% of its limiting value in sigmoid units of T.
const double kSaturation = std::log(999.0);

struct Span {
    double t0;
    double t1;
    double scale; ///< characteristic time of the pulse
};

Span writing_span(const PulseShape& pulse)
{
    if (const auto* s = std::get_if<SigmoidPulse>(&pulse.shape())) {
        if (s->reversed) {
            throw ArgumentError("writing needs a decreasing control pulse; got a reversed sigmoid");
        }
        double lo;
        double hi;
        try {
            lo = adiabatic_time(s->omega0, s->T, kLowOverlap);
        } catch (const ArgumentError&) {
            lo = -kSaturation * s->T;
        }
        try {
            hi = adiabatic_time(s->omega0, s->T, kHighOverlap);
        } catch (const ArgumentError&) {
            hi = kSaturation * s->T;
        }
        return {lo - 2.0 * s->T, hi + 2.0 * s->T, s->T};
    }
    if (const auto* gp = std::get_if<GaussianPulse>(&pulse.shape())) {
        const double omega_end = std::sqrt((1.0 - kHighOverlap) / kHighOverlap);
        const double reach = gp->omega0 > omega_end ? std::sqrt(std::log(gp->omega0 / omega_end)) : 1.0;
        return {gp->center, gp->center + (reach + 2.0) * gp->width, gp->width};
    }
    throw ConfigError("a constant control pulse has no natural memory window; pass an explicit window");
}

// Automatic windows get up to this many step halvings when a trajectory breaches an
// invariant bound; an explicit window is used as given.
constexpr int kBreachHalvings = 3;

EfficiencyResult run_memory(const LambdaModel& m, EfficiencyKind kind, const EfficiencyOptions& opts,
                            const TimeWindow& window, bool automatic)
{
    const auto start = kind == EfficiencyKind::writing ? BasisState::g1 : BasisState::s0;
    const auto target = kind == EfficiencyKind::writing ? BasisState::s0 : BasisState::g1;
    const DensityMatrix rho0 = DensityMatrix::basis_state(index(start), m.dim());
    const Generator gen = m.generator();

    auto attempt = [&](const TimeWindow& w) {
        return opts.refine ? propagate_converged(gen, rho0, w, 1e-8, 8, opts.propagation)
                           : propagate(gen, rho0, w, opts.propagation);
    };
    std::optional<Trajectory> traj;
    TimeWindow w = window;
    for (int k = 0; !traj; ++k) {
        try {
            traj = attempt(w);
        } catch (const NumericalError&) {
            if (!automatic || k == kBreachHalvings || w.length() / w.dt() * 2.0 > TimeWindow::kMaxSteps) {
                throw;
            }
            w = w.with_dt(0.5 * w.dt());
        }
    }
    const double eta = traj->final_state(index(target), index(target)).real();
    EfficiencyResult out{eta, kind, std::nullopt};
    if (opts.keep_trajectory) {
        out.trajectory = std::move(traj);
    }
    return out;
}

LambdaModel reading_model(const LambdaModel& m)
{
    if (const auto* s = std::get_if<SigmoidPulse>(&m.pulse().shape())) {
        return s->reversed ? m : m.with_pulse(m.pulse().time_reversed());
    }
    return m;
}

std::string describe_cell(const std::string& a, double x, const std::string& b, double y, const char* what)
{
    std::ostringstream os;
    os.precision(12);
    os << a << "=" << x << ", " << b << "=" << y << ": " << what;
    return os.str();
}

} // namespace

std::string to_string(EfficiencyKind kind)
{
    return kind == EfficiencyKind::writing ? "writing" : "reading";
}

EfficiencyKind parse_efficiency_kind(const std::string& name)
{
    if (name == "writing") {
        return EfficiencyKind::writing;
    }
    if (name == "reading") {
        return EfficiencyKind::reading;
    }
    throw ArgumentError("unknown efficiency kind '" + name + "' (expected writing or reading)");
}

int default_workers()
{
    if (const char* env = std::getenv("LAMBDA_MEM_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<int>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

TimeWindow memory_window(const LambdaModel& m, EfficiencyKind kind)
{
    Span span;
    if (kind == EfficiencyKind::writing) {
        span = writing_span(m.pulse());
    } else {
        // reading runs the writing process backwards in time
        const PulseShape mirror = reading_model(m).pulse().time_reversed();
        const Span w = writing_span(mirror);
        span = {-w.t1, -w.t0, w.scale};
    }
    const LambdaModel& driven = kind == EfficiencyKind::writing ? m : reading_model(m);
    const double dt = std::min(default_step(span.scale), accurate_step(driven.generator(), span.t0, span.t1));
    return {span.t0, span.t1, dt};
}

EfficiencyResult writing_efficiency(const LambdaModel& m, const EfficiencyOptions& opts)
{
    return run_memory(m, EfficiencyKind::writing, opts, opts.window.value_or(memory_window(m, EfficiencyKind::writing)),
                      !opts.window);
}

EfficiencyResult reading_efficiency(const LambdaModel& m, const EfficiencyOptions& opts)
{
    return run_memory(reading_model(m), EfficiencyKind::reading, opts,
                      opts.window.value_or(memory_window(m, EfficiencyKind::reading)), !opts.window);
}

EfficiencyResult efficiency(const LambdaModel& m, EfficiencyKind kind, const EfficiencyOptions& opts)
{
    return kind == EfficiencyKind::writing ? writing_efficiency(m, opts) : reading_efficiency(m, opts);
}

SweepResult efficiency_sweep(const LambdaModel& base, std::span<const double> omega0s, std::span<const double> Ts,
                             EfficiencyKind kind, int workers)
{
    if (omega0s.empty() || Ts.empty()) {
        throw ArgumentError("sweep grids must be non-empty");
    }
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!std::all_of(omega0s.begin(), omega0s.end(), positive) || !std::all_of(Ts.begin(), Ts.end(), positive)) {
        throw ArgumentError("sweep grid values must be positive");
    }
    if (const auto* s = std::get_if<SigmoidPulse>(&base.pulse().shape()); s == nullptr) {
        throw ArgumentError("efficiency sweeps vary a sigmoid control pulse");
    }

    const std::size_t n1 = omega0s.size();
    const std::size_t n2 = Ts.size();
    SweepResult out{"omega0", "T", {omega0s.begin(), omega0s.end()}, {Ts.begin(), Ts.end()},
                    Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2), kNaN),
                    {}};
    std::vector<std::string> cell_warnings(n1 * n2);

    parallel_for(n1 * n2, workers, [&](std::size_t cell) {
        const std::size_t i = cell / n2;
        const std::size_t j = cell % n2;
        try {
            const LambdaModel m = base.with_pulse(PulseShape::sigmoid(omega0s[i], Ts[j]));
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = efficiency(m, kind).eta;
        } catch (const std::exception& e) {
            cell_warnings[cell] = describe_cell("omega0", omega0s[i], "T", Ts[j], e.what());
        }
    });
    for (auto& w : cell_warnings) {
        if (!w.empty()) {
            out.warnings.push_back(std::move(w));
        }
    }
    return out;
}

std::vector<double> dephasing_sensitivity(const LambdaModel& base, AtomicLevel i, AtomicLevel j,
                                          std::span<const double> rates, int workers)
{
    for (std::size_t k = 0; k < rates.size(); ++k) {
        if (!(rates[k] >= 0.0) || (k > 0 && rates[k] < rates[k - 1])) {
            throw ArgumentError("dephasing rates must be >= 0 and ascending");
        }
    }
    // validate the channel once before fanning out
    DecayRates probe = base.decay();
    probe.set(i, j, rates.empty() ? 0.0 : rates.back());
    (void)base.with_decay(probe);

    std::vector<double> out(rates.size(), kNaN);
    std::vector<std::string> errors(rates.size());
    parallel_for(rates.size(), workers, [&](std::size_t k) {
        try {
            DecayRates d = base.decay();
            d.set(i, j, rates[k]);
            out[k] = writing_efficiency(base.with_decay(d)).eta;
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    });
    for (std::size_t k = 0; k < errors.size(); ++k) {
        if (!errors[k].empty()) {
            throw NumericalError("dephasing sensitivity at rate " + std::to_string(rates[k]) + ": " + errors[k]);
        }
    }
    return out;
}

double half_width_half_max(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 3) {
        throw ArgumentError("half width needs matching x/y with at least 3 points");
    }
    const auto peak_it = std::max_element(y.begin(), y.end());
    const std::size_t p = static_cast<std::size_t>(peak_it - y.begin());
    const double half = 0.5 * *peak_it;

    auto crossing = [&](std::size_t inner, std::size_t outer) {
        return x[inner] + (half - y[inner]) * (x[outer] - x[inner]) / (y[outer] - y[inner]);
    };

    std::optional<double> right;
    for (std::size_t k = p + 1; k < y.size(); ++k) {
        if (y[k] < half) {
            right = crossing(k - 1, k);
            break;
        }
    }
    std::optional<double> left;
    for (std::size_t k = p; k-- > 0;) {
        if (y[k] < half) {
            left = crossing(k + 1, k);
            break;
        }
    }
    if (!right || !left) {
        throw ArgumentError("widen detuning grid: efficiency never drops below half maximum on both sides");
    }
    return 0.5 * ((*right - x[p]) + (x[p] - *left));
}

AbsorptionCurve detuning_scan(const LambdaModel& base, std::span<const double> detunings, int workers)
{
    if (!std::is_sorted(detunings.begin(), detunings.end())) {
        throw ArgumentError("detuning grid must be ascending");
    }
    std::vector<double> eff(detunings.size(), kNaN);
    std::vector<std::string> errors(detunings.size());
    parallel_for(detunings.size(), workers, [&](std::size_t k) {
        try {
            eff[k] = writing_efficiency(base.with_detuning(detunings[k])).eta;
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    });
    for (std::size_t k = 0; k < errors.size(); ++k) {
        if (!errors[k].empty()) {
            throw NumericalError("detuning scan at Delta = " + std::to_string(detunings[k]) + ": " + errors[k]);
        }
    }
    const auto peak_it = std::max_element(eff.begin(), eff.end());
    const std::size_t p = static_cast<std::size_t>(peak_it - eff.begin());
    const double hwhm = half_width_half_max(detunings, eff);
    return {{detunings.begin(), detunings.end()}, std::move(eff), hwhm, *peak_it, detunings[p]};
}

double bandwidth_physical(double sigma, double g_phys, double omega_ge, BandwidthMode mode)
{
    if (!(sigma > 0.0) || !(g_phys > 0.0) || !(omega_ge > 0.0)) {
        throw ArgumentError("bandwidth inputs must be positive");
    }
    if (mode == BandwidthMode::simplified) {
        return g_phys * sigma;
    }
    const double c2s2 = g_phys * g_phys * sigma * sigma / omega_ge;
    return 0.5 * (c2s2 + std::sqrt(c2s2 * c2s2 + 4.0 * c2s2 * omega_ge));
}

double stirap_transfer(double omega0, double tau)
{
    if (!(omega0 >= 0.0) || !std::isfinite(omega0) || !std::isfinite(tau)) {
        throw ArgumentError("benchmark needs finite omega0 >= 0 and finite tau");
    }
    if (omega0 == 0.0) {
        return 0.0;
    }
    constexpr int g = 0;
    constexpr int s = 1;
    constexpr int e = 2;
    Generator gen;
    gen.dim = 3;
    gen.static_part = Matrix::Zero(3, 3);
    Matrix pump = Matrix::Zero(3, 3);
    pump(g, e) = pump(e, g) = 1.0;
    Matrix stokes = Matrix::Zero(3, 3);
    stokes(s, e) = stokes(e, s) = 1.0;
    gen.drives.push_back({std::move(pump), PulseShape::gaussian(omega0, 0.5 * tau, 1.0)});
    gen.drives.push_back({std::move(stokes), PulseShape::gaussian(omega0, -0.5 * tau, 1.0)});

    const double half = 6.0 + 0.5 * std::abs(tau);
    const double dt = std::min(1.0 / 200.0, accurate_step(gen, -half, half));
    const Trajectory traj = propagate(gen, DensityMatrix::basis_state(g, 3), TimeWindow(-half, half, dt));
    return traj.final_state(s, s).real();
}

SweepResult stirap_benchmark(std::span<const double> omega0s, std::span<const double> taus, int workers)
{
    if (omega0s.empty() || taus.empty()) {
        throw ArgumentError("benchmark grids must be non-empty");
    }
    const std::size_t n1 = omega0s.size();
    const std::size_t n2 = taus.size();
    SweepResult out{"omega0", "tau", {omega0s.begin(), omega0s.end()}, {taus.begin(), taus.end()},
                    Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2), kNaN),
                    {}};
    std::vector<std::string> cell_warnings(n1 * n2);
    parallel_for(n1 * n2, workers, [&](std::size_t cell) {
        const std::size_t i = cell / n2;
        const std::size_t j = cell % n2;
        try {
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = stirap_transfer(omega0s[i], taus[j]);
        } catch (const std::exception& e) {
            cell_warnings[cell] = describe_cell("omega0", omega0s[i], "tau", taus[j], e.what());
        }
    });
    for (auto& w : cell_warnings) {
        if (!w.empty()) {
            out.warnings.push_back(std::move(w));
        }
    }
    return out;
}

std::vector<double> log_grid(double lo, double hi, int points)
{
    if (!(lo > 0.0) || !(hi >= lo) || points < 1) {
        throw ArgumentError("log grid needs 0 < lo <= hi and points >= 1");
    }
    if (points == 1) {
        return {lo};
    }
    std::vector<double> out(static_cast<std::size_t>(points));
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int k = 0; k < points; ++k) {
        out[static_cast<std::size_t>(k)] = std::pow(10.0, a + (b - a) * k / (points - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> linear_grid(double lo, double hi, int points)
{
    if (!(hi >= lo) || points < 1 || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw ArgumentError("linear grid needs lo <= hi and points >= 1");
    }
    if (points == 1) {
        return {lo};
    }
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        out[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (points - 1);
    }
    out.back() = hi;
    return out;
}

} // namespace lambda_memory
