#include "lambda_memory/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>

#include "lambda_memory/errors.hpp"

namespace lambda_memory {

namespace {

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

struct Workspace {
    Matrix h;
    Matrix h_eff;
    Matrix k1, k2, k3, k4, tmp;
};

class RhsEvaluator {
public:
    explicit RhsEvaluator(const Generator& gen) : gen_(gen)
    {
        const int n = gen.dim;
        decay_sum_ = Matrix::Zero(n, n);
        for (const auto& c : gen.jumps) {
            decay_sum_.noalias() += c.adjoint() * c;
            jumps_adj_.push_back(c.adjoint());
        }
    }

    void operator()(double t, const Matrix& rho, Matrix& out, Workspace& ws) const
    {
        gen_.hamiltonian(t, ws.h);
        ws.h_eff = ws.h - Complex(0.0, 0.5) * decay_sum_;
        // -i (H_eff rho - rho H_eff^+) + sum C rho C^+
        out.noalias() = ws.h_eff * rho;
        out.noalias() -= rho * ws.h_eff.adjoint();
        out *= Complex(0.0, -1.0);
        for (std::size_t k = 0; k < gen_.jumps.size(); ++k) {
            out.noalias() += gen_.jumps[k] * rho * jumps_adj_[k];
        }
    }

private:
    const Generator& gen_;
    Matrix decay_sum_;
    std::vector<Matrix> jumps_adj_;
};

[[noreturn]] void fail(long step, double t, const std::string& what)
{
    std::ostringstream os;
    os << "propagation failed at step " << step << " (t = " << t << "): " << what;
    throw NumericalError(os.str());
}

} // namespace

TimeWindow::TimeWindow(double t_start, double t_end, double dt) : t_start_(t_start), t_end_(t_end), dt_(dt)
{
    if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_start < t_end)) {
        throw ArgumentError("time window needs finite t_start < t_end");
    }
    if (!std::isfinite(dt) || dt <= 0.0) {
        throw ArgumentError("time step must be finite and > 0");
    }
    if ((t_end - t_start) / dt > kMaxSteps) {
        throw ArgumentError("time window needs more than 1e7 steps");
    }
}

Matrix lindblad_rhs(const Generator& gen, double t, const Matrix& rho)
{
    if (rho.rows() != gen.dim || rho.cols() != gen.dim) {
        throw ArgumentError("density matrix dimension does not match the generator");
    }
    RhsEvaluator rhs(gen);
    Workspace ws;
    Matrix out;
    rhs(t, rho, out, ws);
    return out;
}

Matrix lindblad_rhs(const LambdaModel& m, double t, const DensityMatrix& rho)
{
    return lindblad_rhs(m.generator(), t, rho.matrix());
}

namespace {

/// RK4 loop on fixed-size (N > 0) or dynamic (N = Eigen::Dynamic) matrices.
template <int N>
Trajectory propagate_impl(const Generator& gen, const DensityMatrix& rho0, const TimeWindow& w,
                          const PropagationOptions& opts)
{
    using M = std::conditional_t<N == Eigen::Dynamic, Matrix, Eigen::Matrix<Complex, N, N>>;
    const int n = gen.dim;

    // never fewer steps than output intervals, so every sample lands on a step
    const long samples = opts.samples;
    const long steps = std::max(samples - 1, static_cast<long>(std::ceil(w.length() / w.dt() - 1e-9)));
    const double h = w.length() / static_cast<double>(steps);

    Trajectory traj{{}, Eigen::MatrixXd(samples, n), rho0, 0.0, 0.0};
    traj.times.reserve(static_cast<std::size_t>(samples));

    // C rho C^+ is a Schur product for diagonal C and a single population move for C = c |i><j|;
    // anything else goes through the dense product.
    struct Move {
        int i, j;
        double rate;
    };
    M decay_sum = M::Zero(n, n);
    M schur = M::Zero(n, n);
    bool any_schur = false;
    std::vector<Move> moves;
    std::vector<M> dense, dense_adj;
    for (const auto& c : gen.jumps) {
        decay_sum += M(c.adjoint() * c);
        int nnz = 0, bi = 0, bj = 0;
        bool diagonal = true;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (c(a, b) != Complex(0.0)) {
                    ++nnz;
                    bi = a;
                    bj = b;
                    diagonal = diagonal && a == b;
                }
            }
        }
        if (nnz == 1 && bi != bj) {
            moves.push_back({bi, bj, std::norm(c(bi, bj))});
        } else if (diagonal) {
            const Vector d = c.diagonal();
            schur += M(d * d.adjoint());
            any_schur = true;
        } else {
            dense.push_back(c);
            dense_adj.push_back(c.adjoint());
        }
    }
    const M static_eff = M(gen.static_part) - Complex(0.0, 0.5) * decay_sum;
    std::vector<M> couplings;
    for (const auto& d : gen.drives) {
        couplings.push_back(d.coupling);
    }

    M k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);
    auto build = [&](double t, M& out) {
        out = static_eff;
        for (std::size_t k = 0; k < couplings.size(); ++k) {
            out += gen.drives[k].amplitude.value(t) * couplings[k];
        }
    };
    // r is Hermitian, so r H_eff^+ = (H_eff r)^+
    auto rhs = [&](const M& he, const M& r, M& out) {
        tmp.noalias() = he * r;
        out = Complex(0.0, -1.0) * tmp + Complex(0.0, 1.0) * tmp.adjoint();
        if (any_schur) {
            out += schur.cwiseProduct(r);
        }
        for (const auto& mv : moves) {
            out(mv.i, mv.i) += mv.rate * r(mv.j, mv.j);
        }
        for (std::size_t k = 0; k < dense.size(); ++k) {
            tmp.noalias() = r * dense_adj[k];
            out.noalias() += dense[k] * tmp;
        }
    };

    M rho = rho0.matrix();
    const auto& tol = opts.tolerances;

    long next_sample = 0;
    auto sample_step = [&](long k) {
        // evenly spread sample indices over [0, steps], endpoints included
        return static_cast<long>(std::llround(static_cast<double>(k) * static_cast<double>(steps) /
                                              static_cast<double>(samples - 1)));
    };

    auto record = [&](long step, double t) {
        const RealVector pops = rho.diagonal().real();
        for (int c = 0; c < n; ++c) {
            if (pops(c) < -tol.positivity || pops(c) > 1.0 + tol.positivity) {
                fail(step, t, "population of state " + std::to_string(c) + " = " + sci(pops(c)) +
                                  " left [0, 1]");
            }
            traj.populations(next_sample, c) = pops(c);
        }
        if (opts.check_positivity) {
            const double lo = min_hermitian_eigenvalue(Matrix(rho));
            traj.min_eigenvalue = std::min(traj.min_eigenvalue, lo);
            if (lo < -tol.positivity) {
                fail(step, t, "density matrix lost positivity (min eigenvalue " + sci(lo) + ")");
            }
        }
        traj.times.push_back(t);
        ++next_sample;
    };

    M h_start(n, n), h_mid(n, n), h_end(n, n), y(n, n);
    build(w.t_start(), h_start);
    record(0, w.t_start());
    for (long step = 1; step <= steps; ++step) {
        const double t = w.t_start() + static_cast<double>(step - 1) * h;
        const double t_now = (step == steps) ? w.t_end() : w.t_start() + static_cast<double>(step) * h;
        build(t + 0.5 * h, h_mid);
        build(t_now, h_end);

        rhs(h_start, rho, k1);
        y = rho + (0.5 * h) * k1;
        rhs(h_mid, y, k2);
        y = rho + (0.5 * h) * k2;
        rhs(h_mid, y, k3);
        y = rho + h * k3;
        rhs(h_end, y, k4);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        y = 0.5 * (rho + rho.adjoint());
        rho = y;
        std::swap(h_start, h_end);

        const double terr = std::abs(rho.trace().real() - 1.0);
        if (!(terr <= tol.trace)) {
            fail(step, t_now, "trace error " + sci(terr));
        }
        traj.trace_error = std::max(traj.trace_error, terr);
        while (next_sample < samples && sample_step(next_sample) == step) {
            record(step, t_now);
        }
    }

    try {
        traj.final_state = DensityMatrix(Matrix(rho), tol);
    } catch (const ContractError& e) {
        fail(steps, w.t_end(), e.what());
    }
    return traj;
}

} // namespace

Trajectory propagate(const Generator& gen, const DensityMatrix& rho0, const TimeWindow& w,
                     const PropagationOptions& opts)
{
    if (rho0.dim() != gen.dim) {
        throw ArgumentError("initial state dimension " + std::to_string(rho0.dim()) +
                            " does not match model dimension " + std::to_string(gen.dim));
    }
    if (opts.samples < 2) {
        throw ArgumentError("need at least two output samples");
    }
    switch (gen.dim) {
    case 2: return propagate_impl<2>(gen, rho0, w, opts);
    case 3: return propagate_impl<3>(gen, rho0, w, opts);
    case 4: return propagate_impl<4>(gen, rho0, w, opts);
    default: return propagate_impl<Eigen::Dynamic>(gen, rho0, w, opts);
    }
}

Trajectory propagate(const LambdaModel& m, const DensityMatrix& rho0, const TimeWindow& w,
                     const PropagationOptions& opts)
{
    return propagate(m.generator(), rho0, w, opts);
}

Trajectory propagate_converged(const Generator& gen, const DensityMatrix& rho0, const TimeWindow& w, double tol,
                               int max_halvings, const PropagationOptions& opts)
{
    Trajectory prev = propagate(gen, rho0, w, opts);
    double dt = w.dt();
    for (int k = 0; k < max_halvings; ++k) {
        dt *= 0.5;
        Trajectory next = propagate(gen, rho0, w.with_dt(dt), opts);
        const double change =
            (next.final_state.populations() - prev.final_state.populations()).cwiseAbs().maxCoeff();
        if (change < tol) {
            return next;
        }
        prev = std::move(next);
    }
    throw NumericalError("step halving did not converge within " + std::to_string(max_halvings) + " halvings");
}

double adiabatic_time(double omega0, double T, double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw ArgumentError("adiabatic overlap probability must lie in (0, 1)");
    }
    if (!(T > 0.0)) {
        throw ArgumentError("characteristic time T must be > 0");
    }
    const double arg = p * std::abs(omega0) / std::sqrt(p * (1.0 - p)) - 1.0;
    if (!(arg > 0.0)) {
        throw ArgumentError("pulse too weak for requested adiabatic overlap");
    }
    return T * std::log(arg);
}

double default_step(double T)
{
    return std::min(T, 1.0) / 200.0;
}

TimeWindow adiabatic_window(double omega0, double T, double p_lo, double p_hi)
{
    if (!(p_lo > 0.0 && p_lo < p_hi && p_hi < 1.0)) {
        throw ArgumentError("need 0 < p_lo < p_hi < 1");
    }
    const double t_lo = adiabatic_time(omega0, T, p_lo);
    const double t_hi = adiabatic_time(omega0, T, p_hi);
    return {t_lo - 2.0 * T, t_hi + 2.0 * T, default_step(T)};
}

double stable_step(const Generator& gen, double t0, double t1, double fraction)
{
    const double bound = gen.frequency_bound(t0, t1);
    return bound > 0.0 ? fraction / bound : std::numeric_limits<double>::infinity();
}

double accurate_step(const Generator& gen, double t0, double t1)
{
    const double bound = gen.frequency_bound(t0, t1);
    if (!(bound > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    const double f = std::min(kMaxStepFraction, std::pow(kPhaseBudget * bound * bound / (t1 - t0), 0.25));
    return f / bound;
}

} // namespace lambda_memory
