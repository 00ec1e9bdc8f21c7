#include <doctest.h>

#include <cmath>
#include <random>

#include "lambda_memory/adiabatic.hpp"
#include "lambda_memory/errors.hpp"
#include "lambda_memory/model.hpp"

using namespace lambda_memory;

namespace {

constexpr int g1 = index(BasisState::g1);
constexpr int s0 = index(BasisState::s0);
constexpr int e0 = index(BasisState::e0);
constexpr int g0 = index(BasisState::g0);

LambdaModel model_with(double Delta, PulseShape pulse, DecayRates d = {})
{
    ModelParams p;
    p.Delta = Delta;
    p.pulse = pulse;
    p.decay = d;
    return LambdaModel(p);
}

} // namespace

TEST_CASE("sigmoid pulse values")
{
    const auto p = PulseShape::sigmoid(100.0, 10.0);
    CHECK(p.value(0.0) == doctest::Approx(50.0));
    CHECK(p.value(-1e6) == doctest::Approx(100.0));
    CHECK(p.value(1e6) == 0.0);
    CHECK(p.value(10.0) == doctest::Approx(100.0 / (1.0 + std::exp(1.0))));
    const auto r = PulseShape::sigmoid(100.0, 10.0, true);
    CHECK(r.value(10.0) == doctest::Approx(p.value(-10.0)));
    CHECK(p.time_reversed().value(3.0) == doctest::Approx(p.value(-3.0)));
    double prev = p.value(-200.0);
    for (double t = -199.0; t <= 200.0; t += 1.0) {
        const double v = p.value(t);
        CHECK(v <= prev);
        prev = v;
    }
    CHECK_THROWS_AS(p.value(std::nan("")), ArgumentError);
    CHECK_THROWS_AS(PulseShape::sigmoid(0.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(PulseShape::sigmoid(1.0, -1.0), ArgumentError);
}

TEST_CASE("gaussian pulse values")
{
    const auto p = PulseShape::gaussian(2.0, 1.0, 3.0);
    CHECK(p.value(1.0) == doctest::Approx(2.0));
    CHECK(p.value(4.0) == doctest::Approx(2.0 * std::exp(-1.0)));
    const auto s = PulseShape::gaussian_std(1.0, 0.0, 10.0);
    // one standard deviation away the intensity-like exponent is -1/2
    CHECK(s.value(10.0) == doctest::Approx(std::exp(-0.5)));
    CHECK(p.max_on(-5.0, 5.0) == doctest::Approx(2.0));
    CHECK(p.max_on(4.0, 7.0) == doctest::Approx(p.value(4.0)));
    CHECK_THROWS_AS(PulseShape::gaussian(1.0, 0.0, 0.0), ArgumentError);
    CHECK(PulseShape::constant(-3.0).peak() == 3.0);
}

TEST_CASE("hamiltonian entries")
{
    const auto m = model_with(0.7, PulseShape::constant(2.5));
    const auto h = m.hamiltonian(0.0);
    CHECK(h.dim() == 3);
    CHECK(h(g1, e0) == Complex(1.0));
    CHECK(h(e0, g1) == Complex(1.0));
    CHECK(h(s0, e0) == Complex(2.5));
    CHECK(h(e0, s0) == Complex(2.5));
    CHECK(h(e0, e0) == Complex(0.7));
    CHECK(h(g1, s0) == Complex(0.0));
    CHECK(h(g1, g1) == Complex(0.0));
    CHECK(h(s0, s0) == Complex(0.0));

    ModelParams p;
    p.delta = 0.2;
    p.include_vacuum = true;
    const LambdaModel v(p);
    const auto hv = v.hamiltonian(1.0);
    CHECK(hv.dim() == 4);
    CHECK(hv(s0, s0) == Complex(0.2));
    for (int k = 0; k < 4; ++k) {
        CHECK(hv(g0, k) == Complex(0.0));
    }
}

TEST_CASE("hamiltonian is Hermitian and annihilates the dark state")
{
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> om(0.0, 1000.0);
    std::uniform_real_distribution<double> de(-100.0, 100.0);
    std::uniform_real_distribution<double> tt(-500.0, 500.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto m = model_with(de(rng), PulseShape::sigmoid(om(rng) + 1e-3, 10.0));
        const double t = tt(rng);
        const auto h = m.hamiltonian(t);
        CHECK(h.is_hermitian(0.0));
        const double omega = m.pulse().value(t);
        const auto fr = adiabatic_basis(1.0, omega, m.Delta());
        const Vector out = h.matrix() * Vector(fr.dark);
        CHECK(out.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, omega));
    }
}

TEST_CASE("no decay means no jump operators and three states")
{
    const LambdaModel m(ModelParams{});
    CHECK(m.dim() == 3);
    CHECK(m.jump_operators().empty());
}

TEST_CASE("cavity decay operator")
{
    const auto m = model_with(0.0, PulseShape::constant(1.0), DecayRates{}.set_kappa(0.01));
    CHECK(m.dim() == 4);
    const auto ops = m.jump_operators();
    REQUIRE(ops.size() == 1);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double want = (i == g0 && j == g1) ? 0.1 : 0.0;
            CHECK(std::abs(ops[0](i, j) - want) <= 1e-15);
        }
    }
}

TEST_CASE("dephasing operators act on every state with the atomic label")
{
    const DecayRates d = DecayRates{}.set(AtomicLevel::g, AtomicLevel::g, 0.04);
    const auto m3 = model_with(0.0, PulseShape::constant(1.0), d);
    auto ops = m3.jump_operators();
    REQUIRE(ops.size() == 1);
    CHECK(ops[0](g1, g1) == Complex(0.2));
    CHECK(max_abs(ops[0].matrix()) == doctest::Approx(0.2));

    ModelParams p;
    p.decay = d;
    p.include_vacuum = true;
    ops = LambdaModel(p).jump_operators();
    REQUIRE(ops.size() == 1);
    CHECK(ops[0](g1, g1) == Complex(0.2));
    CHECK(ops[0](g0, g0) == Complex(0.2));
    CHECK(ops[0](s0, s0) == Complex(0.0));
}

TEST_CASE("population decay lands in the vacuum-dressed ground state")
{
    const DecayRates d = DecayRates{}.set(AtomicLevel::g, AtomicLevel::e, 0.25).set(AtomicLevel::s, AtomicLevel::e, 0.09);
    const auto m = model_with(0.0, PulseShape::constant(1.0), d);
    CHECK(m.dim() == 4);
    const auto ops = m.jump_operators();
    REQUIRE(ops.size() == 2);
    CHECK(ops[0](g0, e0) == Complex(0.5));
    CHECK(ops[1](s0, e0) == Complex(0.3));
}

TEST_CASE("invalid decay configuration")
{
    CHECK_THROWS_AS(DecayRates{}.set(AtomicLevel::e, AtomicLevel::g, 0.1), ConfigError);
    CHECK_THROWS_AS(DecayRates{}.set(AtomicLevel::s, AtomicLevel::g, 0.1), ConfigError);
    CHECK_THROWS_AS(DecayRates{}.set(AtomicLevel::g, AtomicLevel::g, -0.1), ConfigError);
    CHECK_THROWS_AS(DecayRates{}.set_kappa(std::nan("")), ConfigError);
    CHECK_NOTHROW(DecayRates{}.set(AtomicLevel::e, AtomicLevel::g, 0.0));

    ModelParams p;
    p.decay.set_kappa(0.1);
    p.include_vacuum = false;
    CHECK_THROWS_AS(LambdaModel{p}, ConfigError);
    p.decay = DecayRates{}.set(AtomicLevel::g, AtomicLevel::s, 0.1);
    CHECK_THROWS_AS(LambdaModel{p}, ConfigError);
    p.decay = DecayRates{}.set(AtomicLevel::s, AtomicLevel::s, 0.1);
    CHECK_NOTHROW(LambdaModel{p});
}

TEST_CASE("level names round-trip")
{
    for (char c : {'g', 's', 'e'}) {
        CHECK(level_name(parse_level(c)) == c);
    }
    CHECK_THROWS_AS(parse_level('x'), ArgumentError);
    CHECK(basis_column(BasisState::g1) != basis_column(BasisState::s0));
}
