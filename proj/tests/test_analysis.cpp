#include <doctest.h>

#include <cmath>

#include "lambda_memory/adiabatic.hpp"
#include "lambda_memory/analysis.hpp"
#include "lambda_memory/errors.hpp"

using namespace lambda_memory;

namespace {

LambdaModel sigmoid_model(double omega0, double T, DecayRates d = {})
{
    ModelParams p;
    p.pulse = PulseShape::sigmoid(omega0, T);
    p.decay = d;
    return LambdaModel(p);
}

} // namespace

TEST_CASE("strong slow pulse stores the photon")
{
    const auto m = sigmoid_model(100.0, 10.0);
    const double w = writing_efficiency(m).eta;
    const double r = reading_efficiency(m).eta;
    CHECK(w >= 0.95);
    CHECK(std::abs(w - r) <= 1e-6);
    CHECK(w > writing_efficiency(sigmoid_model(100.0, 0.1)).eta);
}

TEST_CASE("weak fast pulse fails to store")
{
    CHECK(writing_efficiency(sigmoid_model(0.01, 0.01)).eta < 0.5);
}

TEST_CASE("ground-state dephasing costs efficiency")
{
    const double clean = writing_efficiency(sigmoid_model(100.0, 10.0)).eta;
    const double noisy = writing_efficiency(sigmoid_model(100.0, 10.0, DecayRates{}.set(AtomicLevel::g, AtomicLevel::g, 0.1))).eta;
    CHECK(noisy < clean);
}

TEST_CASE("reading and writing reject the wrong direction")
{
    ModelParams p;
    p.pulse = PulseShape::sigmoid(100.0, 10.0, true);
    CHECK_THROWS_AS(writing_efficiency(LambdaModel(p)), ArgumentError);
    p.pulse = PulseShape::constant(1.0);
    CHECK_THROWS_AS(writing_efficiency(LambdaModel(p)), ConfigError);
    CHECK(parse_efficiency_kind("reading") == EfficiencyKind::reading);
    CHECK(to_string(EfficiencyKind::writing) == "writing");
    CHECK_THROWS_AS(parse_efficiency_kind("both"), ArgumentError);
}

TEST_CASE("trajectory is kept on request")
{
    const auto res = writing_efficiency(sigmoid_model(20.0, 2.0), {.keep_trajectory = true});
    REQUIRE(res.trajectory.has_value());
    const auto& tr = *res.trajectory;
    CHECK(tr.populations(tr.populations.rows() - 1, index(BasisState::s0)) == doctest::Approx(res.eta));
    CHECK(tr.trace_error <= 1e-8);
}

TEST_CASE("single-cell sweep matches a direct run")
{
    const double om[] = {20.0};
    const double Ts[] = {2.0};
    const auto s = efficiency_sweep(sigmoid_model(1.0, 1.0), om, Ts, EfficiencyKind::writing);
    CHECK(s.values(0, 0) == writing_efficiency(sigmoid_model(20.0, 2.0)).eta);
    CHECK(s.warnings.empty());
}

TEST_CASE("sweep ordering and failure isolation")
{
    const double om[] = {20.0, 30.0};
    const double Ts[] = {1.0, 1e7};
    const auto a = efficiency_sweep(sigmoid_model(1.0, 1.0), om, Ts, EfficiencyKind::writing, 1);
    const auto b = efficiency_sweep(sigmoid_model(1.0, 1.0), om, Ts, EfficiencyKind::writing, 2);
    CHECK(std::isnan(a.values(0, 1)));
    CHECK(std::isnan(a.values(1, 1)));
    CHECK(a.warnings.size() == 2);
    CHECK(a.values(0, 0) == b.values(0, 0));
    CHECK(a.values(1, 0) == b.values(1, 0));
    CHECK(a.values(0, 0) >= 0.0);
    CHECK(a.axis1_name == "omega0");
    CHECK(a.axis2_name == "T");
    CHECK_THROWS_AS(efficiency_sweep(sigmoid_model(1.0, 1.0), std::span<const double>{}, Ts, EfficiencyKind::writing),
                    ArgumentError);
}

TEST_CASE("dephasing sensitivity")
{
    const double rates[] = {0.0, 0.01, 0.1};
    const auto base = sigmoid_model(50.0, 5.0);
    const auto eta = dephasing_sensitivity(base, AtomicLevel::s, AtomicLevel::s, rates);
    CHECK(eta[0] == writing_efficiency(base).eta);
    CHECK(eta[1] < eta[0]);
    CHECK(eta[2] < eta[1]);
    const double bad[] = {0.1, 0.0};
    CHECK_THROWS_AS(dephasing_sensitivity(base, AtomicLevel::s, AtomicLevel::s, bad), ArgumentError);
    CHECK_THROWS_AS(dephasing_sensitivity(base, AtomicLevel::e, AtomicLevel::g, rates), ConfigError);
}

TEST_CASE("half width on a sampled Lorentzian")
{
    const auto x = linear_grid(-50.0, 50.0, 2001);
    std::vector<double> y;
    for (double v : x) {
        y.push_back(1.0 / (1.0 + std::pow((v - 3.0) / 7.0, 2)));
    }
    CHECK(half_width_half_max(x, y) == doctest::Approx(7.0).epsilon(1e-3));
    const auto narrow = linear_grid(-5.0, 5.0, 11);
    std::vector<double> flat(narrow.size(), 1.0);
    flat[5] = 1.1;
    try {
        half_width_half_max(narrow, flat);
        FAIL("expected a grid error");
    } catch (const ArgumentError& e) {
        CHECK(std::string(e.what()).find("widen detuning grid") != std::string::npos);
    }
}

TEST_CASE("resonant point of a detuning scan is the writing efficiency")
{
    const auto base = sigmoid_model(30.0, 2.0);
    const auto grid = linear_grid(-80.0, 80.0, 5);
    const auto c = detuning_scan(base, grid);
    CHECK(c.efficiencies[2] == writing_efficiency(base).eta);
    CHECK(c.peak_detuning == 0.0);
    CHECK(c.hwhm > 0.0);
    const double unsorted[] = {1.0, 0.0, 2.0};
    CHECK_THROWS_AS(detuning_scan(base, unsorted), ArgumentError);
}

TEST_CASE("physical bandwidth")
{
    CHECK(bandwidth_physical(10.0, 1.6e8, 4.68e15, BandwidthMode::simplified) == doctest::Approx(1.6e9));
    const double g = 1.6e8;
    const double w = 4.68e15;
    for (double sigma : {0.1, 1.0, 10.0, 1e3}) {
        const double b = bandwidth_physical(sigma, g, w, BandwidthMode::full);
        CHECK(std::abs(b / (g * sigma) - 1.0) <= 1e-4);
        // b^2 - C^2 s^2 b - C^2 s^2 w = 0
        const double c2s2 = g * g * sigma * sigma / w;
        CHECK(std::abs(b * b - c2s2 * b - c2s2 * w) <= 1e-10 * b * b);
    }
    CHECK_THROWS_AS(bandwidth_physical(0.0, g, w, BandwidthMode::full), ArgumentError);
}

TEST_CASE("stirap limits")
{
    CHECK(stirap_transfer(0.0, 1.0) == 0.0);
    CHECK(stirap_transfer(1e-3, 1.0) <= 1e-5);
    CHECK(stirap_transfer(25.0, 1.5) > 0.9);
    CHECK_THROWS_AS(stirap_transfer(-1.0, 1.0), ArgumentError);
}

TEST_CASE("grids")
{
    const auto l = log_grid(0.1, 1000.0, 25);
    CHECK(l.size() == 25);
    CHECK(l.front() == 0.1);
    CHECK(l.back() == 1000.0);
    CHECK(l[12] == doctest::Approx(10.0));
    const auto lin = linear_grid(-60.0, 60.0, 121);
    CHECK(lin[60] == 0.0);
    CHECK(lin[1] == doctest::Approx(-59.0));
    CHECK(log_grid(5.0, 5.0, 1) == std::vector<double>{5.0});
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), ArgumentError);
    CHECK_THROWS_AS(linear_grid(1.0, 0.0, 3), ArgumentError);
}

TEST_CASE("photon admixture of the dark state at strong control")
{
    const auto f = adiabatic_basis(1.0, 100.0, 0.0);
    CHECK(std::norm(f.dark(1)) == doctest::Approx(1.0 / (1.0 + 1e4)));
}

TEST_CASE("longer pulses absorb over a wider detuning band")
{
    const auto grid = linear_grid(-40.0, 40.0, 41);
    auto width = [&](double T) {
        ModelParams p;
        p.pulse = PulseShape::gaussian_std(100.0, 0.0, T);
        return detuning_scan(LambdaModel(p), grid).hwhm;
    };
    CHECK(width(10.0) >= width(2.0));
}
