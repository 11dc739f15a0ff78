#include "dtdr/error.hpp"
#include "dtdr/kernel.hpp"
#include "dtdr/simulate.hpp"

#include "helpers.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>

using namespace dtdr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// 5-point Gauss-Legendre on [a, b].
template <typename F>
double gauss5(F&& f, double a, double b)
{
    static constexpr std::array<double, 5> x{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                             0.9061798459386640};
    static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                             0.2369268850561891, 0.2369268850561891};
    const double m = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        s += w[i] * f(m + r * x[i]);
    return s * r;
}

double area_on(const layer_config& l, double a, double b, int panels)
{
    double s = 0.0;
    const double dt = (b - a) / panels;
    for (int k = 0; k < panels; ++k)
        s += gauss5([&](double t) { return impulse_response(l, t); }, a + k * dt, a + (k + 1) * dt);
    return s;
}

// Separate panel sets for the fast spike and the slow tail.
double kernel_area(const layer_config& l, double t_end, int panels)
{
    const double split = std::min(60.0 * l.tau_fast, t_end);
    double s = area_on(l, 0.0, split, panels);
    if (t_end > split)
        s += area_on(l, split, t_end, panels);
    return s;
}

layer_config with_dynamics(double tau, double delta)
{
    layer_config l;
    l.tau_fast = tau;
    l.delta_slow = delta;
    return l;
}

} // namespace

TEST_CASE("low-pass kernel is a normalized exponential", "[kernel]")
{
    const auto l = with_dynamics(0.6e-3, 0.0);
    REQUIRE_THAT(impulse_response(l, 0.0), WithinRel(1.0 / 0.6e-3, 1e-14));
    REQUIRE_THAT(impulse_response(l, 1e-3), WithinRel(std::exp(-1e-3 / 0.6e-3) / 0.6e-3, 1e-12));
    REQUIRE_THAT(kernel_area(l, 60 * 0.6e-3, 600), WithinAbs(1.0, 1e-9));
    REQUIRE_THAT(step_response(l, 1.0), WithinAbs(1.0, 1e-12));
}

TEST_CASE("band-pass kernels have zero area", "[kernel]")
{
    // real distinct roots, the critically damped case and complex roots
    for (const auto& [tau, delta] : std::vector<std::pair<double, double>>{{0.007, 0.01}, {1.0, 0.25}, {1.0, 2.0}}) {
        const auto l = with_dynamics(tau, delta);
        INFO("tau " << tau << " delta " << delta);
        REQUIRE_THAT(impulse_response(l, 0.0), WithinRel(1.0 / tau, 1e-12));
        // integrate well past the slow time scale
        const double slow = std::max(1.0 / delta, tau);
        const double t_end = 60.0 * slow;
        REQUIRE_THAT(kernel_area(l, t_end, 20000), WithinAbs(0.0, 1e-6));
        REQUIRE_THAT(step_response(l, t_end), WithinAbs(0.0, 1e-6));
    }
}

TEST_CASE("kernel rejects negative times", "[kernel]")
{
    REQUIRE_THROWS_AS(impulse_response(with_dynamics(1.0, 0.0), -1e-9), argument_error);
}

TEST_CASE("kernel solves the linear layer equation", "[kernel]")
{
    // tau*h' = -h - delta*g with g = integral of h, checked by finite differences
    const auto l = with_dynamics(0.2, 0.3);
    for (double t : {0.05, 0.4, 2.0, 7.0}) {
        const double e = 1e-6;
        const double dh = (impulse_response(l, t + e) - impulse_response(l, t - e)) / (2 * e);
        const double lhs = l.tau_fast * dh;
        const double rhs = -impulse_response(l, t) - l.delta_slow * step_response(l, t);
        REQUIRE_THAT(lhs, WithinAbs(rhs, 1e-6));
    }
}

TEST_CASE("simulated states equal the kernel convolution of the nonlinear drive", "[kernel][simulate]")
{
    auto c = test::small_network(2, 20);
    c.washout_steps = 0;
    const auto input = test::random_input(12, 31);

    for (int layer : {0, 1}) {
        const auto& lc = c.layers[static_cast<std::size_t>(layer)];
        layer_trace tr;
        simulate_traced(c, input, layer, tr);
        const double h = tr.step;
        double scale = 0.0;
        for (double v : tr.x)
            scale = std::max(scale, std::abs(v));
        REQUIRE(scale > 0.0);

        double worst = 0.0;
        for (std::size_t n = 0; n < tr.x.size(); n += 7) {
            // x(t_n) with t_n = (n + 1) * h: the drive f_k is held on [k*h, (k+1)*h)
            const double tn = static_cast<double>(n + 1) * h;
            double x = 0.0;
            for (std::size_t k = 0; k <= n; ++k) {
                const double a = static_cast<double>(k) * h;
                x += tr.nonlinear[k] * gauss5([&](double s) { return impulse_response(lc, tn - s); }, a, a + h);
            }
            worst = std::max(worst, std::abs(x - tr.x[n]));
        }
        INFO("layer " << layer + 1);
        REQUIRE(worst <= 1e-4 * scale);
    }
}
