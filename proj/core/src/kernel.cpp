#include "dtdr/kernel.hpp"

#include "dtdr/error.hpp"

#include <cmath>
#include <complex>

namespace dtdr {

namespace {

using cplx = std::complex<double>;

struct roots {
    cplx r1, r2;
    bool repeated;
};

roots characteristic_roots(const layer_config& l)
{
    const double tau = l.tau_fast;
    const double disc = 1.0 - 4.0 * tau * l.delta_slow;
    const double scale = 1.0 / (2.0 * tau);
    if (std::abs(disc) < 1e-14)
        return {cplx(-scale), cplx(-scale), true};
    const cplx sq = std::sqrt(cplx(disc));
    return {(-1.0 + sq) * scale, (-1.0 - sq) * scale, false};
}

void check_args(const layer_config& l, double t)
{
    if (!(t >= 0.0))
        throw argument_error("impulse_response: t must be >= 0");
    if (!(l.tau_fast > 0.0) || !(l.delta_slow >= 0.0))
        throw argument_error("impulse_response: tau_fast must be > 0 and delta_slow >= 0");
}

} // namespace

double impulse_response(const layer_config& l, double t)
{
    check_args(l, t);
    if (!l.band_pass())
        return std::exp(-t / l.tau_fast) / l.tau_fast;
    const auto [r1, r2, repeated] = characteristic_roots(l);
    if (repeated)
        return ((1.0 + r1 * t) * std::exp(r1 * t)).real() / l.tau_fast;
    return ((r1 * std::exp(r1 * t) - r2 * std::exp(r2 * t)) / (l.tau_fast * (r1 - r2))).real();
}

double step_response(const layer_config& l, double t)
{
    check_args(l, t);
    if (!l.band_pass())
        return -std::expm1(-t / l.tau_fast);
    const auto [r1, r2, repeated] = characteristic_roots(l);
    if (repeated)
        return (t * std::exp(r1 * t)).real() / l.tau_fast;
    return ((std::exp(r1 * t) - std::exp(r2 * t)) / (l.tau_fast * (r1 - r2))).real();
}

} // namespace dtdr
