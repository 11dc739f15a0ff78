#include "dtdr/chaos.hpp"

#include "dtdr/error.hpp"
#include "dtdr/seed.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace dtdr {

void mackey_glass_params::validate() const
{
    if (!(delay > 0.0))
        throw argument_error("mackey_glass: delay must be > 0");
    if (!(sample_interval > 0.0))
        throw argument_error("mackey_glass: sample_interval must be > 0");
    if (substeps_per_sample < 10)
        throw argument_error("mackey_glass: substeps_per_sample must be >= 10");
}

void lorenz_params::validate() const
{
    if (!(sample_interval > 0.0))
        throw argument_error("lorenz: sample_interval must be > 0");
    if (substeps_per_sample < 1)
        throw argument_error("lorenz: substeps_per_sample must be >= 1");
}

namespace {

/// Ring of the most recent grid values; index 0 is the newest.
class delay_line {
public:
    explicit delay_line(std::size_t capacity) : buf_(capacity, 0.0) {}

    void push(double v)
    {
        head_ = (head_ + 1) % buf_.size();
        buf_[head_] = v;
    }

    /// Value `back` grid steps in the past, back in [0, capacity - 1].
    double at(std::size_t back) const { return buf_[(head_ + buf_.size() - back) % buf_.size()]; }

    /// Linear interpolation `back` (non-integer) grid steps in the past.
    double lookback(double back) const
    {
        const double fl = std::floor(back);
        const auto i = static_cast<std::size_t>(fl);
        const double frac = back - fl;
        if (frac == 0.0)
            return at(i);
        return (1.0 - frac) * at(i) + frac * at(i + 1);
    }

private:
    std::vector<double> buf_;
    std::size_t head_ = 0;
};

} // namespace

timeseries gen_mackey_glass(const mackey_glass_params& p, std::size_t n_samples, std::size_t discard)
{
    p.validate();
    if (n_samples < 1)
        throw argument_error("gen_mackey_glass: n_samples must be >= 1");

    const double h = p.sample_interval / p.substeps_per_sample;
    double lag = p.delay / h;
    if (std::abs(lag - std::round(lag)) < 1e-9)
        lag = std::round(lag);
    const auto capacity = static_cast<std::size_t>(std::ceil(lag)) + 3;

    delay_line hist(capacity);
    rng_t rng(p.history.seed);
    for (std::size_t i = 0; i < capacity; ++i) {
        const double v = p.history.type == history_init::kind::constant
                             ? p.history.value
                             : uniform(rng, p.history.value - p.history.spread, p.history.value + p.history.spread);
        hist.push(v);
    }

    auto rhs = [&](double x, double delayed) {
        return p.feedback_gain * delayed / (1.0 + std::pow(delayed, p.exponent)) - p.decay * x;
    };

    timeseries out(1, p.sample_interval);
    out.reserve(n_samples);
    const std::size_t total = discard + n_samples;
    double x = hist.at(0);
    for (std::size_t s = 0; s < total; ++s) {
        for (int sub = 0; sub < p.substeps_per_sample; ++sub) {
            // the current value sits at back = 0, so time t + c*h - delay is back = lag - c
            const double d0 = hist.lookback(lag);
            const double dh = hist.lookback(lag - 0.5);
            const double d1 = hist.lookback(lag - 1.0);
            const double k1 = rhs(x, d0);
            const double k2 = rhs(x + 0.5 * h * k1, dh);
            const double k3 = rhs(x + 0.5 * h * k2, dh);
            const double k4 = rhs(x + h * k3, d1);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!std::isfinite(x))
                throw blowup_error("gen_mackey_glass: non-finite state at sample " + std::to_string(s) +
                                   ", substep " + std::to_string(sub));
            hist.push(x);
        }
        if (s >= discard)
            out.push_back(x);
    }
    return out;
}

timeseries gen_lorenz(const lorenz_params& p, std::size_t n_samples, std::size_t discard)
{
    p.validate();
    if (n_samples < 1)
        throw argument_error("gen_lorenz: n_samples must be >= 1");

    using vec3 = std::array<double, 3>;
    auto rhs = [&](const vec3& v) -> vec3 {
        return {p.sigma * (v[1] - v[0]), v[0] * (p.rho - v[2]) - v[1], v[0] * v[1] - p.beta * v[2]};
    };
    auto axpy = [](const vec3& v, double a, const vec3& k) -> vec3 {
        return {v[0] + a * k[0], v[1] + a * k[1], v[2] + a * k[2]};
    };

    const double h = p.sample_interval / p.substeps_per_sample;
    timeseries out(3, p.sample_interval);
    out.reserve(n_samples);
    vec3 v = p.init_state;
    const std::size_t total = discard + n_samples;
    for (std::size_t s = 0; s < total; ++s) {
        for (int sub = 0; sub < p.substeps_per_sample; ++sub) {
            const vec3 k1 = rhs(v);
            const vec3 k2 = rhs(axpy(v, 0.5 * h, k1));
            const vec3 k3 = rhs(axpy(v, 0.5 * h, k2));
            const vec3 k4 = rhs(axpy(v, h, k3));
            for (int c = 0; c < 3; ++c)
                v[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
            if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2]))
                throw blowup_error("gen_lorenz: non-finite state at sample " + std::to_string(s) +
                                   ", substep " + std::to_string(sub));
        }
        if (s >= discard)
            out.push_back(v);
    }
    return out;
}

} // namespace dtdr
