#pragma once

#include "dtdr/timeseries.hpp"

#include <array>
#include <cstdint>

namespace dtdr {

/// History x(t <= 0) of the Mackey-Glass equation.
struct history_init {
    enum class kind { constant, random };
    kind type = kind::random;
    /// Constant value, or centre of the random interval.
    double value = 1.2;
    /// Half-width of the uniform random interval.
    double spread = 0.2;
    std::uint64_t seed = 0;

    bool operator==(const history_init&) const = default;
};

/// dx/dt = feedback_gain * x(t - delay) / (1 + x(t - delay)^exponent) - decay * x
struct mackey_glass_params {
    double feedback_gain = 0.2;
    double decay = 0.1;
    double exponent = 10.0;
    double delay = 17.0;
    double sample_interval = 1.0;
    int substeps_per_sample = 20;
    history_init history{};

    void validate() const;
    bool operator==(const mackey_glass_params&) const = default;
};

struct lorenz_params {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
    double sample_interval = 0.02;
    int substeps_per_sample = 10;
    std::array<double, 3> init_state{1.0, 1.0, 1.0};

    void validate() const;
    bool operator==(const lorenz_params&) const = default;
};

inline constexpr std::size_t default_mackey_glass_discard = 1000;
inline constexpr std::size_t default_lorenz_discard = 5000;

/// Scalar Mackey-Glass samples from a classical RK4 scheme on a substep grid. Delayed values
/// between grid points are linearly interpolated from a circular history buffer.
/// Sample k is the state at t = (discard + k + 1) * sample_interval.
timeseries gen_mackey_glass(const mackey_glass_params& params, std::size_t n_samples,
                            std::size_t discard = default_mackey_glass_discard);

/// Three-component Lorenz samples (x, y, z) from classical RK4.
timeseries gen_lorenz(const lorenz_params& params, std::size_t n_samples,
                      std::size_t discard = default_lorenz_discard);

} // namespace dtdr
