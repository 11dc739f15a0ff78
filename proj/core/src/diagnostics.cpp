#include "dtdr/diagnostics.hpp"

#include "dtdr/error.hpp"

#include <cmath>
#include <vector>

namespace dtdr {

autocorr_width spatial_autocorr_width(const state_matrix& states, int layer)
{
    if (layer < 0 || layer >= states.n_layers())
        throw argument_error("spatial_autocorr_width: layer out of range");
    if (states.rows() < 100)
        throw argument_error("spatial_autocorr_width: needs at least 100 rows");

    const auto block = states.layer_block(layer);
    const Eigen::Index n = block.cols();
    std::vector<double> acf(static_cast<std::size_t>(n), 0.0);
    Eigen::Index used = 0;
    Eigen::VectorXd r(n);
    for (Eigen::Index row = 0; row < block.rows(); ++row) {
        r = block.row(row).transpose();
        // a flat row carries no spatial structure (and centring it leaves only rounding noise)
        if (r.maxCoeff() == r.minCoeff())
            continue;
        r.array() -= r.mean();
        const double c0 = r.squaredNorm();
        for (Eigen::Index lag = 0; lag < n; ++lag)
            acf[static_cast<std::size_t>(lag)] += r.head(n - lag).dot(r.tail(n - lag)) / c0;
        ++used;
    }
    if (used == 0)
        return {static_cast<double>(n), true};

    // first crossing of 1/e, linearly interpolated between the bracketing integer lags
    const double threshold = std::exp(-1.0);
    for (auto& a : acf)
        a /= static_cast<double>(used);
    for (std::size_t lag = 1; lag < acf.size(); ++lag)
        if (acf[lag] < threshold) {
            const double above = acf[lag - 1];
            return {static_cast<double>(lag - 1) + (above - threshold) / (above - acf[lag]), false};
        }
    return {static_cast<double>(n), false};
}

} // namespace dtdr
