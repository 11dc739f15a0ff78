#pragma once

#include "dtdr/state_matrix.hpp"

namespace dtdr {

struct autocorr_width {
    double width = 0.0;
    /// Set when the layer has no spatial variance; width is then n_nodes.
    bool degenerate = false;
};

/// Lag (in nodes) at which the row-averaged autocorrelation along the node axis of one layer
/// (0-based) first drops below 1/e, interpolated linearly between integer lags so that short
/// correlation lengths stay distinguishable. Each row is mean-centred before correlating.
autocorr_width spatial_autocorr_width(const state_matrix& states, int layer);

} // namespace dtdr
