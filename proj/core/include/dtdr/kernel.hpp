#pragma once

#include "dtdr/network.hpp"

namespace dtdr {

/// Impulse response h(t) of the linear part of one layer, i.e. the kernel with which the layer
/// convolves its nonlinear drive: x(t) = integral of h(t - s) * beta * sin^2(d(s) + b) ds.
///
/// Laplace transform: tau*s*X = -X - delta*X/s + F, so H(s) = s / (tau*s^2 + s + delta).
/// With roots r1, r2 of tau*r^2 + r + delta = 0 the partial fractions give
///   h(t) = (r1*exp(r1*t) - r2*exp(r2*t)) / (tau*(r1 - r2)),
/// which is real for complex-conjugate roots too. delta = 0 gives r1 = 0, r2 = -1/tau and
/// h(t) = exp(-t/tau)/tau. For the double root r = -1/(2*tau): h(t) = (1 + r*t)*exp(r*t)/tau.
/// Band-pass kernels integrate to zero (H(0) = 0).
double impulse_response(const layer_config& layer, double t);

/// Step response: the integral of h over [0, t].
double step_response(const layer_config& layer, double t);

} // namespace dtdr
