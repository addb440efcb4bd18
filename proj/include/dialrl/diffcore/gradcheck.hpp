#pragma once

#include <functional>

#include "dialrl/diffcore/net.hpp"

namespace dialrl::diffcore {

// Compares an analytic gradient to central finite differences over a flat
// parameter vector. Returns max_i |g_fd - g_an| / max(1, |g_fd|, |g_an|).
double grad_check_flat(const Vector& theta,
                       const std::function<double(const Vector&)>& loss,
                       const Vector& analytic_grad, double epsilon = 1e-5);

// Convenience form for a single net: `loss_and_grad` must be deterministic
// (any stochastic inputs pre-sampled and held fixed).
double grad_check(const NetParams& params,
                  const std::function<double(const NetParams&)>& loss,
                  const NetGrads& analytic, double epsilon = 1e-5);

}  // namespace dialrl::diffcore
