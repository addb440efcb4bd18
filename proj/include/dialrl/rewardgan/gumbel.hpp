#pragma once

#include "dialrl/diffcore/net.hpp"

namespace dialrl::rewardgan {

using diffcore::Matrix;
using diffcore::Vector;

// g_i = -log(-log(u_i)), u uniform in (0,1) clamped away from the endpoints.
Vector gumbel_noise(Rng& rng, int k);

// y = softmax((log_softmax(logits) + g) / tau). Entries positive, sum 1.
Vector gumbel_softmax(const Vector& logits, double tau, const Vector& g);

// Gradient w.r.t. logits given upstream dL/dy.
Vector gumbel_softmax_backward(const Vector& logits, double tau, const Vector& g,
                               const Vector& y, const Vector& dy);

// Hard one-hot forward value; gradients pass through unchanged (identity).
// Ties resolve to the lowest index.
Vector straight_through(const Vector& y);
int argmax_index(const Vector& y);

}  // namespace dialrl::rewardgan
