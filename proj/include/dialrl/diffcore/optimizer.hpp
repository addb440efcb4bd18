#pragma once

#include "dialrl/diffcore/net.hpp"

namespace dialrl::diffcore {

struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OptState {
  enum class Kind { Sgd, Adam };
  Kind kind = Kind::Adam;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step_count = 0;
  std::vector<Layer> m;  // first moments (adam)
  std::vector<Layer> v;  // second moments (adam)

  static OptState sgd(double lr);
  static OptState adam(double lr, double beta1 = 0.9, double beta2 = 0.999,
                       double eps = 1e-8);
};

// In-place parameter update. Throws TrainingError on non-finite gradients.
void step(NetParams& params, const NetGrads& grads, OptState& opt);

// Scales grads in place so their global L2 norm is at most max_norm.
void clip_grad_norm(NetGrads& grads, double max_norm);

}  // namespace dialrl::diffcore
