#include "dialrl/diffcore/optimizer.hpp"

#include <cmath>

namespace dialrl::diffcore {

OptState OptState::sgd(double lr) {
  OptState o;
  o.kind = Kind::Sgd;
  o.lr = lr;
  return o;
}

OptState OptState::adam(double lr, double beta1, double beta2, double eps) {
  OptState o;
  o.kind = Kind::Adam;
  o.lr = lr;
  o.beta1 = beta1;
  o.beta2 = beta2;
  o.eps = eps;
  return o;
}

void step(NetParams& params, const NetGrads& grads, OptState& opt) {
  if (grads.layers.size() != params.layers.size())
    throw BadInput("step: gradient layer count mismatch");
  for (std::size_t i = 0; i < grads.layers.size(); ++i)
    if (!grads.layers[i].W.allFinite() || !grads.layers[i].b.allFinite())
      throw TrainingError("step: non-finite gradient");

  if (opt.kind == OptState::Kind::Sgd) {
    ++opt.step_count;
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
      params.layers[i].W -= opt.lr * grads.layers[i].W;
      params.layers[i].b -= opt.lr * grads.layers[i].b;
    }
    return;
  }

  if (opt.m.empty()) {
    for (const auto& l : params.layers) {
      opt.m.push_back({Matrix::Zero(l.W.rows(), l.W.cols()), Vector::Zero(l.b.size())});
      opt.v.push_back({Matrix::Zero(l.W.rows(), l.W.cols()), Vector::Zero(l.b.size())});
    }
  }
  ++opt.step_count;
  double t = static_cast<double>(opt.step_count);
  double bc1 = 1.0 - std::pow(opt.beta1, t);
  double bc2 = 1.0 - std::pow(opt.beta2, t);
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    auto& m = opt.m[i];
    auto& v = opt.v[i];
    const auto& g = grads.layers[i];
    m.W = opt.beta1 * m.W + (1.0 - opt.beta1) * g.W;
    m.b = opt.beta1 * m.b + (1.0 - opt.beta1) * g.b;
    v.W = opt.beta2 * v.W.array().matrix() + (1.0 - opt.beta2) * g.W.cwiseProduct(g.W);
    v.b = opt.beta2 * v.b + (1.0 - opt.beta2) * g.b.cwiseProduct(g.b);
    params.layers[i].W.array() -=
        opt.lr * (m.W.array() / bc1) / ((v.W.array() / bc2).sqrt() + opt.eps);
    params.layers[i].b.array() -=
        opt.lr * (m.b.array() / bc1) / ((v.b.array() / bc2).sqrt() + opt.eps);
  }
}

void clip_grad_norm(NetGrads& grads, double max_norm) {
  double n = std::sqrt(grads.squared_norm());
  if (n > max_norm && n > 0.0) grads.scale(max_norm / n);
}

}  // namespace dialrl::diffcore
