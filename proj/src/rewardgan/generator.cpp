#include "dialrl/rewardgan/generator.hpp"

namespace dialrl::rewardgan {

using diffcore::Activation;
using diffcore::NetParams;

GeneratorParams GeneratorParams::init(int noise_dim, int hidden, int catalog_size,
                                      int latent_dim, Rng& rng) {
  GeneratorParams p;
  p.trunk = NetParams::glorot({{noise_dim, hidden}, {Activation::Relu}}, rng);
  p.action_head = NetParams::glorot(
      {{hidden, hidden, catalog_size}, {Activation::Relu, Activation::Identity}},
      rng);
  p.state_head = NetParams::glorot(
      {{hidden, hidden, latent_dim}, {Activation::Relu, Activation::Identity}}, rng);
  return p;
}

GeneratorGrads GeneratorGrads::zeros_like(const GeneratorParams& p) {
  return {diffcore::NetGrads::zeros_like(p.trunk),
          diffcore::NetGrads::zeros_like(p.action_head),
          diffcore::NetGrads::zeros_like(p.state_head)};
}

void GeneratorGrads::accumulate(const GeneratorGrads& o) {
  trunk.accumulate(o.trunk);
  action_head.accumulate(o.action_head);
  state_head.accumulate(o.state_head);
}

void GeneratorGrads::scale(double s) {
  trunk.scale(s);
  action_head.scale(s);
  state_head.scale(s);
}

GenForward generator_forward(const GeneratorParams& p, const Vector& noise,
                             double tau, const Vector& gumbel) {
  GenForward f;
  Matrix h = diffcore::forward(p.trunk, noise.transpose(), &f.trunk_cache);
  f.logits = diffcore::forward(p.action_head, h, &f.action_cache).row(0);
  f.gumbel = gumbel;
  f.y_soft = gumbel_softmax(f.logits, tau, gumbel);
  f.a_hard = straight_through(f.y_soft);
  f.latent = diffcore::forward(p.state_head, h, &f.state_cache).row(0);
  return f;
}

void generator_backward(const GeneratorParams& p, const GenForward& fwd,
                        const Vector& d_latent, const Vector& d_action,
                        double tau, GeneratorGrads& grads) {
  Vector dlogits =
      gumbel_softmax_backward(fwd.logits, tau, fwd.gumbel, fwd.y_soft, d_action);
  diffcore::NetGrads g_action, g_state, g_trunk;
  Matrix dh_a = diffcore::backward(p.action_head, fwd.action_cache,
                                   dlogits.transpose(), g_action);
  Matrix dh_s = diffcore::backward(p.state_head, fwd.state_cache,
                                   d_latent.transpose(), g_state);
  diffcore::backward(p.trunk, fwd.trunk_cache, dh_a + dh_s, g_trunk);
  grads.trunk.accumulate(g_trunk);
  grads.action_head.accumulate(g_action);
  grads.state_head.accumulate(g_state);
}

GenForward generate_pair(const GeneratorParams& p, double tau, Rng& rng) {
  Vector noise(p.noise_dim());
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = rng.gaussian();
  return generator_forward(p, noise, tau, gumbel_noise(rng, p.catalog_size()));
}

}  // namespace dialrl::rewardgan
