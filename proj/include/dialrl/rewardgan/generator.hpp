#pragma once

#include "dialrl/rewardgan/gumbel.hpp"

namespace dialrl::rewardgan {

// Noise -> shared trunk -> (action logits -> Gumbel-Softmax, latent state).
struct GeneratorParams {
  diffcore::NetParams trunk;        // noise_dim -> h, relu
  diffcore::NetParams action_head;  // h -> hidden -> catalog logits
  diffcore::NetParams state_head;   // h -> hidden -> latent dim

  int noise_dim() const { return trunk.spec.input_size(); }
  int catalog_size() const { return action_head.spec.output_size(); }
  int latent_dim() const { return state_head.spec.output_size(); }

  static GeneratorParams init(int noise_dim, int hidden, int catalog_size,
                              int latent_dim, Rng& rng);
};

struct GeneratorGrads {
  diffcore::NetGrads trunk, action_head, state_head;
  static GeneratorGrads zeros_like(const GeneratorParams& p);
  void accumulate(const GeneratorGrads& o);
  void scale(double s);
};

struct GenForward {
  diffcore::ForwardCache trunk_cache, action_cache, state_cache;
  Vector logits;   // raw action logits
  Vector gumbel;   // frozen Gumbel draw
  Vector y_soft;   // relaxed simplex sample
  Vector a_hard;   // straight-through one-hot
  Vector latent;   // simulated latent state
};

GenForward generator_forward(const GeneratorParams& p, const Vector& noise,
                             double tau, const Vector& gumbel);

// Straight-through: d_action is applied to the soft path unchanged.
void generator_backward(const GeneratorParams& p, const GenForward& fwd,
                        const Vector& d_latent, const Vector& d_action,
                        double tau, GeneratorGrads& grads);

// Convenience: sample noise + Gumbel draw internally.
GenForward generate_pair(const GeneratorParams& p, double tau, Rng& rng);

}  // namespace dialrl::rewardgan
