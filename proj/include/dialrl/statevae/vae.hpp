#pragma once

#include "dialrl/diffcore/gradcheck.hpp"
#include "dialrl/diffcore/net.hpp"
#include "dialrl/diffcore/optimizer.hpp"
#include "dialrl/diffcore/serialize.hpp"

namespace dialrl::statevae {

using diffcore::Matrix;
using diffcore::Vector;

struct VaeConfig {
  int latent_dim = 64;
  int hidden = 128;
  double beta = 1.0;       // weight on the KL term
  bool variational = true; // false: deterministic autoencoder ablation
  int epochs = 30;
  int batch_size = 64;
  double lr = 1e-3;
};

// Encoder trunk with mean / log-variance heads plus a Bernoulli-logit
// decoder. The encoder mean is the state embedding used downstream.
struct VaeParams {
  diffcore::NetParams trunk;        // state_dim -> hidden, relu
  diffcore::NetParams mean_head;    // hidden -> latent, identity
  diffcore::NetParams logvar_head;  // hidden -> latent, identity
  diffcore::NetParams decoder;      // latent -> hidden -> state_dim logits
  bool variational = true;

  int state_dim() const { return trunk.spec.input_size(); }
  int latent_dim() const { return mean_head.spec.output_size(); }

  static VaeParams init(int state_dim, const VaeConfig& cfg, Rng& rng);
};

// (mean, log_variance) for a single state
std::pair<Vector, Vector> encode(const VaeParams& p, const Vector& s);

Vector reparam_sample(const Vector& mean, const Vector& log_variance, Rng& rng);
Vector reparam_with_noise(const Vector& mean, const Vector& log_variance,
                          const Vector& noise);

Vector embed_state(const VaeParams& p, const Vector& s);
Matrix embed_batch(const VaeParams& p, const Matrix& states);

struct VaeLossParts {
  double total = 0.0;
  double reconstruction = 0.0;
  double kl = 0.0;
};

struct VaeGrads {
  diffcore::NetGrads trunk, mean_head, logvar_head, decoder;
};

// Mean negative Bernoulli log-likelihood plus beta * closed-form Gaussian KL.
// `noise` rows are the frozen reparameterization draws for the batch.
VaeLossParts vae_loss(const VaeParams& p, const Matrix& batch, const Matrix& noise,
                      double beta, VaeGrads* grads = nullptr);

VaeLossParts vae_loss_sampled(const VaeParams& p, const Matrix& batch, Rng& rng,
                              double beta);

struct VaeCurvePoint {
  int epoch;
  double total, reconstruction, kl;
};

struct VaeTrainResult {
  VaeParams params;
  std::vector<VaeCurvePoint> curve;
};

VaeTrainResult train_vae(const std::vector<Vector>& states, int state_dim,
                         const VaeConfig& cfg, Rng& rng);

// Fraction of bits reconstructed correctly (decoder logit thresholded at 0).
double reconstruction_accuracy(const VaeParams& p, const std::vector<Vector>& states);

diffcore::Bundle to_bundle(const VaeParams& p);
VaeParams vae_from_bundle(const diffcore::Bundle& b);

}  // namespace dialrl::statevae
