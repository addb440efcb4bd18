#pragma once

#include "dialrl/diffcore/net.hpp"

namespace dialrl::rewardgan {

using diffcore::Matrix;
using diffcore::Vector;

// Maps catalog indices to the action representation the discriminator sees.
// One-hot mode: identity matrix. Factored mode: rows are the concatenated
// domain / act-type / slot multi-hot segments.
struct ActionEmbedding {
  Matrix rows;  // catalog_size x embed_dim
  std::string mode = "onehot";

  int dim() const { return static_cast<int>(rows.cols()); }
  Vector embed(int action_index) const { return rows.row(action_index); }
  // soft simplex vector -> expected embedding (linear, differentiable)
  Vector embed_soft(const Vector& simplex) const { return rows.transpose() * simplex; }

  static ActionEmbedding onehot(int catalog_size);
};

// Three-layer MLP over (latent state ++ action embedding), logit output.
// D(x) = sigmoid(logit(x)).
struct DiscriminatorParams {
  diffcore::NetParams net;

  int input_dim() const { return net.spec.input_size(); }
  static DiscriminatorParams init(int latent_dim, int action_dim, int hidden,
                                  Rng& rng);
};

double disc_logit(const DiscriminatorParams& d, const Vector& latent,
                  const Vector& action_emb);
double disc_prob(const DiscriminatorParams& d, const Vector& latent,
                 const Vector& action_emb);

// Backward for one sample given dL/dlogit; returns gradient w.r.t. the input
// (latent ++ action) and accumulates parameter gradients.
Vector disc_backward(const DiscriminatorParams& d, const Vector& latent,
                     const Vector& action_emb, double dlogit,
                     diffcore::NetGrads& grads);

}  // namespace dialrl::rewardgan
