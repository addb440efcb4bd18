#include "dialrl/rewardgan/discriminator.hpp"

#include <cmath>

namespace dialrl::rewardgan {

using diffcore::Activation;

ActionEmbedding ActionEmbedding::onehot(int catalog_size) {
  ActionEmbedding e;
  e.rows = Matrix::Identity(catalog_size, catalog_size);
  e.mode = "onehot";
  return e;
}

DiscriminatorParams DiscriminatorParams::init(int latent_dim, int action_dim,
                                              int hidden, Rng& rng) {
  DiscriminatorParams d;
  d.net = diffcore::NetParams::glorot(
      {{latent_dim + action_dim, hidden, hidden / 2, 1},
       {Activation::Relu, Activation::Relu, Activation::Identity}},
      rng);
  return d;
}

namespace {

Vector concat(const Vector& a, const Vector& b) {
  Vector x(a.size() + b.size());
  x << a, b;
  return x;
}

}  // namespace

double disc_logit(const DiscriminatorParams& d, const Vector& latent,
                  const Vector& action_emb) {
  Vector x = concat(latent, action_emb);
  return diffcore::forward(d.net, x.transpose())(0, 0);
}

double disc_prob(const DiscriminatorParams& d, const Vector& latent,
                 const Vector& action_emb) {
  return 1.0 / (1.0 + std::exp(-disc_logit(d, latent, action_emb)));
}

Vector disc_backward(const DiscriminatorParams& d, const Vector& latent,
                     const Vector& action_emb, double dlogit,
                     diffcore::NetGrads& grads) {
  Vector x = concat(latent, action_emb);
  diffcore::ForwardCache cache;
  diffcore::forward(d.net, x.transpose(), &cache);
  Matrix dout(1, 1);
  dout(0, 0) = dlogit;
  diffcore::NetGrads g;
  Matrix dx = diffcore::backward(d.net, cache, dout, g);
  if (grads.layers.empty())
    grads = std::move(g);
  else
    grads.accumulate(g);
  return dx.row(0);
}

}  // namespace dialrl::rewardgan
