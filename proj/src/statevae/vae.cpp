#include "dialrl/statevae/vae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dialrl::statevae {

using diffcore::Activation;
using diffcore::ForwardCache;
using diffcore::NetGrads;
using diffcore::NetParams;
using diffcore::NetSpec;

VaeParams VaeParams::init(int state_dim, const VaeConfig& cfg, Rng& rng) {
  VaeParams p;
  p.variational = cfg.variational;
  p.trunk = NetParams::glorot(
      {{state_dim, cfg.hidden}, {Activation::Relu}}, rng);
  p.mean_head = NetParams::glorot(
      {{cfg.hidden, cfg.latent_dim}, {Activation::Identity}}, rng);
  p.logvar_head = NetParams::glorot(
      {{cfg.hidden, cfg.latent_dim}, {Activation::Identity}}, rng);
  p.decoder = NetParams::glorot(
      {{cfg.latent_dim, cfg.hidden, state_dim},
       {Activation::Relu, Activation::Identity}},
      rng);
  return p;
}

std::pair<Vector, Vector> encode(const VaeParams& p, const Vector& s) {
  if (s.size() != p.state_dim())
    throw diffcore::BadInput("encode: state dimension mismatch");
  Matrix h = diffcore::forward(p.trunk, s.transpose());
  Vector mean = diffcore::forward(p.mean_head, h).row(0);
  Vector logvar = diffcore::forward(p.logvar_head, h).row(0);
  return {mean, logvar};
}

Vector reparam_with_noise(const Vector& mean, const Vector& log_variance,
                          const Vector& noise) {
  return mean.array() + (0.5 * log_variance.array()).exp() * noise.array();
}

Vector reparam_sample(const Vector& mean, const Vector& log_variance, Rng& rng) {
  Vector noise(mean.size());
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = rng.gaussian();
  return reparam_with_noise(mean, log_variance, noise);
}

Vector embed_state(const VaeParams& p, const Vector& s) {
  return encode(p, s).first;
}

Matrix embed_batch(const VaeParams& p, const Matrix& states) {
  Matrix h = diffcore::forward(p.trunk, states);
  return diffcore::forward(p.mean_head, h);
}

namespace {

// Stable log(1+exp(l)) - x*l summed over entries
double bce_with_logits(const Matrix& logits, const Matrix& targets, Matrix& dlogits) {
  double loss = 0.0;
  dlogits.resize(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i)
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      double l = logits(i, j), x = targets(i, j);
      loss += std::max(l, 0.0) - l * x + std::log1p(std::exp(-std::abs(l)));
      dlogits(i, j) = 1.0 / (1.0 + std::exp(-l)) - x;
    }
  return loss;
}

}  // namespace

VaeLossParts vae_loss(const VaeParams& p, const Matrix& batch, const Matrix& noise,
                      double beta, VaeGrads* grads) {
  const double B = static_cast<double>(batch.rows());

  ForwardCache trunk_cache, mean_cache, logvar_cache, dec_cache;
  Matrix h = diffcore::forward(p.trunk, batch, &trunk_cache);
  Matrix mu = diffcore::forward(p.mean_head, h, &mean_cache);
  Matrix lv = diffcore::forward(p.logvar_head, h, &logvar_cache);

  Matrix z = p.variational
                 ? (mu.array() + (0.5 * lv.array()).exp() * noise.array()).matrix()
                 : mu;
  Matrix logits = diffcore::forward(p.decoder, z, &dec_cache);

  Matrix dlogits;
  VaeLossParts parts;
  parts.reconstruction = bce_with_logits(logits, batch, dlogits) / B;
  if (p.variational)
    parts.kl = 0.5 * (mu.array().square() + lv.array().exp() - 1.0 - lv.array())
                   .sum() / B;
  parts.total = parts.reconstruction + beta * parts.kl;

  if (grads) {
    dlogits /= B;
    Matrix dz = diffcore::backward(p.decoder, dec_cache, dlogits, grads->decoder);
    Matrix dmu = dz;
    Matrix dlv = Matrix::Zero(lv.rows(), lv.cols());
    if (p.variational) {
      dlv = (dz.array() * noise.array() * 0.5 * (0.5 * lv.array()).exp()).matrix();
      dmu.array() += beta * mu.array() / B;
      dlv.array() += beta * 0.5 * (lv.array().exp() - 1.0) / B;
    }
    Matrix dh = diffcore::backward(p.mean_head, mean_cache, dmu, grads->mean_head);
    dh += diffcore::backward(p.logvar_head, logvar_cache, dlv, grads->logvar_head);
    diffcore::backward(p.trunk, trunk_cache, dh, grads->trunk);
  }
  return parts;
}

VaeLossParts vae_loss_sampled(const VaeParams& p, const Matrix& batch, Rng& rng,
                              double beta) {
  Matrix noise(batch.rows(), p.latent_dim());
  for (Eigen::Index i = 0; i < noise.rows(); ++i)
    for (Eigen::Index j = 0; j < noise.cols(); ++j) noise(i, j) = rng.gaussian();
  return vae_loss(p, batch, noise, beta);
}

VaeTrainResult train_vae(const std::vector<Vector>& states, int state_dim,
                         const VaeConfig& cfg, Rng& rng) {
  if (states.empty()) throw diffcore::TrainingError("train_vae: no states");
  VaeTrainResult result;
  result.params = VaeParams::init(state_dim, cfg, rng);
  VaeParams& p = result.params;

  auto opt_trunk = diffcore::OptState::adam(cfg.lr);
  auto opt_mean = diffcore::OptState::adam(cfg.lr);
  auto opt_logvar = diffcore::OptState::adam(cfg.lr);
  auto opt_dec = diffcore::OptState::adam(cfg.lr);

  std::vector<std::size_t> order(states.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.uniform_int(i)]);

    double sum_total = 0, sum_recon = 0, sum_kl = 0;
    int n_batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::size_t end = std::min(order.size(), start + cfg.batch_size);
      Matrix batch(end - start, state_dim);
      for (std::size_t r = start; r < end; ++r)
        batch.row(r - start) = states[order[r]].transpose();

      Matrix noise(batch.rows(), cfg.latent_dim);
      for (Eigen::Index r = 0; r < noise.rows(); ++r)
        for (Eigen::Index c = 0; c < noise.cols(); ++c) noise(r, c) = rng.gaussian();

      VaeGrads grads;
      VaeLossParts parts = vae_loss(p, batch, noise, cfg.beta, &grads);
      if (!std::isfinite(parts.total))
        throw diffcore::TrainingError("train_vae: non-finite loss");
      diffcore::step(p.trunk, grads.trunk, opt_trunk);
      diffcore::step(p.mean_head, grads.mean_head, opt_mean);
      if (p.variational) diffcore::step(p.logvar_head, grads.logvar_head, opt_logvar);
      diffcore::step(p.decoder, grads.decoder, opt_dec);

      sum_total += parts.total;
      sum_recon += parts.reconstruction;
      sum_kl += parts.kl;
      ++n_batches;
    }
    result.curve.push_back({epoch + 1, sum_total / n_batches,
                            sum_recon / n_batches, sum_kl / n_batches});
  }
  return result;
}

double reconstruction_accuracy(const VaeParams& p, const std::vector<Vector>& states) {
  if (states.empty()) return 0.0;
  long correct = 0, total = 0;
  Matrix batch(states.size(), p.state_dim());
  for (std::size_t i = 0; i < states.size(); ++i) batch.row(i) = states[i].transpose();
  Matrix mu = embed_batch(p, batch);
  Matrix logits = diffcore::forward(p.decoder, mu);
  for (Eigen::Index i = 0; i < logits.rows(); ++i)
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      bool bit = batch(i, j) > 0.5;
      bool pred = logits(i, j) > 0.0;
      correct += bit == pred ? 1 : 0;
      ++total;
    }
  return static_cast<double>(correct) / static_cast<double>(total);
}

diffcore::Bundle to_bundle(const VaeParams& p) {
  diffcore::Bundle b;
  b.meta["kind"] = "vae";
  b.meta["variational"] = p.variational ? "1" : "0";
  b.nets["trunk"] = p.trunk;
  b.nets["mean_head"] = p.mean_head;
  b.nets["logvar_head"] = p.logvar_head;
  b.nets["decoder"] = p.decoder;
  return b;
}

VaeParams vae_from_bundle(const diffcore::Bundle& b) {
  VaeParams p;
  p.variational = b.meta.at("variational") == "1";
  p.trunk = b.nets.at("trunk");
  p.mean_head = b.nets.at("mean_head");
  p.logvar_head = b.nets.at("logvar_head");
  p.decoder = b.nets.at("decoder");
  return p;
}

}  // namespace dialrl::statevae
