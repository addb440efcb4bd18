#include <cmath>
#include <cstdio>

#include "dialrl/statevae/vae.hpp"
#include "doctest.h"

using namespace dialrl::statevae;
using dialrl::Rng;
using dialrl::diffcore::NetGrads;
using dialrl::diffcore::flatten;

namespace {

VaeConfig small_cfg() {
  VaeConfig cfg;
  cfg.latent_dim = 8;
  cfg.hidden = 16;
  return cfg;
}

std::vector<Vector> random_bits(int n, int d, Rng& rng) {
  std::vector<Vector> out;
  for (int i = 0; i < n; ++i) {
    Vector v(d);
    for (int j = 0; j < d; ++j) v(j) = rng.bernoulli(0.3) ? 1.0 : 0.0;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST_CASE("encode: deterministic, 64-dim heads at default config") {
  Rng rng(1);
  VaeConfig cfg;  // defaults: latent 64
  VaeParams p = VaeParams::init(20, cfg, rng);
  Vector s(20);
  for (int i = 0; i < 20; ++i) s(i) = (i % 3 == 0) ? 1.0 : 0.0;
  auto [m1, lv1] = encode(p, s);
  auto [m2, lv2] = encode(p, s);
  CHECK(m1.size() == 64);
  CHECK(lv1.size() == 64);
  CHECK((m1 - m2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((lv1 - lv2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("encode: zero-weight net returns head bias as mean") {
  Rng rng(2);
  VaeConfig cfg = small_cfg();
  VaeParams p = VaeParams::init(10, cfg, rng);
  for (auto& l : p.trunk.layers) {
    l.W.setZero();
    l.b.setZero();
  }
  for (auto& l : p.mean_head.layers) l.W.setZero();
  Vector bias = p.mean_head.layers.back().b;
  Vector s = Vector::Ones(10);
  auto [mean, lv] = encode(p, s);
  CHECK((mean - bias).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("encode rejects wrong input dimension") {
  Rng rng(3);
  VaeParams p = VaeParams::init(10, small_cfg(), rng);
  Vector s = Vector::Zero(11);
  CHECK_THROWS_AS(encode(p, s), dialrl::diffcore::BadInput);
}

TEST_CASE("reparam_sample: very negative log-variance collapses to mean") {
  Rng rng(4);
  Vector mean(3);
  mean << 1.0, -2.0, 0.5;
  Vector lv = Vector::Constant(3, -80.0);
  Vector z = reparam_sample(mean, lv, rng);
  CHECK((z - mean).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("reparam_sample: Monte-Carlo mean within 3 sigma / sqrt(n)") {
  Rng rng(5);
  Vector mean(2);
  mean << 0.7, -1.3;
  Vector lv(2);
  lv << 0.0, 1.0;  // sigma = 1, e^0.5
  const int n = 10000;
  Vector acc = Vector::Zero(2);
  for (int i = 0; i < n; ++i) acc += reparam_sample(mean, lv, rng);
  acc /= n;
  for (int j = 0; j < 2; ++j) {
    double sigma = std::exp(0.5 * lv(j));
    CHECK(std::abs(acc(j) - mean(j)) < 3.0 * sigma / std::sqrt(double(n)));
  }
}

TEST_CASE("reparam_with_noise: fixed noise is deterministic, z = mu + sigma*eps") {
  Vector mean(2);
  mean << 1.0, 2.0;
  Vector lv(2);
  lv << 0.0, std::log(4.0);  // sigma 1, 2
  Vector eps(2);
  eps << 0.5, -1.0;
  Vector z = reparam_with_noise(mean, lv, eps);
  CHECK(z(0) == doctest::Approx(1.5));
  CHECK(z(1) == doctest::Approx(0.0));
}

TEST_CASE("vae_loss: KL closed-form cases") {
  Rng rng(6);
  VaeConfig cfg = small_cfg();
  VaeParams p = VaeParams::init(6, cfg, rng);
  // force encoder output mu = 0, logvar = 0 -> KL exactly 0
  for (auto& l : p.trunk.layers) {
    l.W.setZero();
    l.b.setZero();
  }
  for (auto& l : p.mean_head.layers) {
    l.W.setZero();
    l.b.setZero();
  }
  for (auto& l : p.logvar_head.layers) {
    l.W.setZero();
    l.b.setZero();
  }
  Matrix batch = Matrix::Zero(3, 6);
  Matrix noise = Matrix::Zero(3, cfg.latent_dim);
  VaeLossParts parts = vae_loss(p, batch, noise, 1.0);
  CHECK(parts.kl == doctest::Approx(0.0));

  // mu = 1, sigma = 1 in one dimension -> KL = 0.5 per closed form
  p.mean_head.layers.back().b.setZero();
  p.mean_head.layers.back().b(0) = 1.0;
  parts = vae_loss(p, batch, noise, 1.0);
  CHECK(parts.kl == doctest::Approx(0.5));
}

TEST_CASE("vae_loss: KL term non-negative on random batches") {
  Rng rng(7);
  VaeConfig cfg = small_cfg();
  VaeParams p = VaeParams::init(12, cfg, rng);
  for (int rep = 0; rep < 10; ++rep) {
    auto states = random_bits(8, 12, rng);
    Matrix batch(8, 12);
    for (int i = 0; i < 8; ++i) batch.row(i) = states[i].transpose();
    Matrix noise(8, cfg.latent_dim);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < cfg.latent_dim; ++j) noise(i, j) = rng.gaussian();
    CHECK(vae_loss(p, batch, noise, 1.0).kl >= 0.0);
  }
}

TEST_CASE("vae_loss gradient matches finite differences with frozen noise") {
  Rng rng(8);
  VaeConfig cfg;
  cfg.latent_dim = 5;
  cfg.hidden = 7;
  const int d = 9;
  VaeParams p = VaeParams::init(d, cfg, rng);
  Matrix batch(4, d);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < d; ++j) batch(i, j) = rng.bernoulli(0.4) ? 1.0 : 0.0;
  Matrix noise(4, cfg.latent_dim);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < cfg.latent_dim; ++j) noise(i, j) = rng.gaussian();

  VaeGrads grads;
  vae_loss(p, batch, noise, 1.0, &grads);

  // check each component net against central differences over its flat params
  auto check_component = [&](dialrl::diffcore::NetParams VaeParams::*member,
                             const NetGrads& analytic) {
    VaeParams q = p;
    auto loss = [&](const Vector& theta) {
      dialrl::diffcore::unflatten(q.*member, theta);
      double v = vae_loss(q, batch, noise, 1.0).total;
      return v;
    };
    Vector theta0 = flatten(p.*member);
    Vector g = flatten(analytic, p.*member);
    double err = dialrl::diffcore::grad_check_flat(theta0, loss, g);
    dialrl::diffcore::unflatten(q.*member, theta0);
    CHECK(err < 1e-4);
  };
  check_component(&VaeParams::trunk, grads.trunk);
  check_component(&VaeParams::mean_head, grads.mean_head);
  check_component(&VaeParams::logvar_head, grads.logvar_head);
  check_component(&VaeParams::decoder, grads.decoder);
}

TEST_CASE("embed_state equals encode mean and is deterministic") {
  Rng rng(9);
  VaeParams p = VaeParams::init(10, small_cfg(), rng);
  Vector s(10);
  for (int i = 0; i < 10; ++i) s(i) = (i % 2) ? 1.0 : 0.0;
  Vector e = embed_state(p, s);
  auto [mean, lv] = encode(p, s);
  CHECK((e - mean).cwiseAbs().maxCoeff() == 0.0);
  CHECK((embed_state(p, s) - e).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("embed_batch rows equal per-state embeddings") {
  Rng rng(10);
  VaeParams p = VaeParams::init(8, small_cfg(), rng);
  auto states = random_bits(5, 8, rng);
  Matrix batch(5, 8);
  for (int i = 0; i < 5; ++i) batch.row(i) = states[i].transpose();
  Matrix e = embed_batch(p, batch);
  for (int i = 0; i < 5; ++i)
    CHECK((e.row(i).transpose() - embed_state(p, states[i])).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("train_vae: single repeated state overfits to accuracy 1.0") {
  Rng rng(11);
  Vector s(12);
  for (int i = 0; i < 12; ++i) s(i) = (i % 4 == 0) ? 1.0 : 0.0;
  std::vector<Vector> states(16, s);
  VaeConfig cfg;
  cfg.latent_dim = 6;
  cfg.hidden = 16;
  cfg.epochs = 200;
  cfg.batch_size = 16;
  VaeTrainResult r = train_vae(states, 12, cfg, rng);
  CHECK(reconstruction_accuracy(r.params, states) == doctest::Approx(1.0));
}

TEST_CASE("train_vae: loss curve has one point per epoch, finite") {
  Rng rng(12);
  auto states = random_bits(64, 10, rng);
  VaeConfig cfg = small_cfg();
  cfg.epochs = 5;
  VaeTrainResult r = train_vae(states, 10, cfg, rng);
  REQUIRE(static_cast<int>(r.curve.size()) == cfg.epochs);
  for (int i = 0; i < cfg.epochs; ++i) {
    CHECK(r.curve[i].epoch == i + 1);
    CHECK(std::isfinite(r.curve[i].total));
    CHECK(r.curve[i].kl >= 0.0);
  }
  // loss non-increasing within tolerance over training
  CHECK(r.curve.back().total <= r.curve.front().total + 1e-6);
}

TEST_CASE("AE ablation: variational=false gives zero KL and deterministic path") {
  Rng rng(13);
  auto states = random_bits(64, 10, rng);
  VaeConfig cfg = small_cfg();
  cfg.epochs = 5;
  cfg.variational = false;
  VaeTrainResult r = train_vae(states, 10, cfg, rng);
  CHECK_FALSE(r.params.variational);
  for (const auto& pt : r.curve) CHECK(pt.kl == doctest::Approx(0.0));
}

TEST_CASE("vae bundle round-trip preserves parameters") {
  Rng rng(14);
  VaeParams p = VaeParams::init(10, small_cfg(), rng);
  std::string path = "test_vae_tmp.bin";
  dialrl::diffcore::save_bundle(path, to_bundle(p));
  VaeParams q = vae_from_bundle(dialrl::diffcore::load_bundle(path));
  CHECK(q.variational == p.variational);
  CHECK((flatten(q.trunk) - flatten(p.trunk)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((flatten(q.mean_head) - flatten(p.mean_head)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((flatten(q.decoder) - flatten(p.decoder)).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}
