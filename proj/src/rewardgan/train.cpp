#include "dialrl/rewardgan/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dialrl::rewardgan {

using diffcore::ForwardCache;
using diffcore::NetGrads;

void HistoryBuffer::push(const Vector& latent, int action, Rng& rng) {
  if (entries_.size() < capacity_) {
    entries_.emplace_back(latent, action);
  } else {
    entries_[rng.uniform_int(entries_.size())] = {latent, action};
  }
}

const std::pair<Vector, int>& HistoryBuffer::sample(Rng& rng) const {
  if (entries_.empty()) throw diffcore::BadInput("history buffer empty");
  return entries_[rng.uniform_int(entries_.size())];
}

std::vector<LatentPair> mismatch_negatives(
    const std::vector<LatentPair>& corpus_pairs, int catalog_size, Rng& rng,
    int n) {
  if (catalog_size < 2)
    throw diffcore::BadInput("mismatch_negatives: need >= 2 actions");
  std::vector<LatentPair> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const LatentPair& src = corpus_pairs[rng.uniform_int(corpus_pairs.size())];
    int replacement = static_cast<int>(rng.uniform_int(catalog_size - 1));
    if (replacement >= src.action) ++replacement;
    out.push_back({src.latent, replacement});
  }
  return out;
}

std::vector<LatentPair> encode_corpus_pairs(const dialenv::Corpus& corpus,
                                            const statevae::VaeParams& vae,
                                            const ActionEmbedding&) {
  auto pairs = corpus.state_action_pairs();
  Matrix states(pairs.size(), corpus.state_dim);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    states.row(i) = pairs[i].first->transpose();
  Matrix latents = statevae::embed_batch(vae, states);
  std::vector<LatentPair> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    out[i] = {latents.row(i), pairs[i].second};
  return out;
}

double auc_score(const std::vector<double>& pos, const std::vector<double>& neg) {
  if (pos.empty() || neg.empty()) return 0.5;
  std::vector<std::pair<double, int>> scored;
  for (double p : pos) scored.emplace_back(p, 1);
  for (double n : neg) scored.emplace_back(n, 0);
  std::sort(scored.begin(), scored.end());
  // rank sum with tie handling via average ranks
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < scored.size()) {
    std::size_t j = i;
    while (j < scored.size() && scored[j].first == scored[i].first) ++j;
    double avg_rank = 0.5 * (i + j - 1) + 1.0;  // 1-based
    for (std::size_t k = i; k < j; ++k)
      if (scored[k].second == 1) rank_sum += avg_rank;
    i = j;
  }
  double n1 = static_cast<double>(pos.size());
  double n0 = static_cast<double>(neg.size());
  return (rank_sum - n1 * (n1 + 1) / 2.0) / (n1 * n0);
}

namespace {

struct BatchedGenForward {
  ForwardCache trunk_cache, action_cache, state_cache;
  Matrix logits, gumbel, y_soft, a_hard, latent;
};

BatchedGenForward gen_forward_batch(const GeneratorParams& p, const Matrix& noise,
                                    double tau, Rng& rng) {
  BatchedGenForward f;
  Matrix h = diffcore::forward(p.trunk, noise, &f.trunk_cache);
  f.logits = diffcore::forward(p.action_head, h, &f.action_cache);
  f.latent = diffcore::forward(p.state_head, h, &f.state_cache);
  f.gumbel.resize(f.logits.rows(), f.logits.cols());
  f.y_soft.resize(f.logits.rows(), f.logits.cols());
  f.a_hard = Matrix::Zero(f.logits.rows(), f.logits.cols());
  for (Eigen::Index r = 0; r < f.logits.rows(); ++r) {
    Vector g = gumbel_noise(rng, static_cast<int>(f.logits.cols()));
    f.gumbel.row(r) = g.transpose();
    Vector y = gumbel_softmax(f.logits.row(r), tau, g);
    f.y_soft.row(r) = y.transpose();
    f.a_hard(r, argmax_index(y)) = 1.0;
  }
  return f;
}

void gen_backward_batch(const GeneratorParams& p, const BatchedGenForward& f,
                        const Matrix& d_latent, const Matrix& d_action, double tau,
                        GeneratorGrads& grads) {
  Matrix dlogits(f.logits.rows(), f.logits.cols());
  for (Eigen::Index r = 0; r < f.logits.rows(); ++r)
    dlogits.row(r) = gumbel_softmax_backward(f.logits.row(r), tau, f.gumbel.row(r),
                                             f.y_soft.row(r), d_action.row(r))
                         .transpose();
  NetGrads g_action, g_state, g_trunk;
  Matrix dh = diffcore::backward(p.action_head, f.action_cache, dlogits, g_action);
  dh += diffcore::backward(p.state_head, f.state_cache, d_latent, g_state);
  diffcore::backward(p.trunk, f.trunk_cache, dh, g_trunk);
  grads.trunk.accumulate(g_trunk);
  grads.action_head.accumulate(g_action);
  grads.state_head.accumulate(g_state);
}

Matrix disc_inputs(const std::vector<LatentPair>& pairs,
                   const ActionEmbedding& emb) {
  int latent_dim = static_cast<int>(pairs.front().latent.size());
  Matrix x(pairs.size(), latent_dim + emb.dim());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    x.row(i).head(latent_dim) = pairs[i].latent.transpose();
    x.row(i).tail(emb.dim()) = emb.embed(pairs[i].action).transpose();
  }
  return x;
}

std::vector<double> disc_logits_of(const DiscriminatorParams& d, const Matrix& x) {
  Matrix out = diffcore::forward(d.net, x);
  std::vector<double> v(out.rows());
  for (Eigen::Index i = 0; i < out.rows(); ++i) v[i] = out(i, 0);
  return v;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

RewardTrainResult train_reward(const dialenv::Corpus& corpus,
                               const statevae::VaeParams& vae,
                               const ActionEmbedding& embedding,
                               const RewardTrainConfig& cfg, Rng& rng) {
  if (corpus.episodes.empty())
    throw diffcore::TrainingError("train_reward: empty corpus");

  std::vector<LatentPair> pairs = encode_corpus_pairs(corpus, vae, embedding);
  for (std::size_t i = pairs.size(); i > 1; --i)
    std::swap(pairs[i - 1], pairs[rng.uniform_int(i)]);
  std::size_t n_holdout =
      std::max<std::size_t>(1, static_cast<std::size_t>(pairs.size() * cfg.holdout_fraction));
  std::vector<LatentPair> holdout(pairs.end() - n_holdout, pairs.end());
  pairs.resize(pairs.size() - n_holdout);

  int latent_dim = vae.latent_dim();
  int catalog_size = corpus.catalog.size();
  DiscriminatorParams disc =
      DiscriminatorParams::init(latent_dim, embedding.dim(), cfg.hidden, rng);
  GeneratorParams gen =
      GeneratorParams::init(cfg.noise_dim, cfg.hidden, catalog_size, latent_dim, rng);
  HistoryBuffer history(cfg.history_capacity);

  auto opt_d = diffcore::OptState::adam(cfg.lr_d);
  auto opt_g_trunk = diffcore::OptState::adam(cfg.lr_g);
  auto opt_g_action = diffcore::OptState::adam(cfg.lr_g);
  auto opt_g_state = diffcore::OptState::adam(cfg.lr_g);

  RewardTrainResult result{RewardModel(disc, vae, embedding, cfg.t_max), {}, 0.0};
  double best_auc = -1.0;
  DiscriminatorParams best_disc = disc;
  int evals_since_best = 0;

  auto eval_auc = [&]() {
    Matrix pos_x = disc_inputs(holdout, embedding);
    std::vector<double> pos = disc_logits_of(disc, pos_x);
    std::vector<LatentPair> neg_pairs =
        mismatch_negatives(holdout, catalog_size, rng, static_cast<int>(n_holdout / 2 + 1));
    BatchedGenForward gf = gen_forward_batch(
        gen,
        [&] {
          Matrix z(n_holdout / 2 + 1, cfg.noise_dim);
          for (Eigen::Index r = 0; r < z.rows(); ++r)
            for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) = rng.gaussian();
          return z;
        }(),
        cfg.tau, rng);
    for (Eigen::Index r = 0; r < gf.latent.rows(); ++r)
      neg_pairs.push_back({gf.latent.row(r), argmax_index(gf.y_soft.row(r))});
    Matrix neg_x = disc_inputs(neg_pairs, embedding);
    std::vector<double> neg = disc_logits_of(disc, neg_x);
    return auc_score(pos, neg);
  };

  for (int step_i = 1; step_i <= cfg.steps; ++step_i) {
    int B = cfg.batch;

    // ---- simulated batch from the three sources ----
    int n_gen = 0, n_mis = 0, n_hist = 0;
    for (int i = 0; i < B; ++i) {
      double r = rng.uniform01();
      if (r < cfg.frac_generator || history.size() == 0)
        ++n_gen;
      else if (r < cfg.frac_generator + cfg.frac_mismatch)
        ++n_mis;
      else
        ++n_hist;
    }
    Matrix noise(n_gen, cfg.noise_dim);
    for (Eigen::Index r = 0; r < noise.rows(); ++r)
      for (Eigen::Index c = 0; c < noise.cols(); ++c) noise(r, c) = rng.gaussian();
    BatchedGenForward gf = gen_forward_batch(gen, noise, cfg.tau, rng);

    std::vector<LatentPair> sim;
    sim.reserve(B);
    for (Eigen::Index r = 0; r < gf.latent.rows(); ++r) {
      int a = argmax_index(gf.y_soft.row(r));
      sim.push_back({gf.latent.row(r), a});
      history.push(gf.latent.row(r), a, rng);
    }
    auto mis = mismatch_negatives(pairs, catalog_size, rng, n_mis);
    sim.insert(sim.end(), mis.begin(), mis.end());
    for (int i = 0; i < n_hist; ++i) {
      const auto& [latent, action] = history.sample(rng);
      sim.push_back({latent, action});
    }

    std::vector<LatentPair> real;
    real.reserve(B);
    for (int i = 0; i < B; ++i)
      real.push_back(pairs[rng.uniform_int(pairs.size())]);

    // ---- discriminator step: minimize BCE over equal real/sim mixture ----
    Matrix x_real = disc_inputs(real, embedding);
    Matrix x_sim = disc_inputs(sim, embedding);
    ForwardCache cache_real, cache_sim;
    Matrix logit_real = diffcore::forward(disc.net, x_real, &cache_real);
    Matrix logit_sim = diffcore::forward(disc.net, x_sim, &cache_sim);
    double d_loss = 0.0;
    Matrix dlr(logit_real.rows(), 1), dls(logit_sim.rows(), 1);
    for (Eigen::Index i = 0; i < logit_real.rows(); ++i) {
      double l = logit_real(i, 0);
      d_loss += std::max(l, 0.0) - l + std::log1p(std::exp(-std::abs(l)));
      dlr(i, 0) = (sigmoid(l) - 1.0) / logit_real.rows();
    }
    for (Eigen::Index i = 0; i < logit_sim.rows(); ++i) {
      double l = logit_sim(i, 0);
      d_loss += std::max(l, 0.0) + std::log1p(std::exp(-std::abs(l)));
      dls(i, 0) = sigmoid(l) / logit_sim.rows();
    }
    d_loss /= static_cast<double>(logit_real.rows() + logit_sim.rows());
    if (!std::isfinite(d_loss))
      throw diffcore::TrainingError("train_reward: non-finite discriminator loss");
    NetGrads d_grads;
    diffcore::backward(disc.net, cache_real, dlr, d_grads);
    NetGrads d_grads_sim;
    diffcore::backward(disc.net, cache_sim, dls, d_grads_sim);
    d_grads.accumulate(d_grads_sim);
    diffcore::step(disc.net, d_grads, opt_d);

    // ---- generator step: minimize E[log(1 - D(sim))] ----
    Matrix g_noise(B, cfg.noise_dim);
    for (Eigen::Index r = 0; r < g_noise.rows(); ++r)
      for (Eigen::Index c = 0; c < g_noise.cols(); ++c)
        g_noise(r, c) = rng.gaussian();
    BatchedGenForward gfw = gen_forward_batch(gen, g_noise, cfg.tau, rng);
    const Matrix& action_fwd = cfg.hard_action_to_disc ? gfw.a_hard : gfw.y_soft;
    Matrix x_g(B, latent_dim + embedding.dim());
    x_g.leftCols(latent_dim) = gfw.latent;
    x_g.rightCols(embedding.dim()) = action_fwd * embedding.rows;
    ForwardCache cache_g;
    Matrix logit_g = diffcore::forward(disc.net, x_g, &cache_g);
    Matrix dlg(B, 1);
    double g_loss = 0.0;
    for (int i = 0; i < B; ++i) {
      double l = logit_g(i, 0);
      // log(1 - sigmoid(l)) = -max(l,0) - log1p(exp(-|l|))
      g_loss += -std::max(l, 0.0) - std::log1p(std::exp(-std::abs(l)));
      dlg(i, 0) = -sigmoid(l) / B;
    }
    g_loss /= B;
    NetGrads scratch;
    Matrix dx = diffcore::backward(disc.net, cache_g, dlg, scratch);
    Matrix d_latent = dx.leftCols(latent_dim);
    // straight-through: gradient at the hard action passes to the soft sample
    Matrix d_action = dx.rightCols(embedding.dim()) * embedding.rows.transpose();
    GeneratorGrads g_grads = GeneratorGrads::zeros_like(gen);
    gen_backward_batch(gen, gfw, d_latent, d_action, cfg.tau, g_grads);
    diffcore::step(gen.trunk, g_grads.trunk, opt_g_trunk);
    diffcore::step(gen.action_head, g_grads.action_head, opt_g_action);
    diffcore::step(gen.state_head, g_grads.state_head, opt_g_state);

    if (step_i % cfg.eval_every == 0 || step_i == cfg.steps) {
      double auc = eval_auc();
      result.curve.push_back({step_i, d_loss, g_loss, auc});
      if (auc > best_auc + 1e-4) {
        best_auc = auc;
        best_disc = disc;
        evals_since_best = 0;
      } else if (++evals_since_best >= cfg.patience) {
        break;
      }
    }
  }

  result.model = RewardModel(best_disc, vae, embedding, cfg.t_max);
  result.final_auc = best_auc;
  return result;
}

}  // namespace dialrl::rewardgan
