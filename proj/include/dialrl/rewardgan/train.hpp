#pragma once

#include "dialrl/dialenv/corpus.hpp"
#include "dialrl/rewardgan/generator.hpp"
#include "dialrl/rewardgan/reward_model.hpp"

namespace dialrl::rewardgan {

// Ring store of simulated (latent, action index) pairs with random
// replacement once full.
class HistoryBuffer {
 public:
  explicit HistoryBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(const Vector& latent, int action, Rng& rng);
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::pair<Vector, int>& sample(Rng& rng) const;

 private:
  std::size_t capacity_;
  std::vector<std::pair<Vector, int>> entries_;
};

struct LatentPair {
  Vector latent;
  int action = 0;
};

// Corpus pairs with the action replaced by a uniformly random different one.
std::vector<LatentPair> mismatch_negatives(
    const std::vector<LatentPair>& corpus_pairs, int catalog_size, Rng& rng,
    int n);

struct RewardTrainConfig {
  int noise_dim = 64;
  int hidden = 128;
  double tau = 0.8;
  int batch = 64;
  int steps = 3000;
  int eval_every = 200;
  int patience = 5;       // early stop on held-out AUC plateau
  double lr_d = 1e-3;
  double lr_g = 1e-3;
  int history_capacity = 10000;
  double frac_generator = 0.70;
  double frac_mismatch = 0.15;
  double frac_history = 0.15;
  bool hard_action_to_disc = true;  // straight-through forward at D input
  double holdout_fraction = 0.1;
  int t_max = 40;
};

struct RewardCurvePoint {
  int step;
  double d_loss, g_loss, auc;
};

struct RewardTrainResult {
  RewardModel model;
  std::vector<RewardCurvePoint> curve;
  double final_auc = 0.0;
};

// Precomputed encoder means for corpus (state, action) pairs.
std::vector<LatentPair> encode_corpus_pairs(const dialenv::Corpus& corpus,
                                            const statevae::VaeParams& vae,
                                            const ActionEmbedding& embedding);

// Alternating discriminator/generator updates against the three negative
// sources; the generator is discarded and the best-AUC discriminator kept.
RewardTrainResult train_reward(const dialenv::Corpus& corpus,
                               const statevae::VaeParams& vae,
                               const ActionEmbedding& embedding,
                               const RewardTrainConfig& cfg, Rng& rng);

// Rank-based AUC for positive scores vs negative scores.
double auc_score(const std::vector<double>& pos, const std::vector<double>& neg);

}  // namespace dialrl::rewardgan
