#pragma once

#include "dialrl/agents/replay.hpp"
#include "dialrl/dialenv/corpus.hpp"
#include "dialrl/diffcore/optimizer.hpp"

namespace dialrl::agents {

struct PolicyValueParams {
  diffcore::NetParams policy;  // state -> action logits
  diffcore::NetParams value;   // state -> scalar

  static PolicyValueParams init(int state_dim, int n_actions, int hidden, Rng& rng);
};

Vector policy_probs(const diffcore::NetParams& policy, const StateVector& s);
int sample_from_policy(const diffcore::NetParams& policy, const StateVector& s,
                       Rng& rng);

struct RolloutStep {
  StateVector state;
  int action = 0;
  double reward = 0.0;
  double old_log_prob = 0.0;
  double value = 0.0;  // V(s) at collection time
  bool done = false;
  // V(s') for the last step of a rollout-truncated episode, 0 otherwise
  double bootstrap_value = 0.0;
};

using Trajectory = std::vector<RolloutStep>;  // one complete episode

// Per-episode generalized advantage estimates and discounted-lambda returns.
void gae(const Trajectory& episode, double gamma, double lam,
         std::vector<double>& advantages, std::vector<double>& returns);

struct PpoLosses {
  double policy_loss = 0.0;
  double value_loss = 0.0;
};

struct PpoConfig {
  double clip_eps = 0.2;
  double gamma = 0.99;
  double lam = 0.95;
  int epochs = 4;
  int value_epochs = 16;
  double lr = 3e-4;
  double value_lr = 1e-3;
  double entropy_coef = 0.01;
  bool normalize_advantages = true;
};

PpoLosses ppo_update(PolicyValueParams& pv, const std::vector<Trajectory>& trajs,
                     const PpoConfig& cfg, diffcore::OptState& opt_policy,
                     diffcore::OptState& opt_value);

struct WarmupResult {
  double train_accuracy = 0.0;
  double success_rate = 0.0;
};

// Cross-entropy on expert (state -> action) pairs, then an evaluation run.
// `max_pairs` caps the training subset (0 = use every pair).
WarmupResult imitation_warmup(PolicyValueParams& pv, const dialenv::Corpus& corpus,
                              int epochs, double lr, const dialenv::EnvConfig& env,
                              int eval_episodes, Rng& rng, int max_pairs = 0);

// One supervised step on a random expert batch (teacher forcing).
void supervised_policy_step(PolicyValueParams& pv, const dialenv::Corpus& corpus,
                            int batch, double lr, diffcore::OptState& opt,
                            Rng& rng);

}  // namespace dialrl::agents
