#pragma once

#include <optional>

#include "dialrl/agents/dqn.hpp"
#include "dialrl/agents/ppo.hpp"
#include "dialrl/rewardgan/reward_model.hpp"

namespace dialrl::agents {

enum class Algo { Dqn, Wdqn, WdqnKeep, Ppo };
enum class RewardSource { Human, GanVae, GanAe };

Algo algo_from_string(const std::string& s);
RewardSource reward_source_from_string(const std::string& s);
std::string to_string(Algo a);
std::string to_string(RewardSource r);

struct AgentConfig {
  long budget_frames = 100000;  // frames = environment turns
  long eval_every = 5000;
  int eval_episodes = 200;
  int hidden = 128;
  // DQN family
  std::size_t buffer_capacity = 50000;
  int batch = 64;
  long target_sync = 1000;
  double gamma = 0.99;
  double lr = 1e-3;
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_decay_frac = 0.2;   // fraction of budget for the linear decay
  long learn_start = 500;        // frames before updates begin
  int updates_per_frame = 1;
  double warmup_decay_frac = 0.25;  // removal-mode horizon as budget fraction
  std::size_t warmup_seed_transitions = 10000;
  // PPO family
  PpoConfig ppo;
  int rollout_steps = 2048;
  int imitation_epochs = 2;
  int imitation_max_pairs = 600;  // 0 = every corpus pair
  double imitation_lr = 1e-3;
  bool teacher_forcing = false;
  long teacher_every = 2048;  // frames between supervised steps
};

struct CurvePoint {
  long frames;
  double success_rate;
  double average_turn;
  double mean_learned_reward;  // mean per-turn log D when a model is present
};

struct TrainAgentResult {
  diffcore::NetParams best_policy;  // Q-net or policy logits net
  Algo algo;
  std::vector<CurvePoint> curve;
  double final_success = 0.0;   // of the best-on-eval checkpoint
  double final_turns = 0.0;
  double warmup_success = 0.0;  // PPO imitation baseline (0 otherwise)
};

// Greedy policy over the stored net (argmax of outputs).
dialenv::Policy greedy_policy(const diffcore::NetParams& net);

TrainAgentResult train_agent(Algo algo, RewardSource source,
                             const dialenv::EnvConfig& env,
                             const dialenv::Corpus& corpus,
                             const rewardgan::RewardModel* reward_model,
                             const AgentConfig& cfg, Rng& rng);

}  // namespace dialrl::agents
