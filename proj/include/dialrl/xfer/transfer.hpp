#pragma once

#include "dialrl/agents/train.hpp"
#include "dialrl/rewardgan/train.hpp"
#include "dialrl/statevae/vae.hpp"
#include "dialrl/xfer/factored.hpp"
#include "dialrl/xfer/holdout.hpp"

namespace dialrl::xfer {

struct TransferConfig {
  dialenv::EnvConfig env;  // full schema set; goal restriction applied here
  HoldoutSpec spec;
  int corpus_episodes = 400;
  double corpus_noise = 0.15;
  int catalog_size = 60;
  statevae::VaeConfig vae;
  rewardgan::RewardTrainConfig reward;
  agents::AgentConfig agent;
  bool factored_agent = false;  // one-hot Q-net action space is the default
};

struct TransferRun {
  std::string label;  // full_domain | holdout | handcrafted
  agents::TrainAgentResult result;
};

struct TransferReport {
  AuditResult audit;  // on the filtered reward-training corpus
  std::vector<TransferRun> runs;
};

// §-style protocol: reward trained without the held-out domain (factored
// actions), then a fresh DQN agent on held-out-only goals under the
// transferred, the handcrafted, and the full-domain reward.
TransferReport transfer_experiment(const TransferConfig& cfg, Rng& rng);

}  // namespace dialrl::xfer
