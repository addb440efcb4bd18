#include "dialrl/xfer/transfer.hpp"

namespace dialrl::xfer {

using dialenv::Corpus;
using dialenv::EnvConfig;
using rewardgan::RewardModel;

TransferReport transfer_experiment(const TransferConfig& cfg, Rng& rng) {
  cfg.spec.validate(cfg.env.schemas);

  Corpus full = dialenv::gen_corpus(cfg.env, cfg.corpus_episodes, cfg.corpus_noise,
                                    cfg.catalog_size, rng);
  Corpus filtered = filter_corpus(full, cfg.spec);

  TransferReport report;
  report.audit = audit_corpus(filtered, cfg.spec.holdout);
  if (!report.audit.passed)
    throw ConfigError("transfer_experiment: corpus audit failed, " +
                      std::to_string(report.audit.holdout_pairs) +
                      " held-out pairs leaked");

  ActionVocab vocab = ActionVocab::from_schemas(cfg.env.schemas);
  auto emb_full = factored_embedding(full.catalog, vocab);
  auto emb_filtered = factored_embedding(filtered.catalog, vocab);

  // Reward model trained without the held-out domain, then re-based onto the
  // full catalog: the discriminator only sees the factored segments, so the
  // same frozen net scores actions it never trained on.
  auto vae_filtered =
      statevae::train_vae(filtered.all_states(), filtered.state_dim, cfg.vae, rng);
  auto holdout_trained = rewardgan::train_reward(filtered, vae_filtered.params,
                                                 emb_filtered, cfg.reward, rng);
  RewardModel reward_holdout(holdout_trained.model.discriminator(),
                             holdout_trained.model.encoder(), emb_full,
                             cfg.reward.t_max);

  auto vae_full = statevae::train_vae(full.all_states(), full.state_dim, cfg.vae,
                                      rng);
  auto full_trained =
      rewardgan::train_reward(full, vae_full.params, emb_full, cfg.reward, rng);
  const RewardModel& reward_full = full_trained.model;

  EnvConfig env_new = cfg.env;
  env_new.goal_domains = {cfg.spec.holdout};

  report.runs.push_back(
      {"full_domain",
       agents::train_agent(agents::Algo::Dqn, agents::RewardSource::GanVae,
                           env_new, full, &reward_full, cfg.agent, rng)});
  report.runs.push_back(
      {"holdout",
       agents::train_agent(agents::Algo::Dqn, agents::RewardSource::GanVae,
                           env_new, full, &reward_holdout, cfg.agent, rng)});
  report.runs.push_back(
      {"handcrafted",
       agents::train_agent(agents::Algo::Dqn, agents::RewardSource::Human,
                           env_new, full, nullptr, cfg.agent, rng)});
  return report;
}

}  // namespace dialrl::xfer
