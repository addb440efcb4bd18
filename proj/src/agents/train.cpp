#include "dialrl/agents/train.hpp"

#include <cmath>

#include "dialrl/errors.hpp"

namespace dialrl::agents {

using dialenv::ActionCatalog;
using dialenv::CompositeAct;
using dialenv::DialogueSession;
using dialenv::EnvConfig;
using dialenv::RewardFn;
using dialenv::StateVector;
using dialenv::TurnStatus;

Algo algo_from_string(const std::string& s) {
  if (s == "dqn") return Algo::Dqn;
  if (s == "wdqn") return Algo::Wdqn;
  if (s == "wdqn_keep") return Algo::WdqnKeep;
  if (s == "ppo") return Algo::Ppo;
  throw diffcore::BadInput("unknown algo: " + s);
}

RewardSource reward_source_from_string(const std::string& s) {
  if (s == "human") return RewardSource::Human;
  if (s == "gan_vae") return RewardSource::GanVae;
  if (s == "gan_ae") return RewardSource::GanAe;
  throw diffcore::BadInput("unknown reward source: " + s);
}

std::string to_string(Algo a) {
  switch (a) {
    case Algo::Dqn: return "dqn";
    case Algo::Wdqn: return "wdqn";
    case Algo::WdqnKeep: return "wdqn_keep";
    case Algo::Ppo: return "ppo";
  }
  return "?";
}

std::string to_string(RewardSource r) {
  switch (r) {
    case RewardSource::Human: return "human";
    case RewardSource::GanVae: return "gan_vae";
    case RewardSource::GanAe: return "gan_ae";
  }
  return "?";
}

dialenv::Policy greedy_policy(const diffcore::NetParams& net) {
  return [&net](const StateVector& s) {
    Matrix out = diffcore::forward(net, s.transpose());
    int best = 0;
    for (Eigen::Index i = 1; i < out.cols(); ++i)
      if (out(0, i) > out(0, best)) best = static_cast<int>(i);
    return best;
  };
}

namespace {

RewardFn make_reward_fn(RewardSource source, const EnvConfig& env,
                        const ActionCatalog& catalog,
                        const rewardgan::RewardModel* model) {
  if (source == RewardSource::Human) return dialenv::handcrafted_reward_fn(env.t_max);
  if (!model)
    throw ConfigError("reward source " + to_string(source) +
                      " requires a reward model checkpoint");
  if (model->embedding().rows.rows() != catalog.size())
    throw ConfigError("reward model catalog size mismatch");
  return model->reward_fn(catalog);
}

std::vector<Transition> expert_transitions(const dialenv::Corpus& corpus,
                                           const ActionCatalog& catalog,
                                           const RewardFn& reward,
                                           std::size_t limit) {
  std::vector<Transition> out;
  for (const auto& ep : corpus.episodes) {
    for (const auto& t : ep.turns) {
      if (out.size() >= limit) return out;
      Transition tr;
      tr.state = t.state;
      tr.action = t.action;
      tr.reward = reward(t.state, catalog[t.action], t.status);
      tr.next_state = t.next_state;
      tr.done = t.done;
      tr.expert = true;
      out.push_back(std::move(tr));
    }
  }
  return out;
}

double mean_log_d(const diffcore::NetParams& policy_net, const EnvConfig& env,
                  const ActionCatalog& catalog,
                  const rewardgan::RewardModel* model, int episodes, Rng& rng) {
  if (!model) return 0.0;
  auto policy = greedy_policy(policy_net);
  double sum = 0.0;
  long n = 0;
  for (int e = 0; e < episodes; ++e) {
    DialogueSession session(env, rng);
    while (!session.done()) {
      StateVector s = session.state();
      int a = policy(s);
      session.step(catalog[a]);
      sum += model->log_d(s, a);
      ++n;
    }
  }
  return n > 0 ? sum / n : 0.0;
}

struct BestTracker {
  double success = -1.0;
  double turns = 1e9;
  diffcore::NetParams params;

  void consider(double s, double t, const diffcore::NetParams& p) {
    if (s > success || (s == success && t < turns)) {
      success = s;
      turns = t;
      params = p;
    }
  }
};

TrainAgentResult train_dqn_family(Algo algo, RewardSource source,
                                  const EnvConfig& env,
                                  const dialenv::Corpus& corpus,
                                  const rewardgan::RewardModel* model,
                                  const AgentConfig& cfg, Rng& rng) {
  const ActionCatalog& catalog = corpus.catalog;
  RewardFn reward = make_reward_fn(source, env, catalog, model);

  QNet q = QNet::init(env.layout.dim(), catalog.size(), cfg.hidden, rng);
  auto opt = diffcore::OptState::adam(cfg.lr);
  ReplayBuffer buffer(cfg.buffer_capacity);

  WarmupSchedule schedule;
  std::size_t seeded = 0;
  if (algo == Algo::Wdqn || algo == Algo::WdqnKeep) {
    schedule.mode = algo == Algo::Wdqn ? WarmupSchedule::Mode::Removal
                                       : WarmupSchedule::Mode::Keep;
    schedule.decay_horizon =
        std::max<long>(1, static_cast<long>(cfg.budget_frames * cfg.warmup_decay_frac));
    buffer.seed_expert(
        expert_transitions(corpus, catalog, reward, cfg.warmup_seed_transitions));
    seeded = buffer.expert_count();
  }

  TrainAgentResult result;
  result.algo = algo;
  BestTracker best;

  // Evaluation consumes its own stream so eval cadence never perturbs the
  // training trajectory.
  Rng eval_rng = rng.substream("eval");
  auto run_eval = [&](long frames) {
    auto eval = dialenv::evaluate(greedy_policy(q.online), env, catalog,
                                  cfg.eval_episodes, eval_rng);
    double mld = mean_log_d(q.online, env, catalog, model, 20, eval_rng);
    result.curve.push_back({frames, eval.success_rate, eval.average_turn, mld});
    best.consider(eval.success_rate, eval.average_turn, q.online);
  };
  run_eval(0);

  long decay_frames =
      std::max<long>(1, static_cast<long>(cfg.budget_frames * cfg.eps_decay_frac));
  DialogueSession session(env, rng);
  for (long frames = 1; frames <= cfg.budget_frames; ++frames) {
    double eps =
        frames >= decay_frames
            ? cfg.eps_end
            : cfg.eps_start + (cfg.eps_end - cfg.eps_start) * frames / decay_frames;
    StateVector s = session.state();
    int a = dqn_select(q, s, eps, rng);
    auto res = session.step(catalog[a]);
    Transition tr;
    tr.state = std::move(s);
    tr.action = a;
    tr.reward = reward(tr.state, catalog[a], res.status);
    tr.next_state = res.next_state;
    tr.done = res.done;
    buffer.push(std::move(tr));
    if (session.done()) session = DialogueSession(env, rng);

    if (seeded > 0 && schedule.mode == WarmupSchedule::Mode::Removal &&
        frames % 250 == 0)
      buffer.evict_expert_down_to(schedule.target_expert_count(seeded, frames), rng);

    if (frames >= cfg.learn_start && buffer.size() >= static_cast<std::size_t>(cfg.batch)) {
      for (int u = 0; u < cfg.updates_per_frame; ++u) {
        std::vector<const Transition*> batch(cfg.batch);
        for (int i = 0; i < cfg.batch; ++i) batch[i] = &buffer.sample(rng);
        dqn_update(q, batch, cfg.gamma, opt);
      }
    }
    if (frames % cfg.target_sync == 0) q.sync_target();
    if (frames % cfg.eval_every == 0) run_eval(frames);
  }
  if (result.curve.back().frames < cfg.budget_frames) run_eval(cfg.budget_frames);

  // The retained model is the best-on-eval checkpoint; its evaluation is the
  // run's final performance.
  result.best_policy = best.params;
  result.final_success = best.success;
  result.final_turns = best.turns;
  return result;
}

TrainAgentResult train_ppo(RewardSource source, const EnvConfig& env,
                           const dialenv::Corpus& corpus,
                           const rewardgan::RewardModel* model,
                           const AgentConfig& cfg, Rng& rng) {
  const ActionCatalog& catalog = corpus.catalog;
  RewardFn reward = make_reward_fn(source, env, catalog, model);

  PolicyValueParams pv =
      PolicyValueParams::init(env.layout.dim(), catalog.size(), cfg.hidden, rng);
  auto warm = imitation_warmup(pv, corpus, cfg.imitation_epochs, cfg.imitation_lr,
                               env, cfg.eval_episodes, rng,
                               cfg.imitation_max_pairs);
  auto opt_policy = diffcore::OptState::adam(cfg.ppo.lr);
  auto opt_value = diffcore::OptState::adam(cfg.ppo.value_lr);
  auto opt_teacher = diffcore::OptState::adam(cfg.imitation_lr);

  TrainAgentResult result;
  result.algo = Algo::Ppo;
  result.warmup_success = warm.success_rate;
  BestTracker best;

  Rng eval_rng = rng.substream("eval");
  auto run_eval = [&](long frames) {
    auto eval = dialenv::evaluate(greedy_policy(pv.policy), env, catalog,
                                  cfg.eval_episodes, eval_rng);
    double mld = mean_log_d(pv.policy, env, catalog, model, 20, eval_rng);
    result.curve.push_back({frames, eval.success_rate, eval.average_turn, mld});
    best.consider(eval.success_rate, eval.average_turn, pv.policy);
  };
  run_eval(0);

  long frames = 0;
  long next_eval = cfg.eval_every;
  long next_teacher = cfg.teacher_every;
  while (frames < cfg.budget_frames) {
    std::vector<Trajectory> trajs;
    Trajectory current;
    DialogueSession session(env, rng);
    for (int step_i = 0; step_i < cfg.rollout_steps && frames < cfg.budget_frames;
         ++step_i) {
      StateVector s = session.state();
      Matrix logits = diffcore::forward(pv.policy, s.transpose());
      double m = logits.row(0).maxCoeff();
      double lse = std::log((logits.row(0).array() - m).exp().sum()) + m;
      Vector logp = (logits.row(0).array() - lse).transpose();
      Vector p = logp.array().exp();
      double u = rng.uniform01();
      int a = static_cast<int>(p.size()) - 1;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) {
          a = static_cast<int>(i);
          break;
        }
      }
      double value = diffcore::forward(pv.value, s.transpose())(0, 0);
      auto res = session.step(catalog[a]);
      RolloutStep step;
      step.state = std::move(s);
      step.action = a;
      step.reward = reward(step.state, catalog[a], res.status);
      step.old_log_prob = logp[a];
      step.value = value;
      step.done = res.done;
      current.push_back(std::move(step));
      ++frames;
      if (res.done) {
        trajs.push_back(std::move(current));
        current.clear();
        session = DialogueSession(env, rng);
      }
    }
    if (!current.empty()) {
      current.back().bootstrap_value =
          diffcore::forward(pv.value, session.state().transpose())(0, 0);
      trajs.push_back(std::move(current));
    }
    ppo_update(pv, trajs, cfg.ppo, opt_policy, opt_value);

    if (cfg.teacher_forcing && frames >= next_teacher) {
      supervised_policy_step(pv, corpus, cfg.batch, cfg.imitation_lr, opt_teacher,
                             rng);
      next_teacher += cfg.teacher_every;
    }
    if (frames >= next_eval) {
      run_eval(frames);
      while (next_eval <= frames) next_eval += cfg.eval_every;
    }
  }
  if (result.curve.back().frames < frames) run_eval(frames);

  result.best_policy = best.params;
  result.final_success = best.success;
  result.final_turns = best.turns;
  return result;
}

}  // namespace

TrainAgentResult train_agent(Algo algo, RewardSource source,
                             const dialenv::EnvConfig& env,
                             const dialenv::Corpus& corpus,
                             const rewardgan::RewardModel* reward_model,
                             const AgentConfig& cfg, Rng& rng) {
  if (algo == Algo::Ppo)
    return train_ppo(source, env, corpus, reward_model, cfg, rng);
  return train_dqn_family(algo, source, env, corpus, reward_model, cfg, rng);
}

}  // namespace dialrl::agents
