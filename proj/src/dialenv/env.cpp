#include "dialrl/dialenv/env.hpp"

namespace dialrl::dialenv {

double handcrafted_reward(TurnStatus status, int t_max) {
  switch (status) {
    case TurnStatus::Ongoing: return -1.0;
    case TurnStatus::Success: return 2.0 * t_max;
    case TurnStatus::Failure: return -1.0 * t_max;
  }
  return 0.0;
}

RewardFn handcrafted_reward_fn(int t_max) {
  return [t_max](const StateVector&, const CompositeAct&, TurnStatus status) {
    return handcrafted_reward(status, t_max);
  };
}

EnvConfig EnvConfig::desk() {
  EnvConfig cfg;
  cfg.schemas = desk_schemas();
  cfg.layout = build_layout(cfg.schemas);
  return cfg;
}

std::vector<std::string> EnvConfig::effective_goal_domains() const {
  return goal_domains.empty() ? schemas.domain_names() : goal_domains;
}

DialogueSession::DialogueSession(const EnvConfig& env, Rng& rng) : env_(&env) {
  UserGoal goal = sample_goal_from(rng, env.schemas, env.effective_goal_domains(),
                                   env.min_domains, env.max_domains);
  agenda_ = init_agenda(goal);
  tracker_ = init_tracker(env.schemas);
  UserStepResult ur = user_step(agenda_, CompositeAct{}, env.schemas, env.patience);
  tracker_ = track_state(tracker_, ur.user_acts, env.schemas);
  state_ = vectorize_state(tracker_, env.layout);
}

DialogueSession::StepResult DialogueSession::step(const CompositeAct& act) {
  if (done_) throw SchemaError("step on finished dialogue");
  ++turns_;
  UserStepResult ur = user_step(agenda_, act, env_->schemas, env_->patience);
  tracker_ = track_state(tracker_, ur.user_acts, env_->schemas);
  StepResult out;
  out.next_state = vectorize_state(tracker_, env_->layout);
  out.done = ur.user_done || turns_ >= env_->t_max;
  out.status = !out.done ? TurnStatus::Ongoing
                         : (ur.user_done && ur.success ? TurnStatus::Success
                                                       : TurnStatus::Failure);
  done_ = out.done;
  state_ = out.next_state;
  return out;
}

namespace {

template <typename ActFn>
void roll(const EnvConfig& env, Rng& rng, const ActFn& system_turn,
          bool& success_out, std::function<void(const StateVector&, const CompositeAct&,
                                                const StateVector&, bool, TurnStatus)>
                                 record) {
  DialogueSession session(env, rng);
  success_out = false;
  while (!session.done()) {
    StateVector s = session.state();
    CompositeAct act = system_turn(s, session.tracker(), session.agenda());
    auto r = session.step(act);
    record(s, act, r.next_state, r.done, r.status);
    if (r.done) {
      success_out = r.status == TurnStatus::Success;
      return;
    }
  }
}

}  // namespace

EpisodeLog run_episode(const Policy& policy, const EnvConfig& env,
                       const ActionCatalog& catalog, const RewardFn& reward,
                       Rng& rng) {
  EpisodeLog log;
  bool success = false;
  UserGoal goal_copy;
  roll(
      env, rng,
      [&](const StateVector& s, const TrackerState&, const AgendaState& agenda) {
        goal_copy = agenda.goal;
        return catalog[policy(s)];
      },
      success,
      [&](const StateVector& s, const CompositeAct& a, const StateVector& sn,
          bool done, TurnStatus status) {
        Turn turn;
        turn.state = s;
        turn.action = *catalog.index_of(a);
        turn.reward = reward(s, a, status);
        turn.next_state = sn;
        turn.done = done;
        turn.status = status;
        log.turns.push_back(std::move(turn));
      });
  log.goal = goal_copy;
  log.success = success;
  log.turn_count = static_cast<int>(log.turns.size());
  return log;
}

EvalResult evaluate(const Policy& policy, const EnvConfig& env,
                    const ActionCatalog& catalog, int n_episodes, Rng& rng) {
  if (n_episodes < 1) throw SchemaError("evaluate: need >= 1 episode");
  RewardFn reward = handcrafted_reward_fn(env.t_max);
  double successes = 0.0, turns = 0.0;
  for (int i = 0; i < n_episodes; ++i) {
    EpisodeLog log = run_episode(policy, env, catalog, reward, rng);
    successes += log.success ? 1.0 : 0.0;
    turns += log.turn_count;
  }
  return {successes / n_episodes, turns / n_episodes};
}

namespace {

// A plausible wrong action used for corpus noise. Stays within the goal
// domain restriction so a restricted corpus never leaks other domains.
CompositeAct random_alternative(const EnvConfig& env, Rng& rng) {
  const auto allowed = env.effective_goal_domains();
  const DomainSchema& d = env.schemas.at(allowed[rng.uniform_int(allowed.size())]);
  double roll = rng.uniform01();
  if (roll < 0.4) {
    const auto& slot = d.requestable[rng.uniform_int(d.requestable.size())];
    return CompositeAct::of({{d.name, ActType::Inform, slot, ""}});
  }
  if (roll < 0.8) {
    const auto& slot = d.informable[rng.uniform_int(d.informable.size())];
    return CompositeAct::of({{d.name, ActType::Request, slot, ""}});
  }
  if (roll < 0.9 && d.bookable)
    return CompositeAct::of({{d.name, ActType::Book, "ref", ""}});
  return CompositeAct::of({{d.name, ActType::NoOffer, "none", ""}});
}

}  // namespace

RawEpisode run_expert_episode(const EnvConfig& env, Rng& rng, double noise) {
  RawEpisode ep;
  bool success = false;
  UserGoal goal_copy;
  roll(
      env, rng,
      [&](const StateVector&, const TrackerState& tracker, const AgendaState& agenda) {
        goal_copy = agenda.goal;
        CompositeAct act = expert_act(tracker, agenda, env.schemas);
        if (noise > 0.0 && rng.bernoulli(noise)) act = random_alternative(env, rng);
        return act;
      },
      success,
      [&](const StateVector& s, const CompositeAct& a, const StateVector& sn,
          bool done, TurnStatus status) {
        ep.turns.push_back({s, a, sn, done, status});
      });
  ep.goal = goal_copy;
  ep.success = success;
  return ep;
}

}  // namespace dialrl::dialenv
