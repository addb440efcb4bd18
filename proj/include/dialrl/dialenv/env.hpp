#pragma once

#include <functional>

#include "dialrl/dialenv/catalog.hpp"
#include "dialrl/dialenv/user_sim.hpp"
#include "dialrl/dialenv/vectorizer.hpp"

namespace dialrl::dialenv {

enum class TurnStatus { Ongoing, Success, Failure };

// -1 per ongoing turn, +2T on success, -T on failure.
double handcrafted_reward(TurnStatus status, int t_max);

struct EnvConfig {
  SchemaSet schemas;
  StateLayout layout;
  int t_max = 40;
  int patience = 3;
  int min_domains = 1;
  int max_domains = 2;
  // restricts goal sampling (transfer runs); empty = all domains
  std::vector<std::string> goal_domains;

  static EnvConfig desk();
  std::vector<std::string> effective_goal_domains() const;
};

struct Turn {
  StateVector state;
  int action = -1;
  double reward = 0.0;
  StateVector next_state;
  bool done = false;
  TurnStatus status = TurnStatus::Ongoing;
};

struct EpisodeLog {
  UserGoal goal;
  std::vector<Turn> turns;
  bool success = false;
  int turn_count = 0;
};

using Policy = std::function<int(const StateVector&)>;

// One dialogue rolled incrementally: goal sampled at construction, the
// initial user turn applied, then one system action per step().
class DialogueSession {
 public:
  DialogueSession(const EnvConfig& env, Rng& rng);

  struct StepResult {
    StateVector next_state;
    bool done = false;
    TurnStatus status = TurnStatus::Ongoing;
  };

  const StateVector& state() const { return state_; }
  const TrackerState& tracker() const { return tracker_; }
  const AgendaState& agenda() const { return agenda_; }
  const UserGoal& goal() const { return agenda_.goal; }
  int turns() const { return turns_; }
  bool done() const { return done_; }

  StepResult step(const CompositeAct& act);

 private:
  const EnvConfig* env_;
  AgendaState agenda_;
  TrackerState tracker_;
  StateVector state_;
  int turns_ = 0;
  bool done_ = false;
};
// (state, action, status) -> reward for this turn
using RewardFn = std::function<double(const StateVector&, const CompositeAct&, TurnStatus)>;

RewardFn handcrafted_reward_fn(int t_max);

EpisodeLog run_episode(const Policy& policy, const EnvConfig& env,
                       const ActionCatalog& catalog, const RewardFn& reward,
                       Rng& rng);

struct EvalResult {
  double success_rate = 0.0;
  double average_turn = 0.0;
};

EvalResult evaluate(const Policy& policy, const EnvConfig& env,
                    const ActionCatalog& catalog, int n_episodes, Rng& rng);

// Oracle policy: sees the agenda. Finishes every satisfiable goal.
CompositeAct expert_act(const TrackerState& tracker, const AgendaState& agenda,
                        const SchemaSet& schemas);

// Episode rolled at act level (no catalog yet); used to build the corpus.
struct RawTurn {
  StateVector state;
  CompositeAct action;
  StateVector next_state;
  bool done = false;
  TurnStatus status = TurnStatus::Ongoing;
};

struct RawEpisode {
  UserGoal goal;
  std::vector<RawTurn> turns;
  bool success = false;
};

// Expert rollout with `noise` probability of swapping a turn's action for a
// random plausible alternative.
RawEpisode run_expert_episode(const EnvConfig& env, Rng& rng, double noise);

}  // namespace dialrl::dialenv
