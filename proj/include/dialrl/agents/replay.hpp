#pragma once

#include "dialrl/dialenv/env.hpp"
#include "dialrl/diffcore/net.hpp"

namespace dialrl::agents {

using dialenv::StateVector;
using diffcore::Matrix;
using diffcore::Vector;

struct Transition {
  StateVector state;
  int action = 0;
  double reward = 0.0;
  StateVector next_state;
  bool done = false;
  bool expert = false;
};

// Uniform-sampling replay store. Expert entries live alongside agent
// entries; agent entries form a ring within the remaining capacity.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

  void seed_expert(std::vector<Transition> transitions);
  void push(Transition t);
  // Randomly evicts expert entries until at most `target` remain.
  void evict_expert_down_to(std::size_t target, Rng& rng);

  std::size_t size() const { return expert_.size() + agent_.size(); }
  std::size_t expert_count() const { return expert_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& sample(Rng& rng) const;

 private:
  std::size_t capacity_;
  std::vector<Transition> expert_;
  std::vector<Transition> agent_;
  std::size_t agent_next_ = 0;
};

// Expert warm-up schedule. Removal mode decays the expert share linearly to
// zero over `decay_horizon` frames; keep mode never evicts.
struct WarmupSchedule {
  enum class Mode { Removal, Keep };
  Mode mode = Mode::Removal;
  long decay_horizon = 25000;

  // target expert count given the seeded count and frames elapsed
  std::size_t target_expert_count(std::size_t seeded, long frames) const;
};

}  // namespace dialrl::agents
