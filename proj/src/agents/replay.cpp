#include "dialrl/agents/replay.hpp"

#include "dialrl/diffcore/net.hpp"

namespace dialrl::agents {

void ReplayBuffer::seed_expert(std::vector<Transition> transitions) {
  for (auto& t : transitions) {
    t.expert = true;
    if (expert_.size() + agent_.size() >= capacity_) break;
    expert_.push_back(std::move(t));
  }
}

void ReplayBuffer::push(Transition t) {
  t.expert = false;
  std::size_t agent_capacity =
      capacity_ > expert_.size() ? capacity_ - expert_.size() : 0;
  if (agent_capacity == 0) return;
  if (agent_.size() < agent_capacity) {
    agent_.push_back(std::move(t));
  } else {
    if (agent_next_ >= agent_.size()) agent_next_ = 0;
    agent_[agent_next_] = std::move(t);
    agent_next_ = (agent_next_ + 1) % agent_.size();
  }
}

void ReplayBuffer::evict_expert_down_to(std::size_t target, Rng& rng) {
  while (expert_.size() > target) {
    std::size_t i = rng.uniform_int(expert_.size());
    expert_[i] = std::move(expert_.back());
    expert_.pop_back();
  }
}

const Transition& ReplayBuffer::sample(Rng& rng) const {
  std::size_t n = size();
  if (n == 0) throw diffcore::BadInput("replay buffer empty");
  std::size_t i = rng.uniform_int(n);
  return i < expert_.size() ? expert_[i] : agent_[i - expert_.size()];
}

std::size_t WarmupSchedule::target_expert_count(std::size_t seeded,
                                                long frames) const {
  if (mode == Mode::Keep) return seeded;
  if (frames >= decay_horizon) return 0;
  double frac = 1.0 - static_cast<double>(frames) / decay_horizon;
  return static_cast<std::size_t>(seeded * frac);
}

}  // namespace dialrl::agents
