#pragma once

#include "dialrl/agents/replay.hpp"
#include "dialrl/diffcore/optimizer.hpp"

namespace dialrl::agents {

using diffcore::Matrix;
using diffcore::Vector;

struct QNet {
  diffcore::NetParams online;
  diffcore::NetParams target;

  static QNet init(int state_dim, int n_actions, int hidden, Rng& rng);
  void sync_target() { target = online; }
};

// epsilon-greedy over Q(s, .); greedy ties resolve to the lowest index.
int dqn_select(const QNet& q, const StateVector& s, double epsilon, Rng& rng);

int greedy_action(const diffcore::NetParams& net, const StateVector& s);

// One TD step on a sampled batch: target = r + gamma*(1-done)*max Q_target.
// Gradients clipped to norm 10. Returns the mean squared TD error.
double dqn_update(QNet& q, const std::vector<const Transition*>& batch,
                  double gamma, diffcore::OptState& opt);

}  // namespace dialrl::agents
