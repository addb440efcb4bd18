#include "dialrl/agents/dqn.hpp"

#include <cmath>

namespace dialrl::agents {

using diffcore::Activation;

QNet QNet::init(int state_dim, int n_actions, int hidden, Rng& rng) {
  QNet q;
  q.online = diffcore::NetParams::glorot(
      {{state_dim, hidden, hidden, n_actions},
       {Activation::Relu, Activation::Relu, Activation::Identity}},
      rng);
  q.target = q.online;
  return q;
}

int greedy_action(const diffcore::NetParams& net, const StateVector& s) {
  Matrix q = diffcore::forward(net, s.transpose());
  int best = 0;
  for (Eigen::Index i = 1; i < q.cols(); ++i)
    if (q(0, i) > q(0, best)) best = static_cast<int>(i);
  return best;
}

int dqn_select(const QNet& q, const StateVector& s, double epsilon, Rng& rng) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw diffcore::BadInput("dqn_select: epsilon out of range");
  if (rng.uniform01() < epsilon)
    return static_cast<int>(rng.uniform_int(q.online.spec.output_size()));
  return greedy_action(q.online, s);
}

double dqn_update(QNet& q, const std::vector<const Transition*>& batch,
                  double gamma, diffcore::OptState& opt) {
  if (batch.empty()) throw diffcore::BadInput("dqn_update: empty batch");
  const int B = static_cast<int>(batch.size());
  const int d = q.online.spec.input_size();

  Matrix s(B, d), s2(B, d);
  for (int i = 0; i < B; ++i) {
    s.row(i) = batch[i]->state.transpose();
    s2.row(i) = batch[i]->next_state.transpose();
  }
  diffcore::ForwardCache cache;
  Matrix q_all = diffcore::forward(q.online, s, &cache);
  Matrix q_next = diffcore::forward(q.target, s2);

  double loss = 0.0;
  Matrix dq = Matrix::Zero(q_all.rows(), q_all.cols());
  for (int i = 0; i < B; ++i) {
    double target = batch[i]->reward;
    if (!batch[i]->done) target += gamma * q_next.row(i).maxCoeff();
    if (!std::isfinite(target))
      throw diffcore::TrainingError("dqn_update: non-finite target");
    double err = q_all(i, batch[i]->action) - target;
    loss += err * err;
    dq(i, batch[i]->action) = 2.0 * err / B;
  }
  loss /= B;

  diffcore::NetGrads grads;
  diffcore::backward(q.online, cache, dq, grads);
  diffcore::clip_grad_norm(grads, 10.0);
  diffcore::step(q.online, grads, opt);
  return loss;
}

}  // namespace dialrl::agents
