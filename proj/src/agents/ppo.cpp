#include "dialrl/agents/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dialrl::agents {

using diffcore::Activation;
using diffcore::ForwardCache;
using diffcore::NetGrads;

PolicyValueParams PolicyValueParams::init(int state_dim, int n_actions, int hidden,
                                          Rng& rng) {
  PolicyValueParams pv;
  pv.policy = diffcore::NetParams::glorot(
      {{state_dim, hidden, hidden, n_actions},
       {Activation::Relu, Activation::Relu, Activation::Identity}},
      rng);
  pv.value = diffcore::NetParams::glorot(
      {{state_dim, hidden, 1}, {Activation::Relu, Activation::Identity}}, rng);
  return pv;
}

namespace {

Vector log_softmax_row(const Eigen::RowVectorXd& logits) {
  double m = logits.maxCoeff();
  double lse = std::log((logits.array() - m).exp().sum()) + m;
  return (logits.array() - lse).transpose();
}

}  // namespace

Vector policy_probs(const diffcore::NetParams& policy, const StateVector& s) {
  Matrix logits = diffcore::forward(policy, s.transpose());
  Vector logp = log_softmax_row(logits.row(0));
  return logp.array().exp();
}

int sample_from_policy(const diffcore::NetParams& policy, const StateVector& s,
                       Rng& rng) {
  Vector p = policy_probs(policy, s);
  double u = rng.uniform01();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size() - 1);
}

void gae(const Trajectory& episode, double gamma, double lam,
         std::vector<double>& advantages, std::vector<double>& returns) {
  const std::size_t T = episode.size();
  advantages.assign(T, 0.0);
  returns.assign(T, 0.0);
  double running = 0.0;
  for (std::size_t i = T; i-- > 0;) {
    const RolloutStep& step = episode[i];
    double next_value = step.done
                            ? 0.0
                            : (i + 1 < T ? episode[i + 1].value
                                         : step.bootstrap_value);
    double delta = step.reward + gamma * next_value - step.value;
    running = delta + gamma * lam * (step.done ? 0.0 : running);
    advantages[i] = running;
    returns[i] = advantages[i] + step.value;
  }
}

PpoLosses ppo_update(PolicyValueParams& pv, const std::vector<Trajectory>& trajs,
                     const PpoConfig& cfg, diffcore::OptState& opt_policy,
                     diffcore::OptState& opt_value) {
  std::vector<const RolloutStep*> steps;
  std::vector<double> adv, ret;
  for (const Trajectory& episode : trajs) {
    std::vector<double> a, r;
    gae(episode, cfg.gamma, cfg.lam, a, r);
    for (std::size_t i = 0; i < episode.size(); ++i) {
      steps.push_back(&episode[i]);
      adv.push_back(a[i]);
      ret.push_back(r[i]);
    }
  }
  const int N = static_cast<int>(steps.size());
  if (N == 0) throw diffcore::BadInput("ppo_update: no steps");

  if (cfg.normalize_advantages && N > 1) {
    double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / N;
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    double sd = std::sqrt(var / N) + 1e-8;
    for (double& a : adv) a = (a - mean) / sd;
  }

  const int d = pv.policy.spec.input_size();
  Matrix states(N, d);
  for (int i = 0; i < N; ++i) states.row(i) = steps[i]->state.transpose();

  PpoLosses losses;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // policy
    ForwardCache p_cache;
    Matrix logits = diffcore::forward(pv.policy, states, &p_cache);
    Matrix dlogits = Matrix::Zero(logits.rows(), logits.cols());
    double policy_loss = 0.0;
    for (int i = 0; i < N; ++i) {
      Vector logp = log_softmax_row(logits.row(i));
      Vector p = logp.array().exp();
      int a = steps[i]->action;
      double ratio = std::exp(logp[a] - steps[i]->old_log_prob);
      double clipped = std::clamp(ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps);
      double surr1 = ratio * adv[i];
      double surr2 = clipped * adv[i];
      policy_loss -= std::min(surr1, surr2) / N;
      double entropy = -(p.array() * logp.array()).sum();
      policy_loss -= cfg.entropy_coef * entropy / N;

      double dlogp_a = surr1 <= surr2 ? -ratio * adv[i] / N : 0.0;
      // d logp(a) / d logits = onehot(a) - p
      dlogits.row(i) += dlogp_a * (-p.transpose());
      dlogits(i, a) += dlogp_a;
      // entropy term: d(-c*H)/dlogits_j = c * p_j * (logp_j + H)
      dlogits.row(i) +=
          (cfg.entropy_coef / N) * (p.array() * (logp.array() + entropy)).matrix().transpose();
    }
    NetGrads p_grads;
    diffcore::backward(pv.policy, p_cache, dlogits, p_grads);
    diffcore::clip_grad_norm(p_grads, 10.0);
    diffcore::step(pv.policy, p_grads, opt_policy);
    losses.policy_loss = policy_loss;
  }

  // Value regression gets its own epoch count: returns are on the +-2T
  // scale, so the clipped updates need more iterations to track them.
  for (int epoch = 0; epoch < cfg.value_epochs; ++epoch) {
    ForwardCache v_cache;
    Matrix v = diffcore::forward(pv.value, states, &v_cache);
    Matrix dv(N, 1);
    double value_loss = 0.0;
    for (int i = 0; i < N; ++i) {
      double err = v(i, 0) - ret[i];
      value_loss += err * err / N;
      dv(i, 0) = 2.0 * err / N;
    }
    NetGrads v_grads;
    diffcore::backward(pv.value, v_cache, dv, v_grads);
    diffcore::clip_grad_norm(v_grads, 10.0);
    diffcore::step(pv.value, v_grads, opt_value);
    losses.value_loss = value_loss;
  }
  return losses;
}

WarmupResult imitation_warmup(PolicyValueParams& pv, const dialenv::Corpus& corpus,
                              int epochs, double lr, const dialenv::EnvConfig& env,
                              int eval_episodes, Rng& rng, int max_pairs) {
  auto pairs = corpus.state_action_pairs();
  if (pairs.empty()) throw diffcore::BadInput("imitation_warmup: empty corpus");
  if (max_pairs > 0 && pairs.size() > static_cast<std::size_t>(max_pairs)) {
    for (std::size_t i = pairs.size(); i > 1; --i)
      std::swap(pairs[i - 1], pairs[rng.uniform_int(i)]);
    pairs.resize(max_pairs);
  }
  auto opt = diffcore::OptState::adam(lr);
  const int d = pv.policy.spec.input_size();
  const int batch_size = 64;

  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t i = pairs.size(); i > 1; --i)
      std::swap(pairs[i - 1], pairs[rng.uniform_int(i)]);
    for (std::size_t start = 0; start < pairs.size(); start += batch_size) {
      std::size_t end = std::min(pairs.size(), start + batch_size);
      int B = static_cast<int>(end - start);
      Matrix states(B, d);
      for (int i = 0; i < B; ++i)
        states.row(i) = pairs[start + i].first->transpose();
      ForwardCache cache;
      Matrix logits = diffcore::forward(pv.policy, states, &cache);
      Matrix dlogits(B, logits.cols());
      for (int i = 0; i < B; ++i) {
        Vector logp = log_softmax_row(logits.row(i));
        Vector p = logp.array().exp();
        dlogits.row(i) = p.transpose() / B;
        dlogits(i, pairs[start + i].second) -= 1.0 / B;
      }
      NetGrads grads;
      diffcore::backward(pv.policy, cache, dlogits, grads);
      diffcore::clip_grad_norm(grads, 10.0);
      diffcore::step(pv.policy, grads, opt);
    }
  }

  WarmupResult result;
  long correct = 0;
  for (const auto& [s, a] : pairs) {
    Matrix logits = diffcore::forward(pv.policy, s->transpose());
    int best = 0;
    for (Eigen::Index j = 1; j < logits.cols(); ++j)
      if (logits(0, j) > logits(0, best)) best = static_cast<int>(j);
    if (best == a) ++correct;
  }
  result.train_accuracy = static_cast<double>(correct) / pairs.size();

  dialenv::Policy greedy = [&](const StateVector& s) {
    Matrix logits = diffcore::forward(pv.policy, s.transpose());
    int best = 0;
    for (Eigen::Index j = 1; j < logits.cols(); ++j)
      if (logits(0, j) > logits(0, best)) best = static_cast<int>(j);
    return best;
  };
  result.success_rate =
      dialenv::evaluate(greedy, env, corpus.catalog, eval_episodes, rng).success_rate;
  return result;
}

void supervised_policy_step(PolicyValueParams& pv, const dialenv::Corpus& corpus,
                            int batch, double lr, diffcore::OptState& opt,
                            Rng& rng) {
  (void)lr;
  auto pairs = corpus.state_action_pairs();
  const int d = pv.policy.spec.input_size();
  int B = std::min<int>(batch, static_cast<int>(pairs.size()));
  Matrix states(B, d);
  std::vector<int> actions(B);
  for (int i = 0; i < B; ++i) {
    const auto& [s, a] = pairs[rng.uniform_int(pairs.size())];
    states.row(i) = s->transpose();
    actions[i] = a;
  }
  ForwardCache cache;
  Matrix logits = diffcore::forward(pv.policy, states, &cache);
  Matrix dlogits(B, logits.cols());
  for (int i = 0; i < B; ++i) {
    Vector logp = log_softmax_row(logits.row(i));
    Vector p = logp.array().exp();
    dlogits.row(i) = p.transpose() / B;
    dlogits(i, actions[i]) -= 1.0 / B;
  }
  NetGrads grads;
  diffcore::backward(pv.policy, cache, dlogits, grads);
  diffcore::clip_grad_norm(grads, 10.0);
  diffcore::step(pv.policy, grads, opt);
}

}  // namespace dialrl::agents
