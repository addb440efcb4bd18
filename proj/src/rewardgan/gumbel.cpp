#include "dialrl/rewardgan/gumbel.hpp"

#include <cmath>

namespace dialrl::rewardgan {

Vector gumbel_noise(Rng& rng, int k) {
  if (k < 1) throw diffcore::BadInput("gumbel_noise: k must be >= 1");
  Vector g(k);
  for (int i = 0; i < k; ++i) {
    double u = std::min(1.0 - 1e-12, rng.uniform_open());
    g[i] = -std::log(-std::log(u));
  }
  return g;
}

namespace {

Vector log_softmax(const Vector& logits) {
  double m = logits.maxCoeff();
  double lse = std::log((logits.array() - m).exp().sum()) + m;
  return logits.array() - lse;
}

Vector softmax(const Vector& logits) {
  Vector s = log_softmax(logits);
  return s.array().exp();
}

}  // namespace

Vector gumbel_softmax(const Vector& logits, double tau, const Vector& g) {
  if (tau <= 0.0) throw diffcore::BadInput("gumbel_softmax: tau must be > 0");
  if (logits.size() != g.size())
    throw diffcore::BadInput("gumbel_softmax: noise dimension mismatch");
  Vector u = (log_softmax(logits) + g) / tau;
  return softmax(u);
}

Vector gumbel_softmax_backward(const Vector& logits, double tau, const Vector& g,
                               const Vector& y, const Vector& dy) {
  (void)g;
  // softmax backward at the relaxed sample
  double dot = dy.dot(y);
  Vector du = (y.array() * (dy.array() - dot)) / tau;
  // log_softmax backward
  Vector p = softmax(logits);
  return du.array() - p.array() * du.sum();
}

int argmax_index(const Vector& y) {
  int best = 0;
  for (Eigen::Index i = 1; i < y.size(); ++i)
    if (y[i] > y[best]) best = static_cast<int>(i);
  return best;
}

Vector straight_through(const Vector& y) {
  Vector out = Vector::Zero(y.size());
  out[argmax_index(y)] = 1.0;
  return out;
}

}  // namespace dialrl::rewardgan
