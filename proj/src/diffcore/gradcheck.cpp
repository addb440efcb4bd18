#include "dialrl/diffcore/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace dialrl::diffcore {

double grad_check_flat(const Vector& theta,
                       const std::function<double(const Vector&)>& loss,
                       const Vector& analytic_grad, double epsilon) {
  Vector t = theta;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    double orig = t[i];
    t[i] = orig + epsilon;
    double lp = loss(t);
    t[i] = orig - epsilon;
    double lm = loss(t);
    t[i] = orig;
    double fd = (lp - lm) / (2.0 * epsilon);
    double an = analytic_grad[i];
    double denom = std::max({1.0, std::abs(fd), std::abs(an)});
    worst = std::max(worst, std::abs(fd - an) / denom);
  }
  return worst;
}

double grad_check(const NetParams& params,
                  const std::function<double(const NetParams&)>& loss,
                  const NetGrads& analytic, double epsilon) {
  NetParams scratch = params;
  auto flat_loss = [&](const Vector& theta) {
    unflatten(scratch, theta);
    return loss(scratch);
  };
  return grad_check_flat(flatten(params), flat_loss, flatten(analytic, params),
                         epsilon);
}

}  // namespace dialrl::diffcore
