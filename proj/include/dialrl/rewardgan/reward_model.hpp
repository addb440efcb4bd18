#pragma once

#include "dialrl/dialenv/env.hpp"
#include "dialrl/rewardgan/discriminator.hpp"
#include "dialrl/statevae/vae.hpp"

namespace dialrl::rewardgan {

// Frozen discriminator + frozen encoder + handcrafted-reward combiner.
// score = r_human(status, T) + clamp(log D(Enc(s), embed(a))).
class RewardModel {
 public:
  RewardModel(DiscriminatorParams disc, statevae::VaeParams encoder,
              ActionEmbedding embedding, int t_max);

  double log_d(const dialenv::StateVector& s, int action_index) const;
  double score(const dialenv::StateVector& s, int action_index,
               dialenv::TurnStatus status) const;

  dialenv::RewardFn reward_fn(const dialenv::ActionCatalog& catalog) const;

  const DiscriminatorParams& discriminator() const { return disc_; }
  const statevae::VaeParams& encoder() const { return encoder_; }
  const ActionEmbedding& embedding() const { return embedding_; }
  int t_max() const { return t_max_; }
  static constexpr double kLogClamp = -13.815510557964274;  // log(1e-6)

  void save(const std::string& path) const;
  static RewardModel load(const std::string& path);

 private:
  DiscriminatorParams disc_;
  statevae::VaeParams encoder_;
  ActionEmbedding embedding_;
  int t_max_;
};

}  // namespace dialrl::rewardgan
