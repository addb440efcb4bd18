#include "dialrl/rewardgan/reward_model.hpp"

#include <cmath>
#include <sstream>

namespace dialrl::rewardgan {

RewardModel::RewardModel(DiscriminatorParams disc, statevae::VaeParams encoder,
                         ActionEmbedding embedding, int t_max)
    : disc_(std::move(disc)),
      encoder_(std::move(encoder)),
      embedding_(std::move(embedding)),
      t_max_(t_max) {}

double RewardModel::log_d(const dialenv::StateVector& s, int action_index) const {
  Vector latent = statevae::embed_state(encoder_, s);
  double logit = disc_logit(disc_, latent, embedding_.embed(action_index));
  // log sigmoid(logit), numerically stable
  double log_prob = logit >= 0.0 ? -std::log1p(std::exp(-logit))
                                 : logit - std::log1p(std::exp(logit));
  return std::max(log_prob, kLogClamp);
}

double RewardModel::score(const dialenv::StateVector& s, int action_index,
                          dialenv::TurnStatus status) const {
  return dialenv::handcrafted_reward(status, t_max_) + log_d(s, action_index);
}

dialenv::RewardFn RewardModel::reward_fn(const dialenv::ActionCatalog& catalog) const {
  return [this, &catalog](const dialenv::StateVector& s,
                          const dialenv::CompositeAct& a,
                          dialenv::TurnStatus status) {
    auto idx = catalog.index_of(a);
    if (!idx) throw diffcore::BadInput("reward_fn: action not in catalog");
    return score(s, *idx, status);
  };
}

void RewardModel::save(const std::string& path) const {
  diffcore::Bundle b = statevae::to_bundle(encoder_);
  b.meta["kind"] = "reward_model";
  b.meta["version"] = "1";
  b.meta["t_max"] = std::to_string(t_max_);
  b.meta["embedding_mode"] = embedding_.mode;
  b.nets["discriminator"] = disc_.net;
  // embedding rows packed as a single-layer net
  diffcore::NetParams emb = diffcore::NetParams::zeros(
      {{static_cast<int>(embedding_.rows.rows()),
        static_cast<int>(embedding_.rows.cols())},
       {diffcore::Activation::Identity}});
  emb.layers[0].W = embedding_.rows;
  b.nets["action_embedding"] = emb;
  diffcore::save_bundle(path, b);
}

RewardModel RewardModel::load(const std::string& path) {
  diffcore::Bundle b = diffcore::load_bundle(path);
  if (b.meta.count("kind") == 0 || b.meta.at("kind") != "reward_model" ||
      b.meta.at("version") != "1")
    throw diffcore::SerializeError("incompatible reward model checkpoint");
  DiscriminatorParams disc{b.nets.at("discriminator")};
  statevae::VaeParams enc = statevae::vae_from_bundle(b);
  ActionEmbedding emb;
  emb.rows = b.nets.at("action_embedding").layers[0].W;
  emb.mode = b.meta.at("embedding_mode");
  return RewardModel(std::move(disc), std::move(enc), std::move(emb),
                     std::stoi(b.meta.at("t_max")));
}

}  // namespace dialrl::rewardgan
