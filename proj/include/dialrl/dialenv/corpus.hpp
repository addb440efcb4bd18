#pragma once

#include "dialrl/dialenv/env.hpp"

namespace dialrl::dialenv {

// Expert-generated corpus standing in for the human-human dialogue set.
// Self-contained: carries the action catalog and the state layout version.
struct Corpus {
  int state_dim = 0;
  ActionCatalog catalog;
  std::vector<EpisodeLog> episodes;
  int dropped_episodes = 0;  // episodes with out-of-catalog actions

  std::vector<StateVector> all_states() const;
  // (state, action index) pairs over all turns
  std::vector<std::pair<const StateVector*, int>> state_action_pairs() const;
  std::size_t num_turns() const;
};

Corpus gen_corpus(const EnvConfig& env, int n_episodes, double noise,
                  int catalog_size, Rng& rng);

void save_corpus(const std::string& path, const Corpus& c);
Corpus load_corpus(const std::string& path);

}  // namespace dialrl::dialenv
