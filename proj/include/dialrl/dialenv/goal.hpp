#pragma once

#include "dialrl/dialenv/schema.hpp"
#include "dialrl/diffcore/rng.hpp"

namespace dialrl::dialenv {

struct DomainGoal {
  std::map<std::string, std::string> constraints;  // informable slot -> value
  std::set<std::string> requests;                  // requestable slots
  bool book = false;
};

struct UserGoal {
  // insertion order = order the user works through domains
  std::vector<std::pair<std::string, DomainGoal>> domains;

  const DomainGoal* find(const std::string& domain) const;
  std::vector<std::string> domain_names() const;
};

// Constraints are copied from a randomly chosen database entity, so every
// sampled goal is satisfiable by construction. The goal spans a uniform
// min_domains..max_domains domains (min defaults to 1).
UserGoal sample_goal(Rng& rng, const SchemaSet& schemas, int max_domains);

// Variant restricted to a fixed domain subset (used by transfer runs).
UserGoal sample_goal_from(Rng& rng, const SchemaSet& schemas,
                          const std::vector<std::string>& allowed,
                          int max_domains);
UserGoal sample_goal_from(Rng& rng, const SchemaSet& schemas,
                          const std::vector<std::string>& allowed,
                          int min_domains, int max_domains);

}  // namespace dialrl::dialenv
