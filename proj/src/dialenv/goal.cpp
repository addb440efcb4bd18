#include "dialrl/dialenv/goal.hpp"

#include <algorithm>

namespace dialrl::dialenv {

const DomainGoal* UserGoal::find(const std::string& domain) const {
  for (const auto& [name, g] : domains)
    if (name == domain) return &g;
  return nullptr;
}

std::vector<std::string> UserGoal::domain_names() const {
  std::vector<std::string> names;
  for (const auto& [name, g] : domains) names.push_back(name);
  return names;
}

UserGoal sample_goal_from(Rng& rng, const SchemaSet& schemas,
                          const std::vector<std::string>& allowed,
                          int min_domains, int max_domains) {
  if (allowed.empty()) throw SchemaError("sample_goal: no domains");
  // min..max domains, uniformly: real goal sets mix quick tasks with long
  // multi-domain ones.
  int cap = static_cast<int>(std::min<std::size_t>(max_domains, allowed.size()));
  int lo = std::clamp(min_domains, 1, cap);
  int n_domains = lo + static_cast<int>(rng.uniform_int(cap - lo + 1));
  std::vector<std::string> pool = allowed;
  // Fisher-Yates prefix shuffle
  for (int i = 0; i < n_domains; ++i) {
    std::size_t j = i + rng.uniform_int(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  UserGoal goal;
  for (int i = 0; i < n_domains; ++i) {
    const DomainSchema& d = schemas.at(pool[i]);
    const Entity& entity = d.database[rng.uniform_int(d.database.size())];
    DomainGoal g;
    // 2..all informable slots as constraints (all of them for small domains)
    int n_constraints = std::min<int>(
        static_cast<int>(d.informable.size()),
        2 + static_cast<int>(rng.uniform_int(d.informable.size())));
    std::vector<std::string> slots = d.informable;
    for (int k = 0; k < n_constraints; ++k) {
      std::size_t j = k + rng.uniform_int(slots.size() - k);
      std::swap(slots[k], slots[j]);
      g.constraints[slots[k]] = entity.at(slots[k]);
    }
    int n_requests = std::min<int>(
        static_cast<int>(d.requestable.size()),
        2 + static_cast<int>(rng.uniform_int(3)));
    std::vector<std::string> reqs = d.requestable;
    for (int k = 0; k < n_requests; ++k) {
      std::size_t j = k + rng.uniform_int(reqs.size() - k);
      std::swap(reqs[k], reqs[j]);
      g.requests.insert(reqs[k]);
    }
    g.book = d.bookable && rng.bernoulli(0.8);
    goal.domains.emplace_back(d.name, std::move(g));
  }
  return goal;
}

UserGoal sample_goal_from(Rng& rng, const SchemaSet& schemas,
                          const std::vector<std::string>& allowed,
                          int max_domains) {
  return sample_goal_from(rng, schemas, allowed, 1, max_domains);
}

UserGoal sample_goal(Rng& rng, const SchemaSet& schemas, int max_domains) {
  return sample_goal_from(rng, schemas, schemas.domain_names(), 1, max_domains);
}

}  // namespace dialrl::dialenv
