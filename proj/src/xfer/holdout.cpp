#include "dialrl/xfer/holdout.hpp"

#include <algorithm>

namespace dialrl::xfer {

using dialenv::ActionCatalog;
using dialenv::CompositeAct;
using dialenv::Corpus;
using dialenv::EpisodeLog;

void HoldoutSpec::validate(const dialenv::SchemaSet& schemas) const {
  if (holdout.empty()) throw ConfigError("holdout: empty held-out domain");
  if (!schemas.find(holdout))
    throw ConfigError("holdout: unknown domain '" + holdout + "'");
  if (train_domains.empty())
    throw ConfigError("holdout: empty training domain set");
  for (const auto& d : train_domains) {
    if (!schemas.find(d))
      throw ConfigError("holdout: unknown training domain '" + d + "'");
    if (d == holdout)
      throw ConfigError("holdout: held-out domain '" + d +
                        "' also in training set");
  }
}

HoldoutSpec HoldoutSpec::desk_default(const dialenv::SchemaSet& schemas) {
  HoldoutSpec spec;
  spec.holdout = "hotel";
  for (const auto& d : schemas.domain_names())
    if (d != spec.holdout) spec.train_domains.push_back(d);
  spec.validate(schemas);
  return spec;
}

namespace {

bool act_touches(const CompositeAct& a, const std::string& domain) {
  return std::any_of(a.acts.begin(), a.acts.end(),
                     [&](const auto& act) { return act.domain == domain; });
}

}  // namespace

bool episode_touches_domain(const EpisodeLog& ep, const ActionCatalog& catalog,
                            const std::string& domain) {
  for (const auto& [name, goal] : ep.goal.domains)
    if (name == domain) return true;
  for (const auto& t : ep.turns)
    if (act_touches(catalog[t.action], domain)) return true;
  return false;
}

Corpus filter_corpus(const Corpus& c, const HoldoutSpec& spec) {
  Corpus out;
  out.state_dim = c.state_dim;
  out.dropped_episodes = c.dropped_episodes;

  // Stable prune of the catalog, remembering old -> new index.
  std::vector<int> remap(c.catalog.size(), -1);
  for (int i = 0; i < c.catalog.size(); ++i) {
    if (act_touches(c.catalog[i], spec.holdout)) continue;
    remap[i] = out.catalog.size();
    out.catalog.index_by_key[c.catalog[i].key()] = out.catalog.size();
    out.catalog.actions.push_back(c.catalog[i]);
  }
  out.catalog.truncated = c.catalog.truncated;

  for (const auto& ep : c.episodes) {
    if (episode_touches_domain(ep, c.catalog, spec.holdout)) {
      ++out.dropped_episodes;
      continue;
    }
    EpisodeLog copy = ep;
    for (auto& t : copy.turns) t.action = remap[t.action];
    out.episodes.push_back(std::move(copy));
  }
  if (out.episodes.empty())
    throw ConfigError("filter_corpus: no episodes survive holdout '" +
                      spec.holdout + "'");
  return out;
}

AuditResult audit_corpus(const Corpus& c, const std::string& holdout) {
  AuditResult r;
  for (int i = 0; i < c.catalog.size(); ++i)
    if (act_touches(c.catalog[i], holdout)) ++r.holdout_catalog_entries;
  for (const auto& ep : c.episodes) {
    bool goal_hit = false;
    for (const auto& [name, goal] : ep.goal.domains)
      if (name == holdout) goal_hit = true;
    for (const auto& t : ep.turns) {
      ++r.pairs_checked;
      if (goal_hit || act_touches(c.catalog[t.action], holdout))
        ++r.holdout_pairs;
    }
  }
  r.passed = r.holdout_pairs == 0 && r.holdout_catalog_entries == 0;
  return r;
}

}  // namespace dialrl::xfer
