#pragma once

#include "dialrl/dialenv/corpus.hpp"
#include "dialrl/errors.hpp"

namespace dialrl::xfer {

struct HoldoutSpec {
  std::vector<std::string> train_domains;
  std::string holdout;

  // Both sides must come from the schema registry and be disjoint.
  void validate(const dialenv::SchemaSet& schemas) const;
  // All desk domains minus the schema analogue with unique slots.
  static HoldoutSpec desk_default(const dialenv::SchemaSet& schemas);
};

// True if the episode's goal or any of its actions touches `domain`.
bool episode_touches_domain(const dialenv::EpisodeLog& ep,
                            const dialenv::ActionCatalog& catalog,
                            const std::string& domain);

// Whole-episode exclusion: drops every episode touching the held-out domain
// and prunes its actions from the catalog (stable order, indices remapped).
// Throws ConfigError when nothing survives.
dialenv::Corpus filter_corpus(const dialenv::Corpus& c, const HoldoutSpec& spec);

struct AuditResult {
  long pairs_checked = 0;
  long holdout_pairs = 0;       // (state, action) pairs touching the domain
  long holdout_catalog_entries = 0;
  bool passed = false;
};

// Verifies a training corpus contains zero held-out-domain pairs.
AuditResult audit_corpus(const dialenv::Corpus& c, const std::string& holdout);

}  // namespace dialrl::xfer
