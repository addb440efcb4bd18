#pragma once

#include <map>
#include <optional>

#include "dialrl/dialenv/acts.hpp"

namespace dialrl::dialenv {

// Ordered catalog of composite actions: most frequent first, ties broken
// lexicographically on the canonical key.
struct ActionCatalog {
  std::vector<CompositeAct> actions;
  std::map<std::string, int> index_by_key;
  bool truncated = false;  // fewer distinct actions than requested

  int size() const { return static_cast<int>(actions.size()); }
  const CompositeAct& operator[](int i) const { return actions.at(i); }
  std::optional<int> index_of(const CompositeAct& a) const;
};

ActionCatalog build_action_catalog(const std::vector<CompositeAct>& corpus_actions,
                                   int catalog_size);

}  // namespace dialrl::dialenv
