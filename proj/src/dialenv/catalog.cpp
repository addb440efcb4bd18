#include "dialrl/dialenv/catalog.hpp"

#include <algorithm>
#include <stdexcept>

namespace dialrl::dialenv {

std::optional<int> ActionCatalog::index_of(const CompositeAct& a) const {
  auto it = index_by_key.find(a.key());
  if (it == index_by_key.end()) return std::nullopt;
  return it->second;
}

ActionCatalog build_action_catalog(const std::vector<CompositeAct>& corpus_actions,
                                   int catalog_size) {
  if (corpus_actions.empty())
    throw std::runtime_error("build_action_catalog: empty corpus");
  std::map<std::string, std::pair<long, CompositeAct>> counts;
  for (const CompositeAct& a : corpus_actions) {
    auto [it, fresh] = counts.emplace(a.key(), std::make_pair(0L, a));
    ++it->second.first;
  }
  std::vector<std::pair<std::string, std::pair<long, CompositeAct>>> entries(
      counts.begin(), counts.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    return a.first < b.first;
  });

  ActionCatalog cat;
  cat.truncated = static_cast<int>(entries.size()) < catalog_size;
  int n = std::min<int>(catalog_size, static_cast<int>(entries.size()));
  for (int i = 0; i < n; ++i) {
    cat.index_by_key[entries[i].first] = i;
    cat.actions.push_back(entries[i].second.second);
  }
  return cat;
}

}  // namespace dialrl::dialenv
