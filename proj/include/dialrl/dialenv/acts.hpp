#pragma once

#include <string>
#include <vector>

namespace dialrl::dialenv {

enum class ActType { Inform, Request, Book, NoOffer };

std::string to_string(ActType t);
ActType act_type_from_string(const std::string& s);

// One dialogue act. `value` is only meaningful for user-side informs; it is
// ignored when comparing acts or building catalogs.
struct AtomicAct {
  std::string domain;
  ActType type = ActType::Inform;
  std::string slot;  // "ref" for Book, "none" for NoOffer
  std::string value;

  std::string key() const;  // "domain|type|slot"
};

// A set of atomic acts executed in one system turn, kept in canonical
// (sorted, deduplicated) order.
struct CompositeAct {
  std::vector<AtomicAct> acts;

  static CompositeAct of(std::vector<AtomicAct> acts);
  std::string key() const;
  bool empty() const { return acts.empty(); }
  bool operator==(const CompositeAct& o) const { return key() == o.key(); }
};

}  // namespace dialrl::dialenv
