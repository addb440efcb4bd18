#include "dialrl/dialenv/tracker.hpp"

#include <algorithm>

namespace dialrl::dialenv {

int match_count_bucket(int matches) {
  if (matches <= 0) return 0;
  if (matches == 1) return 1;
  if (matches <= 4) return 2;
  return 3;
}

TrackerState init_tracker(const SchemaSet& schemas) {
  TrackerState t;
  for (const auto& d : schemas.domains) {
    t.match_bucket[d.name] = match_count_bucket(static_cast<int>(d.database.size()));
    t.booking_possible[d.name] = false;
    t.book_requested[d.name] = false;
  }
  return t;
}

namespace {

bool known_slot(const DomainSchema& d, const std::string& slot) {
  return std::find(d.informable.begin(), d.informable.end(), slot) !=
             d.informable.end() ||
         std::find(d.requestable.begin(), d.requestable.end(), slot) !=
             d.requestable.end() ||
         slot == "ref" || slot == "none";
}

bool same_act_set(const std::vector<AtomicAct>& a, const std::vector<AtomicAct>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].key() != b[i].key()) return false;
  return true;
}

}  // namespace

TrackerState track_state(const TrackerState& prev,
                         const std::vector<AtomicAct>& user_acts,
                         const SchemaSet& schemas) {
  TrackerState t = prev;
  std::set<std::string> touched;
  for (const AtomicAct& act : user_acts) {
    const DomainSchema* d = schemas.find(act.domain);
    if (!d) continue;
    std::string slot = known_slot(*d, act.slot) ? act.slot : "unknown";
    switch (act.type) {
      case ActType::Inform:
        t.informed[act.domain][slot] = act.value;
        touched.insert(act.domain);
        break;
      case ActType::Request:
        t.requested[act.domain].insert(slot);
        break;
      case ActType::Book:
        t.book_requested[act.domain] = true;
        break;
      case ActType::NoOffer:
        break;
    }
  }
  for (const auto& domain : touched) {
    std::map<std::string, std::string> constraints;
    for (const auto& [slot, value] : t.informed[domain])
      if (slot != "unknown") constraints[slot] = value;
    int matches = schemas.count_matches(domain, constraints);
    t.match_bucket[domain] = match_count_bucket(matches);
    t.booking_possible[domain] = schemas.at(domain).bookable && matches > 0;
  }
  t.repeat_count =
      same_act_set(prev.last_user_acts, user_acts) ? prev.repeat_count + 1 : 1;
  t.last_user_acts = user_acts;
  t.turn_index = prev.turn_index + 1;
  return t;
}

}  // namespace dialrl::dialenv
