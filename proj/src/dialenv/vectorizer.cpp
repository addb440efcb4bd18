#include "dialrl/dialenv/vectorizer.hpp"

namespace dialrl::dialenv {

int StateLayout::at(const std::string& name) const {
  auto it = index_of.find(name);
  if (it == index_of.end()) throw SchemaError("layout: unknown bit " + name);
  return it->second;
}

StateLayout build_layout(const SchemaSet& schemas) {
  StateLayout layout;
  layout.domains = schemas.domain_names();
  layout.slots = schemas.slot_vocab();
  auto add = [&](const std::string& name) {
    layout.index_of[name] = layout.dim();
    layout.bit_names.push_back(name);
  };
  for (const auto& d : schemas.domains)
    for (int b = 0; b < 4; ++b)
      add("match." + d.name + "." + std::to_string(b));
  for (const auto& d : schemas.domains)
    if (d.bookable) add("booking_possible." + d.name);
  for (const auto& d : schemas.domains) {
    for (const auto& slot : d.informable) add("informed." + d.name + "." + slot);
    add("informed." + d.name + ".unknown");
  }
  for (const auto& d : schemas.domains) {
    for (const auto& slot : d.requestable) add("requested." + d.name + "." + slot);
    add("requested." + d.name + ".unknown");
  }
  for (const auto& d : schemas.domains)
    if (d.bookable) add("book_requested." + d.name);
  for (const auto& d : schemas.domains) add("last_act.domain." + d.name);
  for (const char* t : {"Inform", "Request", "Book", "NoOffer"})
    add(std::string("last_act.type.") + t);
  for (const auto& slot : layout.slots) add("last_act.slot." + slot);
  for (int b = 0; b < 4; ++b) add("repeat." + std::to_string(b));
  return layout;
}

StateVector vectorize_state(const TrackerState& t, const StateLayout& layout) {
  StateVector v = StateVector::Zero(layout.dim());
  auto set = [&](const std::string& name) { v[layout.at(name)] = 1.0; };
  for (const auto& [domain, bucket] : t.match_bucket)
    set("match." + domain + "." + std::to_string(bucket));
  for (const auto& [domain, ok] : t.booking_possible)
    if (ok) set("booking_possible." + domain);
  for (const auto& [domain, slots] : t.informed)
    for (const auto& [slot, value] : slots) set("informed." + domain + "." + slot);
  for (const auto& [domain, slots] : t.requested)
    for (const auto& slot : slots) set("requested." + domain + "." + slot);
  for (const auto& [domain, yes] : t.book_requested)
    if (yes) set("book_requested." + domain);
  for (const AtomicAct& a : t.last_user_acts) {
    set("last_act.domain." + a.domain);
    set("last_act.type." + to_string(a.type));
    auto it = layout.index_of.find("last_act.slot." + a.slot);
    v[it != layout.index_of.end() ? it->second : layout.at("last_act.slot.unknown")] =
        1.0;
  }
  int bucket = t.repeat_count <= 3 ? t.repeat_count - 1 : 3;
  set("repeat." + std::to_string(bucket));
  return v;
}

}  // namespace dialrl::dialenv
