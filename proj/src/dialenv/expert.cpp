#include "dialrl/dialenv/env.hpp"

namespace dialrl::dialenv {

// Priorities: answer voiced requests for domains with complete constraints,
// confirm a voiced booking, otherwise ask for a missing constraint or
// pre-answer the next pending request.
CompositeAct expert_act(const TrackerState& tracker, const AgendaState& agenda,
                        const SchemaSet& schemas) {
  std::vector<AtomicAct> acts;

  auto constraints_done = [&](const std::string& domain) {
    const DomainGoal* g = agenda.goal.find(domain);
    if (!g) return false;
    auto it = agenda.voiced_constraints.find(domain);
    std::size_t voiced = it == agenda.voiced_constraints.end() ? 0 : it->second.size();
    return voiced >= g->constraints.size();
  };

  // answer pending requests (up to 3 per turn)
  for (const AgendaItem& item : agenda.agenda) {
    if (acts.size() >= 3) break;
    if (item.kind == AgendaItem::Kind::RequestSlot && constraints_done(item.domain))
      acts.push_back({item.domain, ActType::Inform, item.slot, ""});
  }
  if (!acts.empty()) return CompositeAct::of(std::move(acts));

  // confirm a pending booking
  for (const AgendaItem& item : agenda.agenda) {
    if (item.kind == AgendaItem::Kind::BookDomain && constraints_done(item.domain))
      return CompositeAct::of({{item.domain, ActType::Book, "ref", ""}});
  }

  // still in the constraint phase: prompt for the first un-voiced constraint
  for (const AgendaItem& item : agenda.agenda) {
    if (item.kind == AgendaItem::Kind::InformConstraint)
      return CompositeAct::of({{item.domain, ActType::Request, item.slot, ""}});
  }

  return CompositeAct::of({{agenda.goal.domains.front().first, ActType::NoOffer,
                            "none", ""}});
}

}  // namespace dialrl::dialenv
