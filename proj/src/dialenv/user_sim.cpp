#include "dialrl/dialenv/user_sim.hpp"

#include <algorithm>

namespace dialrl::dialenv {

AgendaState init_agenda(const UserGoal& goal) {
  AgendaState st;
  st.goal = goal;
  for (const auto& [domain, g] : goal.domains) {
    for (const auto& [slot, value] : g.constraints)
      st.agenda.push_back({AgendaItem::Kind::InformConstraint, domain, slot});
    for (const auto& slot : g.requests)
      st.agenda.push_back({AgendaItem::Kind::RequestSlot, domain, slot});
    if (g.book) st.agenda.push_back({AgendaItem::Kind::BookDomain, domain, "ref"});
  }
  return st;
}

namespace {

bool constraints_voiced(const AgendaState& st, const std::string& domain) {
  const DomainGoal* g = st.goal.find(domain);
  if (!g) return false;
  auto it = st.voiced_constraints.find(domain);
  std::size_t voiced = it == st.voiced_constraints.end() ? 0 : it->second.size();
  return voiced >= g->constraints.size();
}

}  // namespace

UserStepResult user_step(AgendaState& st, const CompositeAct& system_action,
                         const SchemaSet& schemas, int patience) {
  UserStepResult out;
  if (st.done) {
    out.user_done = true;
    out.success = st.success;
    return out;
  }

  // 1. Process the system action against the agenda.
  bool helpful = false;
  std::vector<AtomicAct> reinforms;
  for (const AtomicAct& act : system_action.acts) {
    switch (act.type) {
      case ActType::Inform: {
        // Answers a pending request once the user has voiced all constraints
        // of that domain (before that the system cannot know the entity).
        if (!constraints_voiced(st, act.domain)) break;
        auto it = std::find_if(st.agenda.begin(), st.agenda.end(),
                               [&](const AgendaItem& item) {
                                 return item.kind == AgendaItem::Kind::RequestSlot &&
                                        item.domain == act.domain &&
                                        item.slot == act.slot;
                               });
        if (it != st.agenda.end()) {
          st.agenda.erase(it);
          helpful = true;
        }
        break;
      }
      case ActType::Request: {
        // The user re-informs a goal constraint when asked for it.
        const DomainGoal* g = st.goal.find(act.domain);
        if (g) {
          auto cit = g->constraints.find(act.slot);
          if (cit != g->constraints.end()) {
            bool fresh = st.voiced_constraints[act.domain].count(act.slot) == 0;
            reinforms.push_back(
                {act.domain, ActType::Inform, act.slot, cit->second});
            if (fresh) helpful = true;
          }
        }
        break;
      }
      case ActType::Book: {
        if (!constraints_voiced(st, act.domain)) break;
        auto it = std::find_if(st.agenda.begin(), st.agenda.end(),
                               [&](const AgendaItem& item) {
                                 return item.kind == AgendaItem::Kind::BookDomain &&
                                        item.domain == act.domain;
                               });
        if (it != st.agenda.end() &&
            schemas.count_matches(act.domain, st.goal.find(act.domain)->constraints) > 0) {
          st.agenda.erase(it);
          helpful = true;
        }
        break;
      }
      case ActType::NoOffer:
        break;
    }
  }

  // An empty system action is as unhelpful as a malformed one.
  if (helpful)
    st.noop_streak = 0;
  else
    ++st.noop_streak;

  // 2. Termination checks.
  if (st.agenda.empty()) {
    st.done = true;
    st.success = true;
    out.user_done = true;
    out.success = true;
    return out;
  }
  if (st.noop_streak >= patience) {
    st.done = true;
    st.success = false;
    out.user_done = true;
    out.success = false;
    return out;
  }

  // 3. Voice the next user acts.
  for (const AtomicAct& a : reinforms) out.user_acts.push_back(a);
  int informs = 0;
  while (!st.agenda.empty() && informs < 2 &&
         st.agenda.front().kind == AgendaItem::Kind::InformConstraint) {
    AgendaItem item = st.agenda.front();
    st.agenda.pop_front();
    const DomainGoal* g = st.goal.find(item.domain);
    out.user_acts.push_back(
        {item.domain, ActType::Inform, item.slot, g->constraints.at(item.slot)});
    st.voiced_constraints[item.domain].insert(item.slot);
    ++informs;
  }
  if (!st.agenda.empty()) {
    const AgendaItem& front = st.agenda.front();
    if (front.kind == AgendaItem::Kind::RequestSlot) {
      // voice every pending request for the active domain
      for (const AgendaItem& item : st.agenda)
        if (item.kind == AgendaItem::Kind::RequestSlot && item.domain == front.domain)
          out.user_acts.push_back({item.domain, ActType::Request, item.slot, ""});
    } else if (front.kind == AgendaItem::Kind::BookDomain) {
      out.user_acts.push_back({front.domain, ActType::Book, "ref", ""});
    }
  }
  return out;
}

}  // namespace dialrl::dialenv
