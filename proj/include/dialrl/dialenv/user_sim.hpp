#pragma once

#include <deque>

#include "dialrl/dialenv/acts.hpp"
#include "dialrl/dialenv/goal.hpp"

namespace dialrl::dialenv {

struct AgendaItem {
  enum class Kind { InformConstraint, RequestSlot, BookDomain };
  Kind kind;
  std::string domain;
  std::string slot;  // constraint or requested slot; "ref" for bookings
};

// Stack-style agenda: the user works through inform items, then keeps
// re-voicing pending requests / booking until the system satisfies them.
struct AgendaState {
  UserGoal goal;
  std::deque<AgendaItem> agenda;  // front = next to voice
  std::map<std::string, std::set<std::string>> voiced_constraints;
  int noop_streak = 0;
  bool done = false;
  bool success = false;
};

struct UserStepResult {
  std::vector<AtomicAct> user_acts;
  bool user_done = false;
  bool success = false;
};

AgendaState init_agenda(const UserGoal& goal);

// Processes the system action against the agenda, then voices the user's
// next acts. Patience: `patience` consecutive unhelpful system turns end the
// dialogue as a failure. Malformed system acts count as unhelpful.
UserStepResult user_step(AgendaState& st, const CompositeAct& system_action,
                         const SchemaSet& schemas, int patience = 3);

}  // namespace dialrl::dialenv
