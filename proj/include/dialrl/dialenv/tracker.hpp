#pragma once

#include "dialrl/dialenv/acts.hpp"
#include "dialrl/dialenv/schema.hpp"

namespace dialrl::dialenv {

// Rule-based state accumulator. Informed/requested flags only grow within
// an episode.
struct TrackerState {
  std::map<std::string, std::map<std::string, std::string>> informed;
  std::map<std::string, std::set<std::string>> requested;
  std::map<std::string, int> match_bucket;      // 0:none 1:one 2:2-4 3:>=5
  std::map<std::string, bool> booking_possible; // bookable and >=1 match
  std::map<std::string, bool> book_requested;
  std::vector<AtomicAct> last_user_acts;
  int repeat_count = 1;
  int turn_index = 0;
};

TrackerState init_tracker(const SchemaSet& schemas);

TrackerState track_state(const TrackerState& prev,
                         const std::vector<AtomicAct>& user_acts,
                         const SchemaSet& schemas);

int match_count_bucket(int matches);

}  // namespace dialrl::dialenv
