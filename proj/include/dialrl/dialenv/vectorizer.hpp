#pragma once

#include <Eigen/Dense>

#include "dialrl/dialenv/tracker.hpp"

namespace dialrl::dialenv {

using StateVector = Eigen::VectorXd;  // entries in {0,1}

// Fixed bit layout derived from a schema set. Segments, in order:
//   1. per domain: 4 match-count bucket bits (one-hot)
//   2. per bookable domain: booking-possible bit
//   3. per (domain, informable slot): informed bit
//   4. per (domain, requestable slot): requested bit
//   5. per bookable domain: booking-requested bit
//   6. last user action, factored: domain bits, act-type bits (4),
//      global-slot bits
//   7. repeat-count bucket: 4 bits one-hot for {1, 2, 3, >=4}
struct StateLayout {
  std::vector<std::string> bit_names;  // one entry per dimension
  std::map<std::string, int> index_of;
  std::vector<std::string> domains;
  std::vector<std::string> slots;  // global slot vocab

  int dim() const { return static_cast<int>(bit_names.size()); }
  int at(const std::string& name) const;
};

StateLayout build_layout(const SchemaSet& schemas);

StateVector vectorize_state(const TrackerState& t, const StateLayout& layout);

}  // namespace dialrl::dialenv
