#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "dialrl/diffcore/net.hpp"

namespace dialrl::diffcore {

struct SerializeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Little-endian binary layout: magic, layer sizes, activation tags, flat
// parameter array.
void save_net(std::ostream& out, const NetParams& p);
NetParams load_net(std::istream& in);

// Named collection of nets plus string metadata, used for checkpoints.
struct Bundle {
  std::map<std::string, std::string> meta;
  std::map<std::string, NetParams> nets;
};

void save_bundle(const std::string& path, const Bundle& b);
Bundle load_bundle(const std::string& path);

}  // namespace dialrl::diffcore
