#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dialrl/harness/config.hpp"

namespace dialrl::harness {

// One record per stage run: which config produced which files under which
// seed. Deliberately timestamp-free so reruns are byte-identical.
struct RunManifest {
  std::string stage;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string artifact_version = "1";
  std::string status = "pending";  // pending | ok | failed
  std::vector<std::string> files;

  void add_file(const std::string& path) { files.push_back(path); }
  void save(const std::string& path) const;
  static RunManifest load(const std::string& path);
};

}  // namespace dialrl::harness
