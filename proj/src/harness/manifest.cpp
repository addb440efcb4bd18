#include "dialrl/harness/manifest.hpp"

#include <fstream>

namespace dialrl::harness {

void RunManifest::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("manifest: cannot write " + path);
  out << "stage = " << stage << "\n";
  out << "config_hash = " << config_hash << "\n";
  out << "seed = " << seed << "\n";
  out << "artifact_version = " << artifact_version << "\n";
  out << "status = " << status << "\n";
  for (const auto& f : files) out << "file = " << f << "\n";
}

RunManifest RunManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("manifest: cannot open " + path);
  RunManifest m;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 3);
    if (key == "stage") m.stage = value;
    else if (key == "config_hash") m.config_hash = value;
    else if (key == "seed") m.seed = std::stoull(value);
    else if (key == "artifact_version") m.artifact_version = value;
    else if (key == "status") m.status = value;
    else if (key == "file") m.files.push_back(value);
  }
  return m;
}

}  // namespace dialrl::harness
