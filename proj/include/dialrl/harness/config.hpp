#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "dialrl/errors.hpp"

namespace dialrl::harness {

// Flat key/value configuration. Text format: `[section]` headers prefix the
// keys that follow ("section.key"), `key = value` lines, `#` comments.
// The canonical form (sorted keys) drives the config hash, so key order in
// the file never changes the hash.
struct Config {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  long get_int(const std::string& key, long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  void set(const std::string& key, const std::string& value) { kv[key] = value; }

  std::string canonical() const;   // "key=value\n" sorted by key
  std::uint64_t hash() const;      // FNV-1a over the canonical form
  std::string hash_hex() const;

  static Config parse(const std::string& text);
  static Config load(const std::string& path);
  void save(const std::string& path) const;
};

}  // namespace dialrl::harness
