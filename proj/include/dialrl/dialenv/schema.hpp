#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dialrl::dialenv {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One database row: a full slot -> value assignment.
using Entity = std::map<std::string, std::string>;

struct DomainSchema {
  std::string name;
  std::vector<std::string> informable;  // slots the user constrains
  std::map<std::string, std::vector<std::string>> values;  // informable values
  std::vector<std::string> requestable;  // slots the user may ask for
  bool bookable = false;
  std::vector<Entity> database;

  void validate() const;
};

struct SchemaSet {
  std::vector<DomainSchema> domains;

  const DomainSchema* find(const std::string& name) const;
  const DomainSchema& at(const std::string& name) const;
  // Global slot vocabulary (union over domains, plus "ref"/"none"/"unknown"),
  // sorted. Shared across domains so factored embeddings transfer.
  std::vector<std::string> slot_vocab() const;
  std::vector<std::string> domain_names() const;
  // Entities of `domain` consistent with the given constraints.
  int count_matches(const std::string& domain,
                    const std::map<std::string, std::string>& constraints) const;
};

// The built-in five-domain desk environment. Deterministic content.
SchemaSet desk_schemas();

// Structured text round trip for the CLI.
void save_schemas(const std::string& path, const SchemaSet& s);
SchemaSet load_schemas(const std::string& path);

}  // namespace dialrl::dialenv
