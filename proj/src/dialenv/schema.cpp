#include "dialrl/dialenv/schema.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dialrl/diffcore/rng.hpp"

namespace dialrl::dialenv {

void DomainSchema::validate() const {
  std::set<std::string> seen;
  for (const auto& s : informable) {
    if (!seen.insert(s).second) throw SchemaError(name + ": duplicate slot " + s);
    if (values.find(s) == values.end() || values.at(s).empty())
      throw SchemaError(name + ": informable " + s + " has no value set");
  }
  for (const auto& s : requestable)
    if (!seen.insert(s).second) throw SchemaError(name + ": duplicate slot " + s);
  if (database.empty()) throw SchemaError(name + ": empty database");
  for (const auto& e : database)
    for (const auto& s : informable)
      if (e.find(s) == e.end())
        throw SchemaError(name + ": entity missing informable " + s);
}

const DomainSchema* SchemaSet::find(const std::string& name) const {
  for (const auto& d : domains)
    if (d.name == name) return &d;
  return nullptr;
}

const DomainSchema& SchemaSet::at(const std::string& name) const {
  const DomainSchema* d = find(name);
  if (!d) throw SchemaError("unknown domain: " + name);
  return *d;
}

std::vector<std::string> SchemaSet::slot_vocab() const {
  std::set<std::string> slots{"ref", "none", "unknown"};
  for (const auto& d : domains) {
    slots.insert(d.informable.begin(), d.informable.end());
    slots.insert(d.requestable.begin(), d.requestable.end());
  }
  return {slots.begin(), slots.end()};
}

std::vector<std::string> SchemaSet::domain_names() const {
  std::vector<std::string> names;
  for (const auto& d : domains) names.push_back(d.name);
  return names;
}

int SchemaSet::count_matches(
    const std::string& domain,
    const std::map<std::string, std::string>& constraints) const {
  const DomainSchema& d = at(domain);
  int n = 0;
  for (const auto& e : d.database) {
    bool ok = true;
    for (const auto& [slot, value] : constraints) {
      auto it = e.find(slot);
      if (it != e.end() && it->second != value) {
        ok = false;
        break;
      }
    }
    if (ok) ++n;
  }
  return n;
}

namespace {

DomainSchema make_domain(const std::string& name,
                         std::vector<std::pair<std::string, std::vector<std::string>>> inf,
                         std::vector<std::string> req, bool bookable,
                         int db_size, Rng& rng) {
  DomainSchema d;
  d.name = name;
  d.bookable = bookable;
  for (auto& [slot, vals] : inf) {
    d.informable.push_back(slot);
    d.values[slot] = vals;
  }
  d.requestable = std::move(req);
  // Entities: one per value of the first slot to guarantee coverage, then
  // random combinations up to db_size.
  for (int i = 0; i < db_size; ++i) {
    Entity e;
    for (const auto& slot : d.informable) {
      const auto& vals = d.values[slot];
      e[slot] = vals[i < static_cast<int>(vals.size())
                         ? i % vals.size()
                         : rng.uniform_int(vals.size())];
    }
    for (const auto& slot : d.requestable)
      e[slot] = name + "_" + slot + "_" + std::to_string(i);
    d.database.push_back(std::move(e));
  }
  return d;
}

}  // namespace

SchemaSet desk_schemas() {
  // Content is fixed: schemas are configuration, not experiment randomness.
  Rng rng(0x5eedu);
  SchemaSet s;
  s.domains.push_back(make_domain(
      "restaurant",
      {{"price", {"cheap", "moderate", "expensive"}},
       {"area", {"north", "south", "east", "west", "centre"}},
       {"food", {"thai", "indian", "italian", "chinese", "british"}}},
      {"phone", "address", "postcode"}, true, 24, rng));
  s.domains.push_back(make_domain(
      "cafe",
      {{"price", {"cheap", "moderate", "expensive"}},
       {"area", {"north", "south", "east", "west", "centre"}},
       {"outdoor", {"yes", "no"}}},
      {"phone", "address", "menu"}, false, 20, rng));
  s.domains.push_back(make_domain(
      "attraction",
      {{"area", {"north", "south", "east", "west", "centre"}},
       {"type", {"museum", "park", "theatre", "cinema", "gallery"}}},
      {"phone", "fee", "address"}, false, 20, rng));
  s.domains.push_back(make_domain(
      "train",
      {{"day", {"monday", "tuesday", "wednesday", "thursday", "friday"}},
       {"destination", {"airport", "city", "coast", "hills", "valley"}}},
      {"duration", "ticket", "platform"}, true, 25, rng));
  // Held-out analogue: three slots unique to this domain.
  s.domains.push_back(make_domain(
      "hotel",
      {{"price", {"cheap", "moderate", "expensive"}},
       {"area", {"north", "south", "east", "west", "centre"}},
       {"internet", {"yes", "no"}},
       {"parking", {"yes", "no"}},
       {"stars", {"2", "3", "4", "5"}}},
      {"phone", "address", "postcode"}, true, 30, rng));
  for (auto& d : s.domains) d.validate();
  return s;
}

void save_schemas(const std::string& path, const SchemaSet& s) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot open " + path);
  out << "dialrl-schemas v1\n";
  for (const auto& d : s.domains) {
    out << "domain " << d.name << " bookable=" << (d.bookable ? 1 : 0) << "\n";
    for (const auto& slot : d.informable) {
      out << "  informable " << slot << " =";
      for (const auto& v : d.values.at(slot)) out << " " << v;
      out << "\n";
    }
    for (const auto& slot : d.requestable) out << "  requestable " << slot << "\n";
    for (const auto& e : d.database) {
      out << "  entity";
      for (const auto& [k, v] : e) out << " " << k << "=" << v;
      out << "\n";
    }
  }
}

SchemaSet load_schemas(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line != "dialrl-schemas v1") throw SchemaError("bad schema header");
  SchemaSet s;
  DomainSchema* cur = nullptr;
  while (std::getline(in, line)) {
    std::istringstream iss(line);
    std::string tok;
    iss >> tok;
    if (tok == "domain") {
      DomainSchema d;
      std::string flag;
      iss >> d.name >> flag;
      d.bookable = flag == "bookable=1";
      s.domains.push_back(std::move(d));
      cur = &s.domains.back();
    } else if (tok == "informable" && cur) {
      std::string slot, eq, v;
      iss >> slot >> eq;
      cur->informable.push_back(slot);
      while (iss >> v) cur->values[slot].push_back(v);
    } else if (tok == "requestable" && cur) {
      std::string slot;
      iss >> slot;
      cur->requestable.push_back(slot);
    } else if (tok == "entity" && cur) {
      Entity e;
      std::string kv;
      while (iss >> kv) {
        auto p = kv.find('=');
        e[kv.substr(0, p)] = kv.substr(p + 1);
      }
      cur->database.push_back(std::move(e));
    }
  }
  for (auto& d : s.domains) d.validate();
  return s;
}

}  // namespace dialrl::dialenv
