#include "dialrl/dialenv/acts.hpp"

#include <algorithm>
#include <stdexcept>

namespace dialrl::dialenv {

std::string to_string(ActType t) {
  switch (t) {
    case ActType::Inform: return "Inform";
    case ActType::Request: return "Request";
    case ActType::Book: return "Book";
    case ActType::NoOffer: return "NoOffer";
  }
  return "?";
}

ActType act_type_from_string(const std::string& s) {
  if (s == "Inform") return ActType::Inform;
  if (s == "Request") return ActType::Request;
  if (s == "Book") return ActType::Book;
  if (s == "NoOffer") return ActType::NoOffer;
  throw std::runtime_error("unknown act type: " + s);
}

std::string AtomicAct::key() const {
  return domain + "|" + to_string(type) + "|" + slot;
}

CompositeAct CompositeAct::of(std::vector<AtomicAct> acts) {
  std::sort(acts.begin(), acts.end(),
            [](const AtomicAct& a, const AtomicAct& b) { return a.key() < b.key(); });
  acts.erase(std::unique(acts.begin(), acts.end(),
                         [](const AtomicAct& a, const AtomicAct& b) {
                           return a.key() == b.key();
                         }),
             acts.end());
  CompositeAct c;
  c.acts = std::move(acts);
  return c;
}

std::string CompositeAct::key() const {
  std::string k;
  for (const auto& a : acts) {
    if (!k.empty()) k += ";";
    k += a.key();
  }
  return k;
}

}  // namespace dialrl::dialenv
