#include "dialrl/xfer/factored.hpp"

#include <algorithm>

namespace dialrl::xfer {

ActionVocab ActionVocab::from_schemas(const dialenv::SchemaSet& schemas) {
  ActionVocab v;
  v.domains = schemas.domain_names();
  v.act_types = {"Inform", "Request", "Book", "NoOffer"};
  v.slots = schemas.slot_vocab();
  return v;
}

namespace {

int index_in(const std::vector<std::string>& vocab, const std::string& name,
             const char* what) {
  auto it = std::find(vocab.begin(), vocab.end(), name);
  if (it == vocab.end())
    throw diffcore::BadInput(std::string("factorize_action: unknown ") + what +
                             " '" + name + "'");
  return static_cast<int>(it - vocab.begin());
}

}  // namespace

Vector factorize_action(const dialenv::CompositeAct& a, const ActionVocab& vocab) {
  Vector out = Vector::Zero(vocab.dim());
  const int d0 = 0;
  const int t0 = static_cast<int>(vocab.domains.size());
  const int s0 = t0 + static_cast<int>(vocab.act_types.size());
  for (const auto& act : a.acts) {
    out[d0 + index_in(vocab.domains, act.domain, "domain")] = 1.0;
    out[t0 + index_in(vocab.act_types, dialenv::to_string(act.type), "act type")] =
        1.0;
    out[s0 + index_in(vocab.slots, act.slot, "slot")] = 1.0;
  }
  return out;
}

rewardgan::ActionEmbedding factored_embedding(const dialenv::ActionCatalog& catalog,
                                              const ActionVocab& vocab) {
  rewardgan::ActionEmbedding e;
  e.mode = "factored";
  e.rows = Matrix::Zero(catalog.size(), vocab.dim());
  for (int i = 0; i < catalog.size(); ++i)
    e.rows.row(i) = factorize_action(catalog[i], vocab).transpose();
  return e;
}

}  // namespace dialrl::xfer
