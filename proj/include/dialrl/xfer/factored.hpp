#pragma once

#include "dialrl/dialenv/catalog.hpp"
#include "dialrl/dialenv/schema.hpp"
#include "dialrl/rewardgan/discriminator.hpp"

namespace dialrl::xfer {

using diffcore::Matrix;
using diffcore::Vector;

// Fixed vocabulary defining the three factored segments:
// domain multi-hot ++ act-type multi-hot ++ global-slot multi-hot.
struct ActionVocab {
  std::vector<std::string> domains;
  std::vector<std::string> act_types;  // Inform, Request, Book, NoOffer
  std::vector<std::string> slots;      // global slot vocabulary

  int dim() const {
    return static_cast<int>(domains.size() + act_types.size() + slots.size());
  }
  static ActionVocab from_schemas(const dialenv::SchemaSet& schemas);
};

// Union of per-atomic-act bits; each atomic act sets exactly one bit per
// segment. Throws BadInput on a domain/slot outside the vocabulary.
Vector factorize_action(const dialenv::CompositeAct& a, const ActionVocab& vocab);

// Embedding table for a whole catalog (mode = "factored").
rewardgan::ActionEmbedding factored_embedding(const dialenv::ActionCatalog& catalog,
                                              const ActionVocab& vocab);

}  // namespace dialrl::xfer
