#include <algorithm>

#include "dialrl/dialenv/corpus.hpp"
#include "dialrl/xfer/factored.hpp"
#include "dialrl/xfer/holdout.hpp"
#include "doctest.h"

using namespace dialrl::xfer;
using namespace dialrl::dialenv;
using dialrl::Rng;

namespace {

int seg_count(const Vector& v, int begin, int end) {
  int n = 0;
  for (int i = begin; i < end; ++i)
    if (v(i) != 0.0) ++n;
  return n;
}

}  // namespace

TEST_CASE("ActionVocab: dimensions from schemas") {
  SchemaSet s = desk_schemas();
  ActionVocab vocab = ActionVocab::from_schemas(s);
  CHECK(vocab.domains == s.domain_names());
  CHECK(vocab.act_types ==
        std::vector<std::string>{"Inform", "Request", "Book", "NoOffer"});
  CHECK(vocab.slots == s.slot_vocab());
  CHECK(vocab.dim() == static_cast<int>(vocab.domains.size() +
                                        vocab.act_types.size() +
                                        vocab.slots.size()));
}

TEST_CASE("factorize_action: single act sets exactly one bit per segment") {
  SchemaSet s = desk_schemas();
  ActionVocab vocab = ActionVocab::from_schemas(s);
  CompositeAct a =
      CompositeAct::of({{"restaurant", ActType::Inform, "price", ""}});
  Vector v = factorize_action(a, vocab);
  int d = static_cast<int>(vocab.domains.size());
  int t = static_cast<int>(vocab.act_types.size());
  CHECK(seg_count(v, 0, d) == 1);
  CHECK(seg_count(v, d, d + t) == 1);
  CHECK(seg_count(v, d + t, vocab.dim()) == 1);
  CHECK(v.sum() == doctest::Approx(3.0));
}

TEST_CASE("factorize_action: shared slot/act segments across domains") {
  SchemaSet s = desk_schemas();
  ActionVocab vocab = ActionVocab::from_schemas(s);
  Vector rest = factorize_action(
      CompositeAct::of({{"restaurant", ActType::Inform, "price", ""}}), vocab);
  Vector hotel = factorize_action(
      CompositeAct::of({{"hotel", ActType::Inform, "price", ""}}), vocab);
  int d = static_cast<int>(vocab.domains.size());
  // identical act-type and slot segments, different domain segment
  CHECK((rest.segment(d, vocab.dim() - d) - hotel.segment(d, vocab.dim() - d))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK((rest.segment(0, d) - hotel.segment(0, d)).cwiseAbs().maxCoeff() ==
        1.0);
}

TEST_CASE("factorize_action: union semantics for composites") {
  SchemaSet s = desk_schemas();
  ActionVocab vocab = ActionVocab::from_schemas(s);
  CompositeAct two = CompositeAct::of(
      {{"restaurant", ActType::Inform, "price", ""},
       {"restaurant", ActType::Request, "area", ""}});
  Vector v = factorize_action(two, vocab);
  int d = static_cast<int>(vocab.domains.size());
  int t = static_cast<int>(vocab.act_types.size());
  CHECK(seg_count(v, 0, d) == 1);          // one domain
  CHECK(seg_count(v, d, d + t) == 2);      // Inform + Request
  CHECK(seg_count(v, d + t, vocab.dim()) == 2);  // price + area
}

TEST_CASE("factorize_action: injective on atomic acts") {
  SchemaSet s = desk_schemas();
  ActionVocab vocab = ActionVocab::from_schemas(s);
  std::vector<Vector> seen;
  std::vector<std::string> keys;
  for (const auto& dom : vocab.domains)
    for (const auto& slot : {"price", "phone", "area"}) {
      CompositeAct a = CompositeAct::of({{dom, ActType::Inform, slot, ""}});
      Vector v = factorize_action(a, vocab);
      for (std::size_t i = 0; i < seen.size(); ++i)
        CHECK((seen[i] - v).cwiseAbs().maxCoeff() > 0.0);
      seen.push_back(v);
    }
}

TEST_CASE("factorize_action rejects out-of-vocabulary domains") {
  SchemaSet s = desk_schemas();
  ActionVocab vocab = ActionVocab::from_schemas(s);
  CompositeAct bad = CompositeAct::of({{"casino", ActType::Inform, "price", ""}});
  CHECK_THROWS_AS(factorize_action(bad, vocab), dialrl::diffcore::BadInput);
}

TEST_CASE("factored_embedding: rows match per-action factorization") {
  EnvConfig env = EnvConfig::desk();
  Rng rng(3);
  Corpus corpus = gen_corpus(env, 60, 0.1, 30, rng);
  ActionVocab vocab = ActionVocab::from_schemas(env.schemas);
  auto emb = factored_embedding(corpus.catalog, vocab);
  CHECK(emb.mode == "factored");
  CHECK(emb.rows.rows() == corpus.catalog.size());
  CHECK(emb.dim() == vocab.dim());
  for (int i = 0; i < corpus.catalog.size(); ++i) {
    Vector expect = factorize_action(corpus.catalog[i], vocab);
    CHECK((emb.embed(i) - expect).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("HoldoutSpec: desk default holds out the unique-slot domain") {
  SchemaSet s = desk_schemas();
  HoldoutSpec spec = HoldoutSpec::desk_default(s);
  CHECK(spec.holdout == "hotel");
  CHECK(std::find(spec.train_domains.begin(), spec.train_domains.end(),
                  "hotel") == spec.train_domains.end());
  CHECK(spec.train_domains.size() == s.domains.size() - 1);
  CHECK_NOTHROW(spec.validate(s));

  HoldoutSpec bad = spec;
  bad.train_domains.push_back("hotel");
  CHECK_THROWS(bad.validate(s));
}

TEST_CASE("filter_corpus: zero holdout acts survive; whole episodes dropped") {
  EnvConfig env = EnvConfig::desk();
  Rng rng(5);
  Corpus corpus = gen_corpus(env, 200, 0.1, 60, rng);
  HoldoutSpec spec = HoldoutSpec::desk_default(env.schemas);
  Corpus filtered = filter_corpus(corpus, spec);

  REQUIRE_FALSE(filtered.episodes.empty());
  CHECK(filtered.episodes.size() < corpus.episodes.size());
  // no catalog action touches the holdout
  for (int i = 0; i < filtered.catalog.size(); ++i)
    for (const auto& a : filtered.catalog[i].acts)
      CHECK(a.domain != spec.holdout);
  // no surviving episode's goal touches the holdout
  for (const auto& ep : filtered.episodes) {
    CHECK(ep.goal.find(spec.holdout) == nullptr);
    for (const auto& t : ep.turns) {
      REQUIRE(t.action >= 0);
      REQUIRE(t.action < filtered.catalog.size());
      for (const auto& a : filtered.catalog[t.action].acts)
        CHECK(a.domain != spec.holdout);
    }
  }
  // every dropped episode touched the holdout
  std::size_t touching = 0;
  for (const auto& ep : corpus.episodes)
    if (episode_touches_domain(ep, corpus.catalog, spec.holdout)) ++touching;
  CHECK(filtered.episodes.size() == corpus.episodes.size() - touching);
}

TEST_CASE("filter_corpus: absent holdout leaves the corpus unchanged") {
  EnvConfig env = EnvConfig::desk();
  // restrict goals away from hotel so no episode can touch it
  env.goal_domains = {"restaurant", "cafe", "attraction", "train"};
  Rng rng(7);
  Corpus corpus = gen_corpus(env, 100, 0.1, 60, rng);
  HoldoutSpec spec = HoldoutSpec::desk_default(env.schemas);
  Corpus filtered = filter_corpus(corpus, spec);
  CHECK(filtered.episodes.size() == corpus.episodes.size());
  REQUIRE(filtered.catalog.size() == corpus.catalog.size());
  for (int i = 0; i < corpus.catalog.size(); ++i)
    CHECK(filtered.catalog[i].key() == corpus.catalog[i].key());
}

TEST_CASE("filter_corpus: nothing surviving raises ConfigError") {
  EnvConfig env = EnvConfig::desk();
  env.goal_domains = {"hotel"};
  env.max_domains = 1;
  Rng rng(11);
  Corpus corpus = gen_corpus(env, 30, 0.0, 40, rng);
  HoldoutSpec spec = HoldoutSpec::desk_default(env.schemas);
  CHECK_THROWS_AS(filter_corpus(corpus, spec), dialrl::ConfigError);
}

TEST_CASE("audit_corpus: passes on filtered, fails on raw corpus") {
  EnvConfig env = EnvConfig::desk();
  Rng rng(13);
  Corpus corpus = gen_corpus(env, 200, 0.1, 60, rng);
  HoldoutSpec spec = HoldoutSpec::desk_default(env.schemas);

  AuditResult raw = audit_corpus(corpus, spec.holdout);
  CHECK_FALSE(raw.passed);
  CHECK(raw.holdout_pairs > 0);

  Corpus filtered = filter_corpus(corpus, spec);
  AuditResult ok = audit_corpus(filtered, spec.holdout);
  CHECK(ok.passed);
  CHECK(ok.holdout_pairs == 0);
  CHECK(ok.holdout_catalog_entries == 0);
  CHECK(ok.pairs_checked ==
        static_cast<long>(filtered.num_turns()));
}

TEST_CASE("discriminator input width constant across train/transfer phases") {
  EnvConfig env = EnvConfig::desk();
  Rng rng(17);
  Corpus corpus = gen_corpus(env, 150, 0.1, 60, rng);
  HoldoutSpec spec = HoldoutSpec::desk_default(env.schemas);
  Corpus filtered = filter_corpus(corpus, spec);
  ActionVocab vocab = ActionVocab::from_schemas(env.schemas);
  auto emb_full = factored_embedding(corpus.catalog, vocab);
  auto emb_filtered = factored_embedding(filtered.catalog, vocab);
  // row counts differ (catalogs differ) but the embedding width is fixed:
  // 64-dim latent + |domains| + |act types| + |slots| on the disc side
  CHECK(emb_full.dim() == emb_filtered.dim());
  CHECK(emb_full.dim() == vocab.dim());
}
