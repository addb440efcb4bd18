#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dialrl/harness/config.hpp"
#include "dialrl/harness/manifest.hpp"
#include "dialrl/harness/pipeline.hpp"
#include "doctest.h"

using namespace dialrl::harness;
using dialrl::agents::CurvePoint;

TEST_CASE("Config: parse sections, comments, and whitespace") {
  Config c = Config::parse(
      "# comment\n"
      "seed = 9\n"
      "[agent]\n"
      "algo = dqn\n"
      "budget_frames = 1000\n"
      "[env]\n"
      "max_domains = 2\n");
  CHECK(c.get("seed") == "9");
  CHECK(c.get("agent.algo") == "dqn");
  CHECK(c.get_int("agent.budget_frames", 0) == 1000);
  CHECK(c.get_int("env.max_domains", 0) == 2);
  CHECK(c.get_or("missing", "fallback") == "fallback");
  CHECK_THROWS(c.get("missing"));
}

TEST_CASE("Config: hash stable under key reordering") {
  Config a = Config::parse("x = 1\ny = 2\n[s]\nk = v\n");
  Config b = Config::parse("y = 2\nx = 1\n[s]\nk = v\n");
  CHECK(a.canonical() == b.canonical());
  CHECK(a.hash() == b.hash());
  CHECK(a.hash_hex() == b.hash_hex());

  Config c = a;
  c.set("x", "3");
  CHECK(c.hash() != a.hash());
}

TEST_CASE("Config: typed getters with fallbacks") {
  Config c = Config::parse("f = 1.5\nb1 = true\nb0 = false\nn = -7\n");
  CHECK(c.get_double("f", 0.0) == doctest::Approx(1.5));
  CHECK(c.get_bool("b1", false));
  CHECK_FALSE(c.get_bool("b0", true));
  CHECK(c.get_int("n", 0) == -7);
  CHECK(c.get_double("missing", 2.5) == doctest::Approx(2.5));
}

TEST_CASE("Config: save/load round trip preserves hash") {
  Config c = Config::parse("seed = 4\n[agent]\nalgo = ppo\n");
  std::string path = "test_config_tmp.cfg";
  c.save(path);
  Config d = Config::load(path);
  CHECK(d.hash() == c.hash());
  std::remove(path.c_str());
}

TEST_CASE("RunManifest round trip") {
  RunManifest m;
  m.stage = "train-vae";
  m.config_hash = "abc123";
  m.seed = 42;
  m.status = "ok";
  m.add_file("vae.bin");
  m.add_file("curve.csv");
  std::string path = "test_manifest_tmp.txt";
  m.save(path);
  RunManifest n = RunManifest::load(path);
  CHECK(n.stage == m.stage);
  CHECK(n.config_hash == m.config_hash);
  CHECK(n.seed == m.seed);
  CHECK(n.status == m.status);
  CHECK(n.files == m.files);
  std::remove(path.c_str());
}

TEST_CASE("aggregate_curves: one seed equals the curve with zero stddev") {
  std::vector<CurvePoint> curve{{0, 0.1, 20.0, -1.0}, {100, 0.4, 15.0, -0.5}};
  BatchResult r = aggregate_curves({curve});
  REQUIRE(r.aggregate.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r.aggregate[i].frames == curve[i].frames);
    CHECK(r.aggregate[i].mean_success == doctest::Approx(curve[i].success_rate));
    CHECK(r.aggregate[i].std_success == doctest::Approx(0.0));
    CHECK(r.aggregate[i].mean_turn == doctest::Approx(curve[i].average_turn));
    CHECK(r.aggregate[i].std_turn == doctest::Approx(0.0));
  }
}

TEST_CASE("aggregate_curves: mean/std match brute-force recomputation") {
  std::vector<std::vector<CurvePoint>> seeds;
  for (int s = 0; s < 4; ++s) {
    std::vector<CurvePoint> c;
    for (int i = 0; i < 3; ++i)
      c.push_back({i * 100L, 0.1 * s + 0.05 * i, 20.0 - s - i, 0.0});
    seeds.push_back(c);
  }
  BatchResult r = aggregate_curves(seeds);
  REQUIRE(r.aggregate.size() == 3);
  for (int i = 0; i < 3; ++i) {
    double mean = 0;
    for (int s = 0; s < 4; ++s) mean += seeds[s][i].success_rate;
    mean /= 4;
    double var = 0;
    for (int s = 0; s < 4; ++s) {
      double d = seeds[s][i].success_rate - mean;
      var += d * d;
    }
    CHECK(r.aggregate[i].mean_success == doctest::Approx(mean));
    CHECK(r.aggregate[i].std_success == doctest::Approx(std::sqrt(var / 4)));
  }
  CHECK(r.final_success.size() == 4);
  CHECK(r.mean_final_success ==
        doctest::Approx((0.1 * (0 + 1 + 2 + 3)) / 4 + 0.1));
}

TEST_CASE("aggregate_curves rejects mismatched frame grids") {
  std::vector<CurvePoint> a{{0, 0.1, 10, 0}, {100, 0.2, 10, 0}};
  std::vector<CurvePoint> b{{0, 0.1, 10, 0}, {200, 0.2, 10, 0}};
  CHECK_THROWS(aggregate_curves({a, b}));
}

TEST_CASE("curve CSV round trip preserves values exactly") {
  std::vector<CurvePoint> curve{{0, 0.123456789012345, 19.875, -1.5},
                                {500, 1.0 / 3.0, 11.04, -0.25}};
  std::string path = "test_curve_tmp.csv";
  write_curve_csv(path, curve);
  auto back = read_curve_csv(path);
  REQUIRE(back.size() == curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(back[i].frames == curve[i].frames);
    CHECK(back[i].success_rate == curve[i].success_rate);
    CHECK(back[i].average_turn == curve[i].average_turn);
    CHECK(back[i].mean_learned_reward == curve[i].mean_learned_reward);
  }
  // header names the documented schema
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "frames,success_rate,average_turn,mean_learned_reward");
  in.close();
  std::remove(path.c_str());
}

TEST_CASE("report: empty input gives empty table with no rows") {
  std::vector<std::string> warnings;
  auto rows = collect_report({}, &warnings);
  CHECK(rows.empty());
  std::string table = render_table(rows);
  CHECK(table.find("agent") != std::string::npos);
  CHECK(table.find("success_rate") != std::string::npos);
  CHECK(table.find("average_turn") != std::string::npos);
}

TEST_CASE("report: missing run directory is skipped with a warning") {
  namespace fs = std::filesystem;
  fs::create_directories("test_report_tmp/run1");
  write_result_csv("test_report_tmp/run1/result.csv",
                   {"dqn_gan_vae", 0.95, 12.5});
  std::vector<std::string> warnings;
  auto rows =
      collect_report({"test_report_tmp/run1", "test_report_tmp/missing"},
                     &warnings);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].agent == "dqn_gan_vae");
  CHECK(rows[0].success_rate == doctest::Approx(0.95));
  CHECK(rows[0].average_turn == doctest::Approx(12.5));
  CHECK(warnings.size() == 1);
  std::string table = render_table(rows);
  CHECK(table.find("dqn_gan_vae") != std::string::npos);
  fs::remove_all("test_report_tmp");
}

TEST_CASE("pad_layout appends zero pad bits up to the target dimension") {
  dialrl::dialenv::SchemaSet s = dialrl::dialenv::desk_schemas();
  dialrl::dialenv::StateLayout layout = dialrl::dialenv::build_layout(s);
  int base = layout.dim();
  pad_layout(layout, base + 10);
  CHECK(layout.dim() == base + 10);
  CHECK(layout.bit_names.back().rfind("pad.", 0) == 0);
  // padded state vectors stay zero in the pad segment
  auto t = dialrl::dialenv::init_tracker(s);
  auto v = dialrl::dialenv::vectorize_state(t, layout);
  for (int i = base; i < layout.dim(); ++i) CHECK(v(i) == 0.0);
}

TEST_CASE("paper_shape profile reproduces the paper dimensions") {
  PipelineConfig pc = PipelineConfig::paper_shape();
  CHECK(pc.catalog_size == 300);
  dialrl::dialenv::StateLayout layout = pc.env.layout;
  CHECK(layout.dim() == 392);
  CHECK(pc.vae.latent_dim == 64);
  CHECK(pc.reward.tau == doctest::Approx(0.8));
  CHECK(pc.env.t_max == 40);
}

TEST_CASE("desk profile matches the documented negative-source mixture") {
  PipelineConfig pc = PipelineConfig::desk();
  CHECK(pc.reward.frac_generator == doctest::Approx(0.70));
  CHECK(pc.reward.frac_mismatch == doctest::Approx(0.15));
  CHECK(pc.reward.frac_history == doctest::Approx(0.15));
  CHECK(pc.reward.history_capacity == 10000);
  CHECK(pc.vae.latent_dim == 64);
  CHECK(pc.env.t_max == 40);
}

TEST_CASE("PipelineConfig::from_config applies overrides") {
  Config c = Config::parse(
      "profile = desk\n"
      "[agent]\n"
      "algo = wdqn\n"
      "reward_source = human\n"
      "budget_frames = 1234\n"
      "[env]\n"
      "max_domains = 3\n"
      "[vae]\n"
      "variational = false\n");
  PipelineConfig pc = PipelineConfig::from_config(c);
  CHECK(pc.algo == dialrl::agents::Algo::Wdqn);
  CHECK(pc.source == dialrl::agents::RewardSource::Human);
  CHECK(pc.agent.budget_frames == 1234);
  CHECK(pc.env.max_domains == 3);
  CHECK_FALSE(pc.vae.variational);
}
