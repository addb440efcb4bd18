#pragma once

#include "dialrl/agents/train.hpp"
#include "dialrl/harness/config.hpp"
#include "dialrl/harness/manifest.hpp"
#include "dialrl/statevae/vae.hpp"
#include "dialrl/xfer/transfer.hpp"

namespace dialrl::harness {

// Everything one seeded end-to-end run needs. Two built-in profiles:
// "desk" runs in minutes; "paper_shape" reproduces the paper's state and
// action dimensions for contract checks only.
struct PipelineConfig {
  dialenv::EnvConfig env;
  int corpus_episodes = 400;
  double corpus_noise = 0.15;
  int catalog_size = 60;
  statevae::VaeConfig vae;
  rewardgan::RewardTrainConfig reward;
  agents::AgentConfig agent;
  agents::Algo algo = agents::Algo::Dqn;
  agents::RewardSource source = agents::RewardSource::GanVae;

  static PipelineConfig desk();
  static PipelineConfig paper_shape();
  // Profile defaults overridden by explicit config keys.
  static PipelineConfig from_config(const Config& cfg);
};

// Append always-zero "pad.N" bits until the layout reaches target_dim.
void pad_layout(dialenv::StateLayout& layout, int target_dim);

struct PipelineResult {
  std::size_t corpus_turns = 0;
  int catalog_size = 0;
  int state_dim = 0;
  double vae_recon_accuracy = 0.0;
  double reward_auc = 0.0;               // 0 when source = human
  double expert_mean_log_d = 0.0;        // Fig.-3-style validation line
  agents::TrainAgentResult agent;
};

// gen-corpus -> train-vae -> train-reward -> train-agent under one root seed;
// every stage draws from its own named substream (corpus, vae, gan, agent,
// eval) so stages can be rerun independently.
PipelineResult run_pipeline(const PipelineConfig& cfg, std::uint64_t seed);

struct CurveStat {
  long frames = 0;
  double mean_success = 0.0, std_success = 0.0;
  double mean_turn = 0.0, std_turn = 0.0;
};

struct BatchResult {
  std::vector<std::vector<agents::CurvePoint>> per_seed;
  std::vector<CurveStat> aggregate;  // per shared eval point
  std::vector<double> final_success;
  double mean_final_success = 0.0;
  double std_final_success = 0.0;
};

// Population mean/stddev per eval point; curves must share frame grids.
BatchResult aggregate_curves(
    const std::vector<std::vector<agents::CurvePoint>>& per_seed);

BatchResult batch_runs(const PipelineConfig& cfg,
                       const std::vector<std::uint64_t>& seeds);

// CSV plumbing (header: frames,success_rate,average_turn,mean_learned_reward)
void write_curve_csv(const std::string& path,
                     const std::vector<agents::CurvePoint>& curve);
std::vector<agents::CurvePoint> read_curve_csv(const std::string& path);
void write_aggregate_csv(const std::string& path,
                         const std::vector<CurveStat>& stats);

struct ReportRow {
  std::string agent;
  double success_rate = 0.0;
  double average_turn = 0.0;
};

void write_result_csv(const std::string& path, const ReportRow& row);
// Scans run directories for result.csv; missing entries are skipped with a
// warning on the returned list.
std::vector<ReportRow> collect_report(const std::vector<std::string>& run_dirs,
                                      std::vector<std::string>* warnings);
std::string render_table(const std::vector<ReportRow>& rows);

}  // namespace dialrl::harness
