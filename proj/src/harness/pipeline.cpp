#include "dialrl/harness/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace dialrl::harness {

using agents::CurvePoint;
using dialenv::Corpus;

void pad_layout(dialenv::StateLayout& layout, int target_dim) {
  int n = 0;
  while (layout.dim() < target_dim) {
    std::string name = "pad." + std::to_string(n++);
    layout.index_of[name] = layout.dim();
    layout.bit_names.push_back(name);
  }
}

PipelineConfig PipelineConfig::desk() {
  PipelineConfig cfg;
  cfg.env = dialenv::EnvConfig::desk();
  cfg.corpus_episodes = 1600;
  cfg.corpus_noise = 0.15;
  cfg.catalog_size = 60;
  cfg.vae.epochs = 15;
  cfg.reward.steps = 2000;
  cfg.agent.budget_frames = 30000;
  cfg.agent.eval_every = 5000;
  cfg.agent.eval_episodes = 100;
  return cfg;
}

PipelineConfig PipelineConfig::paper_shape() {
  PipelineConfig cfg = desk();
  pad_layout(cfg.env.layout, 392);
  cfg.corpus_episodes = 2000;
  cfg.catalog_size = 300;
  cfg.agent.budget_frames = 500000;
  cfg.reward.steps = 3000;
  return cfg;
}

PipelineConfig PipelineConfig::from_config(const Config& c) {
  std::string profile = c.get_or("profile", "desk");
  PipelineConfig cfg;
  if (profile == "desk") cfg = desk();
  else if (profile == "paper_shape") cfg = paper_shape();
  else throw ConfigError("unknown profile '" + profile + "'");

  cfg.env.t_max = static_cast<int>(c.get_int("env.t_max", cfg.env.t_max));
  cfg.env.patience = static_cast<int>(c.get_int("env.patience", cfg.env.patience));
  cfg.env.min_domains =
      static_cast<int>(c.get_int("env.min_domains", cfg.env.min_domains));
  cfg.env.max_domains =
      static_cast<int>(c.get_int("env.max_domains", cfg.env.max_domains));
  if (c.has("env.goal_domains")) {
    cfg.env.goal_domains.clear();
    std::istringstream in(c.get("env.goal_domains"));
    std::string d;
    while (std::getline(in, d, ','))
      if (!d.empty()) cfg.env.goal_domains.push_back(d);
  }

  cfg.corpus_episodes =
      static_cast<int>(c.get_int("corpus.episodes", cfg.corpus_episodes));
  cfg.corpus_noise = c.get_double("corpus.noise", cfg.corpus_noise);
  cfg.catalog_size =
      static_cast<int>(c.get_int("corpus.catalog_size", cfg.catalog_size));

  cfg.vae.latent_dim =
      static_cast<int>(c.get_int("vae.latent_dim", cfg.vae.latent_dim));
  cfg.vae.hidden = static_cast<int>(c.get_int("vae.hidden", cfg.vae.hidden));
  cfg.vae.beta = c.get_double("vae.beta", cfg.vae.beta);
  cfg.vae.variational = c.get_bool("vae.variational", cfg.vae.variational);
  cfg.vae.epochs = static_cast<int>(c.get_int("vae.epochs", cfg.vae.epochs));
  cfg.vae.batch_size =
      static_cast<int>(c.get_int("vae.batch_size", cfg.vae.batch_size));
  cfg.vae.lr = c.get_double("vae.lr", cfg.vae.lr);

  cfg.reward.steps = static_cast<int>(c.get_int("reward.steps", cfg.reward.steps));
  cfg.reward.tau = c.get_double("reward.tau", cfg.reward.tau);
  cfg.reward.hidden =
      static_cast<int>(c.get_int("reward.hidden", cfg.reward.hidden));
  cfg.reward.batch = static_cast<int>(c.get_int("reward.batch", cfg.reward.batch));
  cfg.reward.lr_d = c.get_double("reward.lr_d", cfg.reward.lr_d);
  cfg.reward.lr_g = c.get_double("reward.lr_g", cfg.reward.lr_g);
  cfg.reward.eval_every =
      static_cast<int>(c.get_int("reward.eval_every", cfg.reward.eval_every));
  cfg.reward.patience =
      static_cast<int>(c.get_int("reward.patience", cfg.reward.patience));
  cfg.reward.history_capacity = static_cast<int>(
      c.get_int("reward.history_capacity", cfg.reward.history_capacity));
  cfg.reward.t_max = cfg.env.t_max;

  cfg.agent.budget_frames = c.get_int("agent.budget_frames", cfg.agent.budget_frames);
  cfg.agent.eval_every = c.get_int("agent.eval_every", cfg.agent.eval_every);
  cfg.agent.eval_episodes =
      static_cast<int>(c.get_int("agent.eval_episodes", cfg.agent.eval_episodes));
  cfg.agent.hidden = static_cast<int>(c.get_int("agent.hidden", cfg.agent.hidden));
  cfg.agent.buffer_capacity = static_cast<std::size_t>(
      c.get_int("agent.buffer_capacity", static_cast<long>(cfg.agent.buffer_capacity)));
  cfg.agent.batch = static_cast<int>(c.get_int("agent.batch", cfg.agent.batch));
  cfg.agent.target_sync = c.get_int("agent.target_sync", cfg.agent.target_sync);
  cfg.agent.gamma = c.get_double("agent.gamma", cfg.agent.gamma);
  cfg.agent.lr = c.get_double("agent.lr", cfg.agent.lr);
  cfg.agent.eps_start = c.get_double("agent.eps_start", cfg.agent.eps_start);
  cfg.agent.eps_end = c.get_double("agent.eps_end", cfg.agent.eps_end);
  cfg.agent.eps_decay_frac =
      c.get_double("agent.eps_decay_frac", cfg.agent.eps_decay_frac);
  cfg.agent.learn_start = c.get_int("agent.learn_start", cfg.agent.learn_start);
  cfg.agent.updates_per_frame = static_cast<int>(
      c.get_int("agent.updates_per_frame", cfg.agent.updates_per_frame));
  cfg.agent.warmup_decay_frac =
      c.get_double("agent.warmup_decay_frac", cfg.agent.warmup_decay_frac);
  cfg.agent.warmup_seed_transitions = static_cast<std::size_t>(c.get_int(
      "agent.warmup_seed_transitions",
      static_cast<long>(cfg.agent.warmup_seed_transitions)));
  cfg.agent.rollout_steps =
      static_cast<int>(c.get_int("agent.rollout_steps", cfg.agent.rollout_steps));
  cfg.agent.imitation_epochs = static_cast<int>(
      c.get_int("agent.imitation_epochs", cfg.agent.imitation_epochs));
  cfg.agent.imitation_max_pairs = static_cast<int>(
      c.get_int("agent.imitation_max_pairs", cfg.agent.imitation_max_pairs));
  cfg.agent.teacher_forcing =
      c.get_bool("agent.teacher_forcing", cfg.agent.teacher_forcing);

  cfg.algo = agents::algo_from_string(c.get_or("agent.algo", "dqn"));
  cfg.source = agents::reward_source_from_string(
      c.get_or("agent.reward_source", "gan_vae"));
  return cfg;
}

PipelineResult run_pipeline(const PipelineConfig& cfg, std::uint64_t seed) {
  Rng root(seed);
  Rng rng_corpus = root.substream("corpus");
  Rng rng_vae = root.substream("vae");
  Rng rng_gan = root.substream("gan");
  Rng rng_agent = root.substream("agent");

  Corpus corpus = dialenv::gen_corpus(cfg.env, cfg.corpus_episodes,
                                      cfg.corpus_noise, cfg.catalog_size,
                                      rng_corpus);
  PipelineResult result;
  result.corpus_turns = corpus.num_turns();
  result.catalog_size = corpus.catalog.size();
  result.state_dim = corpus.state_dim;

  if (cfg.source == agents::RewardSource::Human) {
    result.agent = agents::train_agent(cfg.algo, cfg.source, cfg.env, corpus,
                                       nullptr, cfg.agent, rng_agent);
    return result;
  }

  statevae::VaeConfig vc = cfg.vae;
  vc.variational = cfg.source == agents::RewardSource::GanVae;
  auto vt = statevae::train_vae(corpus.all_states(), corpus.state_dim, vc, rng_vae);
  result.vae_recon_accuracy =
      statevae::reconstruction_accuracy(vt.params, corpus.all_states());

  auto embedding = rewardgan::ActionEmbedding::onehot(corpus.catalog.size());
  rewardgan::RewardTrainConfig rc = cfg.reward;
  rc.t_max = cfg.env.t_max;
  auto rt = rewardgan::train_reward(corpus, vt.params, embedding, rc, rng_gan);
  result.reward_auc = rt.final_auc;

  double sum = 0.0;
  long n = 0;
  for (const auto& ep : corpus.episodes) {
    for (const auto& t : ep.turns) {
      sum += rt.model.log_d(t.state, t.action);
      if (++n >= 2000) break;
    }
    if (n >= 2000) break;
  }
  result.expert_mean_log_d = n > 0 ? sum / n : 0.0;

  result.agent = agents::train_agent(cfg.algo, cfg.source, cfg.env, corpus,
                                     &rt.model, cfg.agent, rng_agent);
  return result;
}

BatchResult aggregate_curves(
    const std::vector<std::vector<CurvePoint>>& per_seed) {
  if (per_seed.empty()) throw ConfigError("aggregate_curves: no curves");
  BatchResult out;
  out.per_seed = per_seed;
  const std::size_t n_points = per_seed.front().size();
  for (const auto& c : per_seed)
    if (c.size() != n_points)
      throw ConfigError("aggregate_curves: curves have different lengths");

  const double n = static_cast<double>(per_seed.size());
  for (std::size_t p = 0; p < n_points; ++p) {
    CurveStat stat;
    stat.frames = per_seed.front()[p].frames;
    for (const auto& c : per_seed) {
      if (c[p].frames != stat.frames)
        throw ConfigError("aggregate_curves: frame grids differ");
      stat.mean_success += c[p].success_rate;
      stat.mean_turn += c[p].average_turn;
    }
    stat.mean_success /= n;
    stat.mean_turn /= n;
    for (const auto& c : per_seed) {
      stat.std_success += std::pow(c[p].success_rate - stat.mean_success, 2);
      stat.std_turn += std::pow(c[p].average_turn - stat.mean_turn, 2);
    }
    stat.std_success = std::sqrt(stat.std_success / n);
    stat.std_turn = std::sqrt(stat.std_turn / n);
    out.aggregate.push_back(stat);
  }
  // Final performance per seed = the best-on-eval point (the retained
  // checkpoint): highest success, fewest turns among ties.
  for (const auto& c : per_seed) {
    double best_s = -1.0, best_t = 1e9;
    for (const auto& pt : c) {
      if (pt.success_rate > best_s ||
          (pt.success_rate == best_s && pt.average_turn < best_t)) {
        best_s = pt.success_rate;
        best_t = pt.average_turn;
      }
    }
    out.final_success.push_back(best_s);
  }
  for (double f : out.final_success) out.mean_final_success += f;
  out.mean_final_success /= static_cast<double>(out.final_success.size());
  for (double f : out.final_success)
    out.std_final_success +=
        std::pow(f - out.mean_final_success, 2);
  out.std_final_success =
      std::sqrt(out.std_final_success / static_cast<double>(out.final_success.size()));
  return out;
}

BatchResult batch_runs(const PipelineConfig& cfg,
                       const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ConfigError("batch_runs: empty seed list");
  std::vector<std::vector<CurvePoint>> per_seed;
  std::vector<double> finals;
  for (std::uint64_t seed : seeds) {
    PipelineResult r = run_pipeline(cfg, seed);
    per_seed.push_back(r.agent.curve);
    finals.push_back(r.agent.final_success);
  }
  BatchResult out = aggregate_curves(per_seed);
  // Replace the curve-derived finals with the agents' reported values.
  out.final_success = finals;
  out.mean_final_success = 0.0;
  out.std_final_success = 0.0;
  for (double f : finals) out.mean_final_success += f;
  out.mean_final_success /= finals.size();
  for (double f : finals)
    out.std_final_success += std::pow(f - out.mean_final_success, 2);
  out.std_final_success = std::sqrt(out.std_final_success / finals.size());
  return out;
}

void write_curve_csv(const std::string& path,
                     const std::vector<CurvePoint>& curve) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "frames,success_rate,average_turn,mean_learned_reward\n";
  out.precision(17);
  for (const auto& p : curve)
    out << p.frames << "," << p.success_rate << "," << p.average_turn << ","
        << p.mean_learned_reward << "\n";
}

std::vector<CurvePoint> read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<CurvePoint> curve;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CurvePoint p;
    std::istringstream row(line);
    char comma;
    row >> p.frames >> comma >> p.success_rate >> comma >> p.average_turn >>
        comma >> p.mean_learned_reward;
    if (row.fail()) throw ConfigError("bad curve row in " + path + ": " + line);
    curve.push_back(p);
  }
  return curve;
}

void write_aggregate_csv(const std::string& path,
                         const std::vector<CurveStat>& stats) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "frames,mean_success,std_success,mean_turn,std_turn\n";
  out.precision(17);
  for (const auto& s : stats)
    out << s.frames << "," << s.mean_success << "," << s.std_success << ","
        << s.mean_turn << "," << s.std_turn << "\n";
}

void write_result_csv(const std::string& path, const ReportRow& row) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "agent,success_rate,average_turn\n";
  out.precision(17);
  out << row.agent << "," << row.success_rate << "," << row.average_turn << "\n";
}

std::vector<ReportRow> collect_report(const std::vector<std::string>& run_dirs,
                                      std::vector<std::string>* warnings) {
  std::vector<ReportRow> rows;
  for (const auto& dir : run_dirs) {
    std::string path = dir + "/result.csv";
    std::ifstream in(path);
    if (!in) {
      if (warnings) warnings->push_back("missing " + path + "; row omitted");
      continue;
    }
    std::string line;
    std::getline(in, line);  // header
    if (!std::getline(in, line) || line.empty()) {
      if (warnings) warnings->push_back("empty " + path + "; row omitted");
      continue;
    }
    ReportRow row;
    std::istringstream fields(line);
    std::string cell;
    std::getline(fields, row.agent, ',');
    std::getline(fields, cell, ',');
    row.success_rate = std::stod(cell);
    std::getline(fields, cell, ',');
    row.average_turn = std::stod(cell);
    rows.push_back(row);
  }
  return rows;
}

std::string render_table(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "agent,success_rate,average_turn\n";
  out.precision(4);
  out << std::fixed;
  for (const auto& r : rows)
    out << r.agent << "," << r.success_rate << "," << r.average_turn << "\n";
  return out.str();
}

}  // namespace dialrl::harness
