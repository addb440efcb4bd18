// dialrl command-line driver: corpus generation, the two training stages,
// agent training, evaluation, the transfer protocol, and report rendering.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dialrl/harness/pipeline.hpp"

namespace {

// Exit codes, documented in the README:
//   0 ok, 1 usage, 2 missing file, 3 configuration error,
//   4 checkpoint format/version error, 5 training failure, 6 other.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kMissingFile = 2;
constexpr int kConfigError = 3;
constexpr int kCheckpointError = 4;
constexpr int kTrainingError = 5;
constexpr int kOtherError = 6;

using dialrl::ConfigError;
using dialrl::Rng;
using dialrl::harness::Config;
using dialrl::harness::PipelineConfig;
using dialrl::harness::RunManifest;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_out) {
  cmd->add_option("--config", o.config_path, "configuration file");
  auto* out = cmd->add_option("--out", o.out_dir, "output directory");
  if (needs_out) out->required();
  cmd->add_option("--seed", o.seed, "root seed (overrides config)")
      ->each([&o](const std::string&) { o.seed_set = true; });
}

Config load_config(const CommonOpts& o) {
  Config cfg;
  if (!o.config_path.empty()) {
    if (!std::filesystem::exists(o.config_path))
      throw std::ios_base::failure("config file not found: " + o.config_path);
    cfg = Config::load(o.config_path);
  }
  if (o.seed_set) cfg.set("seed", std::to_string(o.seed));
  return cfg;
}

std::uint64_t root_seed(const Config& cfg) {
  return static_cast<std::uint64_t>(cfg.get_int("seed", 1));
}

void ensure_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
}

dialrl::dialenv::Corpus load_corpus_checked(const std::string& path) {
  if (!std::filesystem::exists(path))
    throw std::ios_base::failure("corpus file not found: " + path);
  return dialrl::dialenv::load_corpus(path);
}

void write_manifest(const std::string& dir, const std::string& stage,
                    const Config& cfg, std::uint64_t seed,
                    std::vector<std::string> files) {
  RunManifest m;
  m.stage = stage;
  m.config_hash = cfg.hash_hex();
  m.seed = seed;
  m.status = "ok";
  m.files = std::move(files);
  m.save(dir + "/manifest.txt");
}

int cmd_gen_corpus(const CommonOpts& o) {
  Config cfg = load_config(o);
  PipelineConfig pc = PipelineConfig::from_config(cfg);
  std::uint64_t seed = root_seed(cfg);
  Rng rng = Rng(seed).substream("corpus");
  auto corpus = dialrl::dialenv::gen_corpus(pc.env, pc.corpus_episodes,
                                            pc.corpus_noise, pc.catalog_size,
                                            rng);
  ensure_dir(o.out_dir);
  std::string path = o.out_dir + "/corpus.txt";
  dialrl::dialenv::save_corpus(path, corpus);
  write_manifest(o.out_dir, "gen-corpus", cfg, seed, {path});
  std::cout << "corpus: " << corpus.episodes.size() << " episodes, "
            << corpus.num_turns() << " turns, catalog "
            << corpus.catalog.size() << ", state dim " << corpus.state_dim
            << ", dropped " << corpus.dropped_episodes << "\n";
  return kOk;
}

int cmd_train_vae(const CommonOpts& o, const std::string& corpus_path) {
  Config cfg = load_config(o);
  PipelineConfig pc = PipelineConfig::from_config(cfg);
  std::uint64_t seed = root_seed(cfg);
  auto corpus = load_corpus_checked(corpus_path);
  Rng rng = Rng(seed).substream("vae");
  auto result = dialrl::statevae::train_vae(corpus.all_states(),
                                            corpus.state_dim, pc.vae, rng);
  double acc = dialrl::statevae::reconstruction_accuracy(result.params,
                                                         corpus.all_states());
  ensure_dir(o.out_dir);
  std::string path = o.out_dir + "/vae.bin";
  dialrl::diffcore::save_bundle(path, dialrl::statevae::to_bundle(result.params));
  std::string curve_path = o.out_dir + "/vae_curve.csv";
  {
    std::ofstream curve(curve_path);
    curve << "epoch,total,reconstruction,kl\n";
    curve.precision(17);
    for (const auto& p : result.curve)
      curve << p.epoch << "," << p.total << "," << p.reconstruction << ","
            << p.kl << "\n";
  }
  write_manifest(o.out_dir, "train-vae", cfg, seed, {path, curve_path});
  std::cout << "vae: reconstruction accuracy " << acc << "\n";
  return kOk;
}

int cmd_train_reward(const CommonOpts& o, const std::string& corpus_path,
                     const std::string& vae_path, const std::string& holdout) {
  Config cfg = load_config(o);
  PipelineConfig pc = PipelineConfig::from_config(cfg);
  std::uint64_t seed = root_seed(cfg);
  auto corpus = load_corpus_checked(corpus_path);
  if (!std::filesystem::exists(vae_path))
    throw std::ios_base::failure("vae checkpoint not found: " + vae_path);
  auto vae = dialrl::statevae::vae_from_bundle(
      dialrl::diffcore::load_bundle(vae_path));

  if (!holdout.empty()) {
    dialrl::xfer::HoldoutSpec spec;
    spec.holdout = holdout;
    for (const auto& d : pc.env.schemas.domain_names())
      if (d != holdout) spec.train_domains.push_back(d);
    spec.validate(pc.env.schemas);
    corpus = dialrl::xfer::filter_corpus(corpus, spec);
    auto audit = dialrl::xfer::audit_corpus(corpus, holdout);
    if (!audit.passed) throw ConfigError("holdout corpus audit failed");
    std::cout << "holdout audit: " << audit.pairs_checked << " pairs, 0 from '"
              << holdout << "'\n";
  }

  std::string mode = cfg.get_or("reward.embedding", "onehot");
  dialrl::rewardgan::ActionEmbedding embedding;
  if (mode == "onehot") {
    embedding = dialrl::rewardgan::ActionEmbedding::onehot(corpus.catalog.size());
  } else if (mode == "factored") {
    auto vocab = dialrl::xfer::ActionVocab::from_schemas(pc.env.schemas);
    embedding = dialrl::xfer::factored_embedding(corpus.catalog, vocab);
  } else {
    throw ConfigError("reward.embedding must be onehot or factored, got " + mode);
  }

  Rng rng = Rng(seed).substream("gan");
  auto result =
      dialrl::rewardgan::train_reward(corpus, vae, embedding, pc.reward, rng);
  ensure_dir(o.out_dir);
  std::string path = o.out_dir + "/reward.bin";
  result.model.save(path);
  std::string curve_path = o.out_dir + "/reward_curve.csv";
  {
    std::ofstream curve(curve_path);
    curve << "step,d_loss,g_loss,auc\n";
    curve.precision(17);
    for (const auto& p : result.curve)
      curve << p.step << "," << p.d_loss << "," << p.g_loss << "," << p.auc
            << "\n";
  }
  write_manifest(o.out_dir, "train-reward", cfg, seed, {path, curve_path});
  std::cout << "reward: held-out AUC " << result.final_auc << "\n";
  return kOk;
}

int cmd_train_agent(const CommonOpts& o, const std::string& corpus_path,
                    const std::string& reward_path) {
  Config cfg = load_config(o);
  PipelineConfig pc = PipelineConfig::from_config(cfg);
  std::uint64_t seed = root_seed(cfg);
  auto corpus = load_corpus_checked(corpus_path);

  std::optional<dialrl::rewardgan::RewardModel> model;
  if (pc.source != dialrl::agents::RewardSource::Human) {
    if (reward_path.empty())
      throw ConfigError("reward_source=" + to_string(pc.source) +
                        " requires --reward");
    if (!std::filesystem::exists(reward_path))
      throw std::ios_base::failure("reward checkpoint not found: " + reward_path);
    model = dialrl::rewardgan::RewardModel::load(reward_path);
  }

  Rng rng = Rng(seed).substream("agent");
  auto result = dialrl::agents::train_agent(pc.algo, pc.source, pc.env, corpus,
                                            model ? &*model : nullptr, pc.agent,
                                            rng);
  ensure_dir(o.out_dir);
  std::string policy_path = o.out_dir + "/policy.bin";
  {
    std::ofstream out(policy_path, std::ios::binary);
    dialrl::diffcore::save_net(out, result.best_policy);
  }
  std::string curve_path = o.out_dir + "/curve.csv";
  dialrl::harness::write_curve_csv(curve_path, result.curve);
  std::string result_path = o.out_dir + "/result.csv";
  dialrl::harness::ReportRow row;
  row.agent = to_string(pc.algo) + "(" + to_string(pc.source) + ")";
  row.success_rate = result.final_success;
  row.average_turn = result.final_turns;
  dialrl::harness::write_result_csv(result_path, row);
  write_manifest(o.out_dir, "train-agent", cfg, seed,
                 {policy_path, curve_path, result_path});
  std::cout << row.agent << ": success " << result.final_success
            << ", average turn " << result.final_turns << "\n";
  return kOk;
}

int cmd_evaluate(const CommonOpts& o, const std::string& corpus_path,
                 const std::string& policy_path, int episodes) {
  Config cfg = load_config(o);
  PipelineConfig pc = PipelineConfig::from_config(cfg);
  std::uint64_t seed = root_seed(cfg);
  auto corpus = load_corpus_checked(corpus_path);
  if (!std::filesystem::exists(policy_path))
    throw std::ios_base::failure("policy checkpoint not found: " + policy_path);
  std::ifstream in(policy_path, std::ios::binary);
  auto net = dialrl::diffcore::load_net(in);

  Rng rng = Rng(seed).substream("eval");
  auto eval = dialrl::dialenv::evaluate(dialrl::agents::greedy_policy(net),
                                        pc.env, corpus.catalog, episodes, rng);
  std::cout << "success_rate " << eval.success_rate << "\naverage_turn "
            << eval.average_turn << "\n";
  if (o.out_dir != ".") {
    ensure_dir(o.out_dir);
    dialrl::harness::ReportRow row{"evaluated", eval.success_rate,
                                   eval.average_turn};
    std::string path = o.out_dir + "/result.csv";
    dialrl::harness::write_result_csv(path, row);
    write_manifest(o.out_dir, "evaluate", cfg, seed, {path});
  }
  return kOk;
}

int cmd_transfer(const CommonOpts& o) {
  Config cfg = load_config(o);
  PipelineConfig pc = PipelineConfig::from_config(cfg);
  std::uint64_t seed = root_seed(cfg);

  dialrl::xfer::TransferConfig tc;
  tc.env = pc.env;
  tc.spec = dialrl::xfer::HoldoutSpec::desk_default(pc.env.schemas);
  if (cfg.has("transfer.holdout")) {
    tc.spec.holdout = cfg.get("transfer.holdout");
    tc.spec.train_domains.clear();
    for (const auto& d : pc.env.schemas.domain_names())
      if (d != tc.spec.holdout) tc.spec.train_domains.push_back(d);
  }
  tc.corpus_episodes = pc.corpus_episodes;
  tc.corpus_noise = pc.corpus_noise;
  tc.catalog_size = pc.catalog_size;
  tc.vae = pc.vae;
  tc.reward = pc.reward;
  tc.agent = pc.agent;

  Rng rng = Rng(seed).substream("transfer");
  auto report = dialrl::xfer::transfer_experiment(tc, rng);
  ensure_dir(o.out_dir);
  std::vector<std::string> files;
  for (const auto& run : report.runs) {
    std::string path = o.out_dir + "/curve_" + run.label + ".csv";
    dialrl::harness::write_curve_csv(path, run.result.curve);
    files.push_back(path);
    std::cout << run.label << ": success " << run.result.final_success
              << ", average turn " << run.result.final_turns << "\n";
  }
  std::string audit_path = o.out_dir + "/audit.txt";
  {
    std::ofstream out(audit_path);
    out << "holdout = " << tc.spec.holdout << "\n";
    out << "pairs_checked = " << report.audit.pairs_checked << "\n";
    out << "holdout_pairs = " << report.audit.holdout_pairs << "\n";
    out << "holdout_catalog_entries = " << report.audit.holdout_catalog_entries
        << "\n";
    out << "passed = " << (report.audit.passed ? "true" : "false") << "\n";
  }
  files.push_back(audit_path);
  write_manifest(o.out_dir, "transfer", cfg, seed, files);
  std::cout << "audit passed: " << (report.audit.passed ? "yes" : "no") << "\n";
  return kOk;
}

int cmd_report(const std::vector<std::string>& run_dirs,
               const std::string& out_path) {
  std::vector<std::string> warnings;
  auto rows = dialrl::harness::collect_report(run_dirs, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  if (rows.empty() && run_dirs.empty())
    std::cerr << "warning: no run directories given\n";
  std::string table = dialrl::harness::render_table(rows);
  std::cout << table;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write " + out_path);
    out << table;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dialrl: offline reward learning + RL for dialogue policies"};
  app.require_subcommand(1);

  CommonOpts gen_o, vae_o, rew_o, agent_o, eval_o, xfer_o;
  std::string vae_corpus, rew_corpus, rew_vae, rew_holdout;
  std::string agent_corpus, agent_reward;
  std::string eval_corpus, eval_policy;
  int eval_episodes = 200;
  std::vector<std::string> report_dirs;
  std::string report_out;

  auto* gen = app.add_subcommand("gen-corpus", "generate an expert corpus");
  add_common(gen, gen_o, true);

  auto* vae = app.add_subcommand("train-vae", "train the state VAE");
  add_common(vae, vae_o, true);
  vae->add_option("--corpus", vae_corpus, "corpus file")->required();

  auto* rew = app.add_subcommand("train-reward", "train the GAN reward model");
  add_common(rew, rew_o, true);
  rew->add_option("--corpus", rew_corpus, "corpus file")->required();
  rew->add_option("--vae", rew_vae, "VAE checkpoint")->required();
  rew->add_option("--holdout", rew_holdout, "exclude a domain before training");

  auto* agent = app.add_subcommand("train-agent", "train a dialogue policy");
  add_common(agent, agent_o, true);
  agent->add_option("--corpus", agent_corpus, "corpus file")->required();
  agent->add_option("--reward", agent_reward, "reward model checkpoint");

  auto* ev = app.add_subcommand("evaluate", "evaluate a saved policy");
  add_common(ev, eval_o, false);
  ev->add_option("--corpus", eval_corpus, "corpus file")->required();
  ev->add_option("--policy", eval_policy, "policy checkpoint")->required();
  ev->add_option("--episodes", eval_episodes, "evaluation episodes");

  auto* xfer = app.add_subcommand("transfer", "run the domain-transfer trio");
  add_common(xfer, xfer_o, true);

  auto* rep = app.add_subcommand("report", "render a results table");
  rep->add_option("dirs", report_dirs, "run directories");
  rep->add_option("--out", report_out, "write the table to a file");

  if (argc <= 1) {
    std::cout << app.help();
    return kUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen_corpus(gen_o);
    if (vae->parsed()) return cmd_train_vae(vae_o, vae_corpus);
    if (rew->parsed())
      return cmd_train_reward(rew_o, rew_corpus, rew_vae, rew_holdout);
    if (agent->parsed()) return cmd_train_agent(agent_o, agent_corpus, agent_reward);
    if (ev->parsed())
      return cmd_evaluate(eval_o, eval_corpus, eval_policy, eval_episodes);
    if (xfer->parsed()) return cmd_transfer(xfer_o);
    if (rep->parsed()) return cmd_report(report_dirs, report_out);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMissingFile;
  } catch (const dialrl::diffcore::SerializeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckpointError;
  } catch (const dialrl::diffcore::TrainingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTrainingError;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const dialrl::diffcore::BadInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOtherError;
  }
  return kUsage;
}
