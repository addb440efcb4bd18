#include "dialrl/dialenv/corpus.hpp"

#include <fstream>
#include <sstream>

namespace dialrl::dialenv {

std::vector<StateVector> Corpus::all_states() const {
  std::vector<StateVector> states;
  for (const auto& ep : episodes)
    for (const auto& t : ep.turns) states.push_back(t.state);
  return states;
}

std::vector<std::pair<const StateVector*, int>> Corpus::state_action_pairs() const {
  std::vector<std::pair<const StateVector*, int>> pairs;
  for (const auto& ep : episodes)
    for (const auto& t : ep.turns) pairs.emplace_back(&t.state, t.action);
  return pairs;
}

std::size_t Corpus::num_turns() const {
  std::size_t n = 0;
  for (const auto& ep : episodes) n += ep.turns.size();
  return n;
}

Corpus gen_corpus(const EnvConfig& env, int n_episodes, double noise,
                  int catalog_size, Rng& rng) {
  std::vector<RawEpisode> raw;
  raw.reserve(n_episodes);
  std::vector<CompositeAct> all_actions;
  for (int i = 0; i < n_episodes; ++i) {
    raw.push_back(run_expert_episode(env, rng, noise));
    for (const auto& t : raw.back().turns) all_actions.push_back(t.action);
  }

  Corpus corpus;
  corpus.state_dim = env.layout.dim();
  corpus.catalog = build_action_catalog(all_actions, catalog_size);

  for (const RawEpisode& ep : raw) {
    EpisodeLog log;
    log.goal = ep.goal;
    log.success = ep.success;
    bool ok = true;
    for (const RawTurn& t : ep.turns) {
      auto idx = corpus.catalog.index_of(t.action);
      if (!idx) {
        ok = false;
        break;
      }
      Turn turn;
      turn.state = t.state;
      turn.action = *idx;
      turn.reward = handcrafted_reward(t.status, env.t_max);
      turn.next_state = t.next_state;
      turn.done = t.done;
      turn.status = t.status;
      log.turns.push_back(std::move(turn));
    }
    if (!ok) {
      ++corpus.dropped_episodes;
      continue;
    }
    log.turn_count = static_cast<int>(log.turns.size());
    corpus.episodes.push_back(std::move(log));
  }
  return corpus;
}

namespace {

std::string to_hex(const StateVector& v) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  int nibble = 0, acc = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    acc = (acc << 1) | (v[i] > 0.5 ? 1 : 0);
    if (++nibble == 4) {
      s += digits[acc];
      nibble = 0;
      acc = 0;
    }
  }
  if (nibble > 0) s += digits[acc << (4 - nibble)];
  return s;
}

StateVector from_hex(const std::string& s, int dim) {
  StateVector v = StateVector::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    char c = s.at(i / 4);
    int val = c <= '9' ? c - '0' : c - 'a' + 10;
    v[i] = (val >> (3 - i % 4)) & 1 ? 1.0 : 0.0;
  }
  return v;
}

char status_char(TurnStatus s) {
  return s == TurnStatus::Ongoing ? 'O' : s == TurnStatus::Success ? 'S' : 'F';
}

TurnStatus status_from_char(char c) {
  return c == 'O' ? TurnStatus::Ongoing
                  : c == 'S' ? TurnStatus::Success : TurnStatus::Failure;
}

CompositeAct act_from_key(const std::string& key) {
  std::vector<AtomicAct> acts;
  std::istringstream iss(key);
  std::string part;
  while (std::getline(iss, part, ';')) {
    auto p1 = part.find('|');
    auto p2 = part.find('|', p1 + 1);
    acts.push_back({part.substr(0, p1),
                    act_type_from_string(part.substr(p1 + 1, p2 - p1 - 1)),
                    part.substr(p2 + 1), ""});
  }
  return CompositeAct::of(std::move(acts));
}

}  // namespace

void save_corpus(const std::string& path, const Corpus& c) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot open " + path);
  out << "dialrl-corpus v1\n";
  out << "state_dim " << c.state_dim << "\n";
  out << "catalog " << c.catalog.size() << " truncated=" << (c.catalog.truncated ? 1 : 0)
      << "\n";
  for (int i = 0; i < c.catalog.size(); ++i)
    out << "A " << i << " " << c.catalog[i].key() << "\n";
  out << "episodes " << c.episodes.size() << "\n";
  for (const auto& ep : c.episodes) {
    out << "E success=" << (ep.success ? 1 : 0) << " domains=";
    auto names = ep.goal.domain_names();
    for (std::size_t i = 0; i < names.size(); ++i)
      out << (i ? "," : "") << names[i];
    out << "\n";
    for (const auto& t : ep.turns) {
      std::ostringstream reward;
      reward.precision(17);
      reward << t.reward;
      out << "T " << to_hex(t.state) << " " << t.action << " " << to_hex(t.next_state)
          << " " << (t.done ? 1 : 0) << " " << status_char(t.status) << " "
          << reward.str() << "\n";
    }
  }
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line != "dialrl-corpus v1") throw SchemaError("bad corpus header: " + line);
  Corpus c;
  std::string tok;
  in >> tok >> c.state_dim;
  int n_actions;
  in >> tok >> n_actions >> tok;
  c.catalog.truncated = tok == "truncated=1";
  for (int i = 0; i < n_actions; ++i) {
    int idx;
    std::string key;
    in >> tok >> idx >> key;
    CompositeAct act = act_from_key(key);
    c.catalog.actions.push_back(act);
    c.catalog.index_by_key[act.key()] = idx;
  }
  std::size_t n_episodes;
  in >> tok >> n_episodes;
  std::getline(in, line);
  EpisodeLog* cur = nullptr;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream iss(line);
    iss >> tok;
    if (tok == "E") {
      c.episodes.emplace_back();
      cur = &c.episodes.back();
      std::string field;
      while (iss >> field) {
        if (field.rfind("success=", 0) == 0) cur->success = field == "success=1";
        if (field.rfind("domains=", 0) == 0) {
          std::istringstream ds(field.substr(8));
          std::string d;
          while (std::getline(ds, d, ','))
            cur->goal.domains.emplace_back(d, DomainGoal{});
        }
      }
    } else if (tok == "T" && cur) {
      std::string shex, nhex, status;
      int action, done;
      double reward;
      iss >> shex >> action >> nhex >> done >> status >> reward;
      Turn t;
      t.state = from_hex(shex, c.state_dim);
      t.action = action;
      t.next_state = from_hex(nhex, c.state_dim);
      t.done = done == 1;
      t.status = status_from_char(status[0]);
      t.reward = reward;
      cur->turns.push_back(std::move(t));
      cur->turn_count = static_cast<int>(cur->turns.size());
    }
  }
  if (c.episodes.size() != n_episodes)
    throw SchemaError("corpus episode count mismatch");
  return c;
}

}  // namespace dialrl::dialenv
