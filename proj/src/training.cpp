// Copyright 2026 The GAEX Toolkit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gaex/training.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include "gaex/abstraction.hpp"
#include "gaex/errors.hpp"
#include "gaex/snapshot.hpp"

namespace gaex {

ChainEnvironment::ChainEnvironment(int length)
    : chain_(length), state_(chain_.reset()), table_(Batch::Identity(length, length)) {}

Vector ChainEnvironment::reset(std::uint64_t seed) {
  state_ = chain_.reset(seed);
  return chain_.encode(state_);
}

Environment::Step ChainEnvironment::step(int action) {
  const ChainStep s = chain_.step(state_, action);
  state_ = s.state;
  return {chain_.encode(state_), s.reward, s.done};
}

Vector PixelGridEnvironment::reset(std::uint64_t seed) { return abstract_pixels(grid_.reset(seed)).vector; }

Environment::Step PixelGridEnvironment::step(int action) {
  PixelGrid::Step s = grid_.step(action);
  return {abstract_pixels(s.observation).vector, s.reward, s.done};
}

Index PixelGridEnvironment::observation_dim() const { return kPixelFeatureDim; }

std::unique_ptr<Environment> make_environment(const RunConfig& config) {
  if (config.env == EnvKind::kChain) return std::make_unique<ChainEnvironment>(config.chain_length);
  return std::make_unique<PixelGridEnvironment>();
}

namespace {

constexpr Real kNaN = std::numeric_limits<Real>::quiet_NaN();

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), id};
  return std::mt19937_64(seq);
}

bool uses_gan(Mode m) { return m == Mode::kDqnD || m == Mode::kGaex; }

// Network outputs per enumerable observation, recomputed lazily after the
// network changes.
class OutputCache {
 public:
  OutputCache(const Environment& env, const NetworkParams<Real>& net) : env_(env), net_(net) {}

  bool available() const { return env_.observation_table() != nullptr; }
  void invalidate() { fresh_ = false; }
  const Batch& table() {
    if (!fresh_) {
      values_ = env_.one_hot() ? evaluate_mlp_one_hot(net_) : evaluate_mlp(net_, *env_.observation_table());
      fresh_ = true;
    }
    return values_;
  }

 private:
  const Environment& env_;
  const NetworkParams<Real>& net_;
  Batch values_;
  bool fresh_ = false;
};

// Intrinsic reward of a next state under the current mode.
class BonusSource {
 public:
  BonusSource(const RunConfig& config, const Environment& env, const GanPair* gan, const VisitCounter& counter)
      : mode_(config.mode), beta_(config.beta), env_(env), gan_(gan), counter_(counter) {
    if (gan_) cache_.emplace(env, gan_->discriminator);
  }

  void invalidate() {
    if (cache_) cache_->invalidate();
  }

  Real one(const Vector& next_state) {
    switch (mode_) {
      case Mode::kDqn: return 0.0;
      case Mode::kCount: return count_bonus(counter_, env_.observation_id(next_state), beta_);
      case Mode::kDqnD:
      case Mode::kGaex: {
        if (cache_->available()) return intrinsic_reward(cache_->table()(env_.observation_id(next_state), 0), beta_);
        return intrinsic_reward(discriminate(*gan_, Batch(next_state.transpose()))(0), beta_);
      }
    }
    return 0.0;
  }

  std::vector<Real> many(const std::vector<const Vector*>& next_states) {
    std::vector<Real> out(next_states.size(), 0.0);
    if (mode_ == Mode::kDqn) return out;
    if (mode_ == Mode::kCount || cache_->available()) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = one(*next_states[i]);
      return out;
    }
    Batch x(static_cast<Index>(next_states.size()), next_states.front()->size());
    for (std::size_t i = 0; i < out.size(); ++i) x.row(static_cast<Index>(i)) = next_states[i]->transpose();
    const Vector d = discriminate(*gan_, x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = intrinsic_reward(d(static_cast<Index>(i)), beta_);
    return out;
  }

 private:
  Mode mode_;
  Real beta_;
  const Environment& env_;
  const GanPair* gan_;
  const VisitCounter& counter_;
  std::optional<OutputCache> cache_;
};

}  // namespace

SeedRun run_seed(const RunConfig& config, std::uint64_t seed, const EpisodeCallback& on_episode) {
  validate(config);
  auto env = make_environment(config);
  if (config.mode == Mode::kCount && !env->observation_table()) {
    throw ConfigError("mode dqn+count needs an environment with enumerable states");
  }
  const auto& a = config.agent;

  auto init_rng = stream(seed, 1);
  auto act_rng = stream(seed, 2);
  auto replay_rng = stream(seed, 3);
  auto gan_init_rng = stream(seed, 4);
  auto gan_rng = stream(seed, 5);

  QLearner learner(env->observation_dim(), env->num_actions(), learner_config(config), init_rng);
  std::optional<GanPair> gan;
  if (uses_gan(config.mode)) {
    GanConfig gc;
    gc.feature_dim = env->observation_dim();
    gc.noise_dim = config.gan.noise_dim > 0 ? config.gan.noise_dim : env->observation_dim();
    gc.generator_hidden = config.gan.generator_hidden;
    gc.discriminator_hidden = config.gan.discriminator_hidden;
    gc.leaky_slope = config.gan.leaky_slope;
    gc.generator_lr = config.gan.generator_lr;
    gc.discriminator_lr = config.gan.discriminator_lr;
    gan = make_gan(gc, gan_init_rng);
  }
  const GanUpdateOptions gan_options{config.mode == Mode::kGaex, config.gan.discriminator_steps,
                                     config.gan.generator_steps};

  ReplayBuffer buffer(static_cast<std::size_t>(a.replay_capacity));
  VisitCounter counter;
  BonusSource bonus(config, *env, gan ? &*gan : nullptr, counter);
  OutputCache q_cache(*env, learner.online());
  const EpsilonSchedule schedule = epsilon_schedule(config);
  std::uniform_int_distribution<int> pick_n(1, a.n_step);

  SeedRun run;
  run.seed = seed;
  std::int64_t epsilon_steps = 0;
  Real last_td = kNaN;
  GanLosses last_gan{kNaN, kNaN, kNaN, kNaN};

  auto current_epsilon = [&] {
    return schedule.value(a.epsilon_clock == EpsilonClock::kEnvSteps ? epsilon_steps : run.dqn_updates);
  };

  auto train = [&] {
    const auto picks = buffer.sample_indices(static_cast<std::size_t>(a.batch_size), replay_rng);
    std::vector<int> lengths(picks.size());
    std::vector<const Vector*> next_states;
    for (std::size_t i = 0; i < picks.size(); ++i) {
      const int n = a.random_n_step ? pick_n(replay_rng) : a.n_step;
      lengths[i] = buffer.window_length(picks[i], n);
      for (int k = 0; k < lengths[i]; ++k) next_states.push_back(&buffer.at(picks[i] + k).next_state);
    }
    const std::vector<Real> bonuses = bonus.many(next_states);

    std::vector<NStepSample> samples(picks.size());
    Batch states(static_cast<Index>(picks.size()), env->observation_dim());
    std::vector<int> actions(picks.size());
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < picks.size(); ++i) {
      const Transition& first = buffer.at(picks[i]);
      states.row(static_cast<Index>(i)) = first.state.transpose();
      actions[i] = first.action;
      auto& s = samples[i];
      for (int k = 0; k < lengths[i]; ++k) {
        s.rewards.push_back(buffer.at(picks[i] + k).extrinsic_reward + bonuses[cursor++]);
      }
      const Transition& last = buffer.at(picks[i] + lengths[i] - 1);
      s.bootstrap_state = last.next_state;
      s.terminal = last.done;
    }
    const Vector targets = n_step_targets(samples, learner);
    last_td = learner.update(states, actions, targets);
    q_cache.invalidate();
    ++run.dqn_updates;

    if (gan && run.dqn_updates % config.gan.k2 == 0) {
      const auto real_picks = buffer.sample_indices(static_cast<std::size_t>(a.batch_size), gan_rng);
      Batch real(static_cast<Index>(real_picks.size()), env->observation_dim());
      for (std::size_t i = 0; i < real_picks.size(); ++i) {
        real.row(static_cast<Index>(i)) = buffer.at(real_picks[i]).next_state.transpose();
      }
      const Batch noise = sample_noise(real.rows(), gan->noise_dim, gan_rng);
      last_gan = gan_update(*gan, real, noise, gan_options);
      bonus.invalidate();
      ++run.gan_updates;
    }
  };

  for (int episode = 1; episode <= config.episodes; ++episode) {
    Vector obs = env->reset(seed * 1000003ULL + static_cast<std::uint64_t>(episode));
    MetricsRecord rec;
    rec.run = config.name;
    rec.seed = seed;
    rec.episode = episode;
    rec.max_state = env->progress();
    bool done = false;
    while (!done) {
      const Real eps = current_epsilon();
      int action = 0;
      if (q_cache.available()) {
        action = epsilon_greedy(q_cache.table().row(env->current_id()).transpose(), eps, act_rng);
      } else {
        action = learner.select_action(obs, eps, act_rng);
      }
      Environment::Step step = env->step(action);
      const Real reward = a.clip_extrinsic ? std::clamp(step.reward, -1.0, 1.0) : step.reward;
      if (config.mode == Mode::kCount) counter.visit(env->observation_id(step.observation));
      rec.ext_return += step.reward;
      rec.int_return += bonus.one(step.observation);
      rec.max_state = std::max(rec.max_state, env->progress());
      done = step.done;
      buffer.store(Transition{std::move(obs), action, reward, step.observation, step.done});
      obs = std::move(step.observation);
      ++run.env_steps;

      const bool warm = buffer.size() >= static_cast<std::size_t>(a.replay_start);
      if (warm) ++epsilon_steps;
      if (a.train_unit == ScheduleUnit::kSteps && warm && run.env_steps % a.k1 == 0) train();
    }
    if (a.train_unit == ScheduleUnit::kEpisodes && episode % a.k1 == 0 &&
        buffer.size() >= static_cast<std::size_t>(a.replay_start)) {
      train();
    }
    rec.steps = run.env_steps;
    rec.d_real = last_gan.d_real;
    rec.d_fake = last_gan.d_fake;
    rec.d_loss = last_gan.d_loss;
    rec.g_loss = last_gan.g_loss;
    rec.td_loss = last_td;
    rec.epsilon = current_epsilon();
    if (on_episode) on_episode(rec);
    run.metrics.push_back(std::move(rec));
  }
  run.q_network = learner.online().clone();
  run.gan = std::move(gan);
  return run;
}

namespace {

void persist(const RunConfig& config, const SeedRun& run) {
  if (config.output_dir.empty()) return;
  std::filesystem::create_directories(config.output_dir);
  Snapshot snap;
  snap.config_hash = config_hash(config);
  snap.networks.emplace_back("q_online", run.q_network);
  if (run.gan) {
    snap.networks.emplace_back("generator", run.gan->generator);
    snap.networks.emplace_back("discriminator", run.gan->discriminator);
  }
  save_snapshot(snap, std::filesystem::path(config.output_dir) /
                          (config.name + "-seed" + std::to_string(run.seed) + ".snapshot"));
}

struct Job {
  std::size_t config_index;
  std::size_t seed_index;
};

// Runs every (config, seed) pair; results land in fixed slots so the output
// does not depend on scheduling.
std::vector<RunResult> run_jobs(const std::vector<RunConfig>& configs, const TrainingOptions& options) {
  std::vector<RunResult> results(configs.size());
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    validate(configs[c]);
    results[c].config = configs[c];
    results[c].seeds.resize(configs[c].seeds.size());
    for (std::size_t s = 0; s < configs[c].seeds.size(); ++s) jobs.push_back({c, s});
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const auto& cfg = configs[jobs[j].config_index];
        SeedRun run = run_seed(cfg, cfg.seeds[jobs[j].seed_index], options.on_episode);
        persist(cfg, run);
        results[jobs[j].config_index].seeds[jobs[j].seed_index] = std::move(run);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(jobs.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace

std::vector<MetricsRecord> RunResult::metrics() const {
  std::vector<MetricsRecord> out;
  for (const auto& s : seeds) out.insert(out.end(), s.metrics.begin(), s.metrics.end());
  return out;
}

RunResult run_training(const RunConfig& config, const TrainingOptions& options) {
  return std::move(run_jobs({config}, options).front());
}

std::vector<MetricsRecord> AblationResult::metrics() const {
  std::vector<MetricsRecord> out;
  for (const auto& v : variants) {
    auto m = v.metrics();
    out.insert(out.end(), m.begin(), m.end());
  }
  return out;
}

const RunResult& AblationResult::operator[](const std::string& name) const {
  for (const auto& v : variants)
    if (v.config.name == name) return v;
  throw ContractError("no ablation variant named '" + name + "'");
}

std::vector<RunConfig> resolve_variants(const RunConfig& base, const std::vector<Variant>& variants) {
  if (variants.size() < 2) throw ConfigError("an ablation needs at least two variants");
  std::vector<RunConfig> configs;
  std::set<std::string> names;
  std::set<std::string> outputs;
  for (const auto& v : variants) {
    if (v.name.empty()) throw ConfigError("ablation variant without a name");
    if (!names.insert(v.name).second) throw ConfigError("duplicate ablation variant '" + v.name + "'");
    if (!v.overrides.is_object()) throw ConfigError("overrides of '" + v.name + "' must be an object");
    if (v.overrides.contains("seeds")) throw ConfigError("variant '" + v.name + "' may not override the shared seeds");
    nlohmann::json doc = config_to_json(base);
    doc["name"] = v.name;
    if (!base.output_dir.empty()) doc["output_dir"] = (std::filesystem::path(base.output_dir) / v.name).string();
    doc.merge_patch(v.overrides);
    RunConfig cfg = config_from_json(doc);
    if (!cfg.output_dir.empty() && !outputs.insert(cfg.output_dir).second) {
      throw ConfigError("variants share the output path " + cfg.output_dir);
    }
    configs.push_back(std::move(cfg));
  }
  return configs;
}

AblationResult run_ablation(const RunConfig& base, const std::vector<Variant>& variants,
                            const TrainingOptions& options) {
  AblationResult result;
  result.variants = run_jobs(resolve_variants(base, variants), options);
  return result;
}

std::vector<Variant> load_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("cannot parse grid " + path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("variants") || !doc.at("variants").is_array()) {
    throw ConfigError("grid must be an object with a 'variants' array");
  }
  std::vector<Variant> out;
  for (const auto& item : doc.at("variants")) {
    if (!item.is_object() || !item.contains("name") || !item.at("name").is_string()) {
      throw ConfigError("every grid variant needs a string 'name'");
    }
    out.push_back({item.at("name").get<std::string>(), item.value("overrides", nlohmann::json::object())});
  }
  return out;
}

}  // namespace gaex
