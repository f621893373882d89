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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gaex/charts.hpp"
#include "gaex/config.hpp"
#include "gaex/metrics.hpp"
#include "gaex/snapshot.hpp"
#include "gaex/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Small enough to run many times per test.
gaex::RunConfig tiny_chain(gaex::Mode mode, int episodes = 30) {
  gaex::RunConfig c = gaex::default_config(gaex::EnvKind::kChain);
  c.name = "tiny";
  c.chain_length = 6;
  c.mode = mode;
  c.episodes = episodes;
  c.agent.hidden = {8, 8};
  c.agent.batch_size = 16;
  c.agent.replay_capacity = 500;
  c.agent.replay_start = 40;
  c.agent.n_step = 3;
  c.agent.target_sync = 5;
  c.agent.epsilon_decay = 0.01;
  c.gan.generator_hidden = {8};
  c.gan.discriminator_hidden = {8};
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gaex_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

bool same_trajectory(const gaex::MetricsRecord& a, const gaex::MetricsRecord& b) {
  return a.episode == b.episode && a.steps == b.steps && a.ext_return == b.ext_return &&
         a.max_state == b.max_state && a.epsilon == b.epsilon &&
         (a.td_loss == b.td_loss || (std::isnan(a.td_loss) && std::isnan(b.td_loss)));
}

// Balanced-tag check: every opened element is closed in order.
bool balanced_xml(const std::string& text) {
  std::vector<std::string> open;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const std::size_t end = text.find('>', pos);
    if (end == std::string::npos) return false;
    const std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (tag.back() == '/') continue;
    const std::string name = tag.substr(tag[0] == '/' ? 1 : 0, tag.find_first_of(" \t\n/", 1) - (tag[0] == '/' ? 1 : 0));
    if (tag[0] == '/') {
      if (open.empty() || open.back() != name) return false;
      open.pop_back();
    } else {
      open.push_back(name);
    }
  }
  return open.empty();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("chain defaults") {
  const auto c = gaex::default_config(gaex::EnvKind::kChain);
  CHECK(c.agent.learning_rate == 0.005);
  CHECK(c.agent.batch_size == 300);
  CHECK(c.agent.replay_capacity == 10000);
  CHECK(c.agent.replay_start == 10000);
  CHECK(c.agent.target_sync == 50);
  CHECK(c.agent.gamma == 0.99);
  CHECK(c.agent.epsilon_decay == 0.0005);
  CHECK(c.agent.n_step == 10);
  CHECK(c.agent.hidden == std::vector<gaex::Index>{64, 128, 256, 128});
  CHECK(c.agent.optimizer == gaex::OptimizerKind::kAdam);
  CHECK_FALSE(c.agent.gradient_clip.has_value());
  CHECK(c.agent.train_unit == gaex::ScheduleUnit::kEpisodes);
  CHECK(c.agent.k1 == 2);
  CHECK(c.beta == 1.0);
  CHECK(c.gan.k2 == 1);
  CHECK(c.gan.generator_lr == 0.001);
  CHECK(c.gan.leaky_slope == 0.01);
  CHECK(c.gan.generator_hidden == std::vector<gaex::Index>{50, 50});
}

TEST_CASE("pixel defaults") {
  const auto c = gaex::default_config(gaex::EnvKind::kPixelGrid);
  CHECK(c.agent.optimizer == gaex::OptimizerKind::kRmsProp);
  CHECK(c.agent.learning_rate == 0.00025);
  CHECK(c.agent.batch_size == 32);
  CHECK(c.agent.random_n_step);
  CHECK(c.agent.gradient_clip == std::make_pair(-1.0, 1.0));
  CHECK(c.agent.train_unit == gaex::ScheduleUnit::kSteps);
  CHECK(c.agent.k1 == 4);
  CHECK(c.gan.k2 == 25);
  CHECK(c.gan.noise_dim == 128);
  CHECK(c.beta == 10.0);
}

TEST_CASE("config validation names the offending field") {
  auto c = gaex::default_config(gaex::EnvKind::kChain);
  c.gan.k2 = 0;
  CHECK_THROWS_WITH_AS(gaex::validate(c), doctest::Contains("k2"), gaex::ConfigError);
  c = gaex::default_config(gaex::EnvKind::kChain);
  c.agent.batch_size = 0;
  CHECK_THROWS_WITH_AS(gaex::validate(c), doctest::Contains("batch_size"), gaex::ConfigError);
  c = gaex::default_config(gaex::EnvKind::kChain);
  c.beta = -1;
  CHECK_THROWS_AS(gaex::validate(c), gaex::ConfigError);
  c = gaex::default_config(gaex::EnvKind::kChain);
  c.seeds.clear();
  CHECK_THROWS_AS(gaex::validate(c), gaex::ConfigError);
}

TEST_CASE("config JSON round trip and strict keys") {
  auto c = tiny_chain(gaex::Mode::kDqnD);
  c.agent.gradient_clip = std::make_pair(-2.0, 2.0);
  c.agent.epsilon_stage_floor = 0.1;
  c.seeds = {3, 4};
  CHECK(gaex::config_from_json(gaex::config_to_json(c)) == c);

  const auto partial = gaex::config_from_json(json{{"mode", "dqn+count"}, {"chain_length", 50}});
  CHECK(partial.mode == gaex::Mode::kCount);
  CHECK(partial.chain_length == 50);
  CHECK(partial.agent.batch_size == 300);

  CHECK_THROWS_AS(gaex::config_from_json(json{{"N", 10}}), gaex::ConfigError);
  CHECK_THROWS_AS(gaex::config_from_json(json{{"agent", {{"lr", 0.1}}}}), gaex::ConfigError);
  CHECK_THROWS_AS(gaex::config_from_json(json{{"mode", "ppo"}}), gaex::ConfigError);
  CHECK_THROWS_AS(gaex::config_from_json(json{{"gan", {{"k2", 0}}}}), gaex::ConfigError);

  const fs::path dir = scratch("config");
  gaex::save_config(c, dir / "c.json");
  CHECK(gaex::load_config(dir / "c.json") == c);
  auto moved = c;
  moved.output_dir = "/elsewhere";
  CHECK(gaex::config_hash(moved) == gaex::config_hash(c));
  moved.beta = 2.0;
  CHECK(gaex::config_hash(moved) != gaex::config_hash(c));
}

TEST_CASE("update counts follow K1 and K2 on a step schedule") {
  auto c = tiny_chain(gaex::Mode::kGaex, 20);
  c.chain_length = 5;
  c.agent.train_unit = gaex::ScheduleUnit::kSteps;
  c.agent.k1 = 4;
  c.agent.replay_start = 30;
  c.gan.k2 = 3;
  const auto run = gaex::run_seed(c, 0);
  CHECK(run.env_steps == 20 * 14);
  std::int64_t expected = 0;
  for (std::int64_t t = 1; t <= run.env_steps; ++t) expected += (t % 4 == 0 && t >= 30);
  CHECK(run.dqn_updates == expected);
  CHECK(run.gan_updates == expected / 3);
}

TEST_CASE("update counts follow K1 on an episode schedule") {
  auto c = tiny_chain(gaex::Mode::kGaex, 25);
  c.agent.k1 = 2;
  c.gan.k2 = 2;
  const auto run = gaex::run_seed(c, 1);
  // 15 steps per episode; replay holds 40 after the third episode.
  std::int64_t expected = 0;
  for (int e = 1; e <= 25; ++e) expected += (e % 2 == 0 && e * 15 >= 40);
  CHECK(run.dqn_updates == expected);
  CHECK(run.gan_updates == expected / 2);
}

TEST_CASE("DQN+D keeps the generator at its initial values") {
  auto c = tiny_chain(gaex::Mode::kDqnD, 20);
  const auto run = gaex::run_seed(c, 2);
  auto with_gan = tiny_chain(gaex::Mode::kGaex, 20);
  const auto other = gaex::run_seed(with_gan, 2);
  REQUIRE(run.gan.has_value());
  REQUIRE(other.gan.has_value());
  CHECK(run.gan->generator_opt.step == 0);
  CHECK(other.gan->generator_opt.step > 0);
  CHECK_FALSE(gaex::values_equal(run.gan->generator, other.gan->generator));
  CHECK(run.gan->discriminator_opt.step > 0);
}

TEST_CASE("runs are deterministic per seed") {
  const auto c = tiny_chain(gaex::Mode::kGaex);
  const auto a = gaex::run_seed(c, 7);
  const auto b = gaex::run_seed(c, 7);
  REQUIRE(a.metrics.size() == b.metrics.size());
  for (std::size_t i = 0; i < a.metrics.size(); ++i) CHECK(gaex::same_record(a.metrics[i], b.metrics[i]));
  CHECK(gaex::values_equal(a.q_network, b.q_network));
  const auto other = gaex::run_seed(c, 8);
  CHECK_FALSE(gaex::values_equal(a.q_network, other.q_network));
}

TEST_CASE("beta zero reduces exploration runs to plain DQN") {
  auto gaex_cfg = tiny_chain(gaex::Mode::kGaex, 40);
  gaex_cfg.beta = 0.0;
  const auto dqn = gaex::run_seed(tiny_chain(gaex::Mode::kDqn, 40), 5);
  const auto zero = gaex::run_seed(gaex_cfg, 5);
  REQUIRE(dqn.metrics.size() == zero.metrics.size());
  for (std::size_t i = 0; i < dqn.metrics.size(); ++i) CHECK(same_trajectory(dqn.metrics[i], zero.metrics[i]));
  CHECK(gaex::values_equal(dqn.q_network, zero.q_network));
  CHECK(zero.gan_updates > 0);
}

TEST_CASE("count baseline pays the optimistic bonus") {
  auto c = tiny_chain(gaex::Mode::kCount, 5);
  c.beta = 0.5;
  const auto run = gaex::run_seed(c, 0);
  for (const auto& m : run.metrics) CHECK(m.int_return > 0.0);
  CHECK_FALSE(run.gan.has_value());
}

TEST_CASE("metrics CSV round trip") {
  const auto run = gaex::run_seed(tiny_chain(gaex::Mode::kGaex, 5), 0);
  const fs::path dir = scratch("csv");
  gaex::write_metrics_csv(run.metrics, dir / "metrics.csv");
  std::ifstream in(dir / "metrics.csv");
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == gaex::kMetricsHeader);
  const auto back = gaex::read_metrics_csv(dir / "metrics.csv");
  REQUIRE(back.size() == run.metrics.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(gaex::same_record(back[i], run.metrics[i]));
  // Updates start after replay warm-up, so early losses are missing.
  CHECK(std::isnan(back[0].td_loss));
}

TEST_CASE("charts are well-formed SVG") {
  auto c = tiny_chain(gaex::Mode::kGaex, 12);
  c.seeds = {0, 1};
  const auto result = gaex::run_training(c);
  const fs::path dir = scratch("charts");
  const auto paths = gaex::emit_charts(result.metrics(), dir);
  CHECK(paths.size() == 6);
  for (const auto& p : paths) {
    const std::string svg = slurp(p);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(balanced_xml(svg));
  }
  const auto series = gaex::aggregate_metric(result.metrics(), "ext_return");
  REQUIRE(series.size() == 1);
  for (std::size_t i = 0; i < series[0].x.size(); ++i) {
    CHECK(series[0].lo[i] <= series[0].mean[i]);
    CHECK(series[0].mean[i] <= series[0].hi[i]);
  }
  CHECK(balanced_xml("<svg><g><line/></g></svg>"));
  CHECK_FALSE(balanced_xml("<svg><g></svg>"));
}

TEST_CASE("snapshots restore parameters exactly") {
  auto c = tiny_chain(gaex::Mode::kGaex, 10);
  const fs::path dir = scratch("snap");
  c.output_dir = dir.string();
  const auto result = gaex::run_training(c);
  const auto snap = gaex::load_snapshot(dir / "tiny-seed0.snapshot");
  CHECK(snap.config_hash == gaex::config_hash(c));
  REQUIRE(snap.networks.size() == 3);
  CHECK(snap.networks[0].first == "q_online");
  CHECK(gaex::values_equal(snap.networks[0].second, result.seeds[0].q_network));
  CHECK(gaex::values_equal(snap.networks[1].second, result.seeds[0].gan->generator));
  CHECK(gaex::values_equal(snap.networks[2].second, result.seeds[0].gan->discriminator));
  std::ofstream(dir / "bad.snapshot") << "not a snapshot";
  CHECK_THROWS_AS(gaex::load_snapshot(dir / "bad.snapshot"), gaex::Error);
}

TEST_CASE("ablation variants") {
  auto base = tiny_chain(gaex::Mode::kGaex, 8);
  SUBCASE("conflicting output paths are rejected") {
    const std::vector<gaex::Variant> v{{"a", json{{"output_dir", "/tmp/same"}}}, {"b", json{{"output_dir", "/tmp/same"}}}};
    CHECK_THROWS_AS(gaex::resolve_variants(base, v), gaex::ConfigError);
  }
  SUBCASE("duplicate names and seed overrides are rejected") {
    CHECK_THROWS_AS(gaex::resolve_variants(base, {{"a", json::object()}, {"a", json::object()}}), gaex::ConfigError);
    CHECK_THROWS_AS(gaex::resolve_variants(base, {{"a", json::object()}, {"b", json{{"seeds", {1}}}}}),
                    gaex::ConfigError);
    CHECK_THROWS_AS(gaex::resolve_variants(base, {{"a", json::object()}}), gaex::ConfigError);
  }
  SUBCASE("identical variants give identical metrics") {
    base.seeds = {0, 1};
    const auto result = gaex::run_ablation(base, {{"x", json::object()}, {"y", json::object()}});
    const auto& x = result["x"].metrics();
    const auto& y = result["y"].metrics();
    REQUIRE(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto renamed = y[i];
      renamed.run = x[i].run;
      CHECK(gaex::same_record(x[i], renamed));
    }
    CHECK(result["x"].config.name == "x");
  }
  SUBCASE("overrides are applied") {
    const auto configs = gaex::resolve_variants(base, {{"k1", json{{"gan", {{"k2", 1}}}}},
                                                       {"k25", json{{"gan", {{"k2", 25}}}}}});
    CHECK(configs[0].gan.k2 == 1);
    CHECK(configs[1].gan.k2 == 25);
    CHECK(configs[1].episodes == base.episodes);
  }
}

TEST_CASE("pixel environment trains end to end") {
  auto c = gaex::default_config(gaex::EnvKind::kPixelGrid);
  c.name = "pix";
  c.episodes = 2;
  c.agent.hidden = {16};
  c.agent.replay_capacity = 2000;
  c.agent.replay_start = 100;
  c.agent.target_sync = 20;
  c.gan.generator_hidden = {16};
  c.gan.discriminator_hidden = {16};
  c.gan.noise_dim = 8;
  c.gan.k2 = 5;
  const auto run = gaex::run_seed(c, 0);
  REQUIRE(run.metrics.size() == 2);
  CHECK(run.dqn_updates > 0);
  CHECK(run.gan_updates > 0);
  for (const auto& m : run.metrics) {
    CHECK(std::isfinite(m.int_return));
    CHECK(m.int_return > 0.0);
    CHECK(m.steps > 0);
  }
  CHECK(run.q_network.input_dim() == 148);
}
