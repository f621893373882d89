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

// Command-line front end: train, ablate, plot, oracle.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>

#include "CLI11.hpp"

#include "gaex/charts.hpp"
#include "gaex/config.hpp"
#include "gaex/envs.hpp"
#include "gaex/errors.hpp"
#include "gaex/gan.hpp"
#include "gaex/metrics.hpp"
#include "gaex/training.hpp"

namespace fs = std::filesystem;

namespace {

gaex::EpisodeCallback progress_printer(int every) {
  if (every <= 0) return {};
  auto mutex = std::make_shared<std::mutex>();
  return [every, mutex](const gaex::MetricsRecord& r) {
    if (r.episode % every != 0) return;
    std::lock_guard lock(*mutex);
    std::fprintf(stderr, "[%s seed=%llu] episode %d  return %.3f  intrinsic %.3f  max_state %d  eps %.3f\n",
                 r.run.c_str(), static_cast<unsigned long long>(r.seed), r.episode, r.ext_return, r.int_return,
                 r.max_state, r.epsilon);
  };
}

void write_outputs(const std::vector<gaex::MetricsRecord>& metrics, const fs::path& out) {
  fs::create_directories(out);
  gaex::write_metrics_csv(metrics, out / "metrics.csv");
  gaex::emit_charts(metrics, out / "charts");
  std::cout << "wrote " << (out / "metrics.csv").string() << " and charts in " << (out / "charts").string() << '\n';
}

void print_summary(const gaex::RunResult& run) {
  for (const auto& s : run.seeds) {
    const auto& m = s.metrics;
    const std::size_t tail = std::min<std::size_t>(100, m.size());
    double ret = 0;
    int peak = 0;
    for (std::size_t i = m.size() - tail; i < m.size(); ++i) {
      ret += m[i].ext_return;
      peak = std::max(peak, m[i].max_state);
    }
    std::printf("%s seed %llu: final-%zu mean return %.4f, max state %d, %lld DQN / %lld GAN updates\n",
                run.config.name.c_str(), static_cast<unsigned long long>(s.seed), tail, ret / tail, peak,
                static_cast<long long>(s.dqn_updates), static_cast<long long>(s.gan_updates));
  }
}

int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out,
              int workers, int progress) {
  gaex::RunConfig config = gaex::load_config(config_path);
  if (seed) config.seeds = {*seed};
  if (!out.empty()) config.output_dir = out;
  if (config.output_dir.empty()) config.output_dir = "runs/" + config.name;
  fs::create_directories(config.output_dir);
  gaex::save_config(config, fs::path(config.output_dir) / "config.json");
  const auto run = gaex::run_training(config, {workers, progress_printer(progress)});
  print_summary(run);
  write_outputs(run.metrics(), config.output_dir);
  return 0;
}

int cmd_ablate(const std::string& config_path, const std::string& grid_path, const std::string& out, int workers,
               int progress) {
  gaex::RunConfig base = gaex::load_config(config_path);
  if (!out.empty()) base.output_dir = out;
  if (base.output_dir.empty()) base.output_dir = "runs/" + base.name + "-ablation";
  const auto variants = gaex::load_grid(grid_path);
  const auto result = gaex::run_ablation(base, variants, {workers, progress_printer(progress)});
  for (const auto& v : result.variants) {
    print_summary(v);
    write_outputs(v.metrics(), v.config.output_dir);
  }
  write_outputs(result.metrics(), base.output_dir);
  return 0;
}

int cmd_plot(const std::string& in, const std::string& out) {
  std::vector<gaex::MetricsRecord> all;
  std::vector<fs::path> files;
  if (fs::is_regular_file(in)) {
    files.push_back(in);
  } else {
    for (const auto& entry : fs::recursive_directory_iterator(in)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto m = gaex::read_metrics_csv(f);
    all.insert(all.end(), m.begin(), m.end());
  }
  if (all.empty()) throw gaex::Error("no metrics CSV files under " + in);
  for (const auto& p : gaex::emit_charts(all, out)) std::cout << p.string() << '\n';
  return 0;
}

int cmd_oracle(const std::string& env, int n, double gamma, double right_prob) {
  if (env != "chain") throw gaex::ConfigError("oracle supports --env chain only");
  const gaex::ChainMdp chain(n);
  std::printf("ORACLE_OPT(%d) = %.10g\n", n, gaex::chain_optimal_return(n));
  gaex::Batch policy(n, 2);
  policy.col(0).setConstant(1.0 - right_prob);
  policy.col(1).setConstant(right_prob);
  const gaex::Vector g = gaex::Vector::Constant(n, 1.0 / n);
  const auto table = gaex::novelty_oracle(policy, chain, gamma, g);
  std::printf("policy P(right)=%.4g, gamma=%.4g, g uniform\n", right_prob, gamma);
  std::printf("%6s %14s %14s %14s\n", "state", "rho", "g", "novelty");
  for (int i = 0; i < n; ++i) {
    std::printf("%6d %14.8g %14.8g %14.8g\n", i + 1, table.rho(i), table.g(i), table.novelty(i));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generative adversarial exploration toolkit"};
  app.require_subcommand(1);

  std::string config_path, grid_path, out, in, env = "chain";
  std::optional<std::uint64_t> seed;
  int workers = 1;
  int progress = 0;
  int n = 10;
  double gamma = 0.99;
  double right_prob = 0.5;

  auto* train = app.add_subcommand("train", "Run training for every seed of a config");
  train->add_option("--config", config_path, "Config JSON")->required()->check(CLI::ExistingFile);
  train->add_option("--seed", seed, "Run only this seed");
  train->add_option("--out", out, "Output directory");
  train->add_option("--workers", workers, "Parallel seed runs")->check(CLI::PositiveNumber);
  train->add_option("--progress", progress, "Print a line every N episodes");

  auto* ablate = app.add_subcommand("ablate", "Run config variants over shared seeds");
  ablate->add_option("--config", config_path, "Base config JSON")->required()->check(CLI::ExistingFile);
  ablate->add_option("--grid", grid_path, "Variant grid JSON")->required()->check(CLI::ExistingFile);
  ablate->add_option("--out", out, "Output directory");
  ablate->add_option("--workers", workers, "Parallel runs")->check(CLI::PositiveNumber);
  ablate->add_option("--progress", progress, "Print a line every N episodes");

  auto* plot = app.add_subcommand("plot", "Render charts from metrics CSV files");
  plot->add_option("--in", in, "Metrics CSV or directory")->required()->check(CLI::ExistingPath);
  plot->add_option("--out", out, "Chart directory")->required();

  auto* oracle = app.add_subcommand("oracle", "Print the chain optimum and visitation/novelty tables");
  oracle->add_option("--env", env, "Environment")->check(CLI::IsMember({"chain"}));
  oracle->add_option("--N", n, "Chain length")->required();
  oracle->add_option("--gamma", gamma, "Discount for the visitation table");
  oracle->add_option("--right-prob", right_prob, "Stationary P(right) of the tabulated policy")
      ->check(CLI::Range(0.0, 1.0));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*train) return cmd_train(config_path, seed, out, workers, progress);
    if (*ablate) return cmd_ablate(config_path, grid_path, out, workers, progress);
    if (*plot) return cmd_plot(in, out);
    if (*oracle) return cmd_oracle(env, n, gamma, right_prob);
  } catch (const gaex::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
