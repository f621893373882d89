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

#include "gaex/gan.hpp"

#include <cmath>
#include <string>

#include "gaex/errors.hpp"

namespace gaex {
namespace {

using T = Tensor<Real>;

T one_minus(const T& x) { return Real(-1) * x + T::scalar(1.0); }

T clamped(const T& p) { return clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor); }

void require_finite(Real v, const char* what) {
  if (!std::isfinite(v)) throw NumericalFault(std::string(what) + " is not finite");
}

Real mean_log(const Vector& p) { return p.array().max(kProbabilityFloor).min(1.0 - kProbabilityFloor).log().mean(); }

Real mean_log_one_minus(const Vector& p) {
  return (1.0 - p.array().max(kProbabilityFloor).min(1.0 - kProbabilityFloor)).log().mean();
}

void check_batch(const Batch& b, Index cols, const char* what) {
  if (b.rows() == 0) throw ContractError(std::string(what) + " batch is empty");
  if (b.cols() != cols) {
    throw DimensionError(std::string(what) + " batch has " + std::to_string(b.cols()) + " columns, expected " +
                         std::to_string(cols));
  }
}

}  // namespace

GanPair make_gan(const GanConfig& config, std::mt19937_64& rng) {
  if (config.feature_dim <= 0 || config.noise_dim <= 0) throw ConfigError("GAN dimensions must be positive");
  MlpSpec g;
  g.input_dim = config.noise_dim;
  g.hidden = config.generator_hidden;
  g.output_dim = config.feature_dim;
  g.activation = Activation::kLeakyRelu;
  g.leaky_slope = config.leaky_slope;

  MlpSpec d;
  d.input_dim = config.feature_dim;
  d.hidden = config.discriminator_hidden;
  d.output_dim = 1;
  d.activation = Activation::kLeakyRelu;
  d.leaky_slope = config.leaky_slope;
  d.output = OutputKind::kSigmoid;

  GanPair gan;
  gan.generator = make_mlp<Real>(g, rng);
  gan.discriminator = make_mlp<Real>(d, rng);
  gan.noise_dim = config.noise_dim;
  gan.generator_opt = OptimizerState<Real>({OptimizerKind::kAdam, config.generator_lr});
  gan.discriminator_opt = OptimizerState<Real>({OptimizerKind::kAdam, config.discriminator_lr});
  return gan;
}

Batch sample_noise(Index count, Index dim, std::mt19937_64& rng) {
  std::normal_distribution<Real> normal(0.0, 1.0);
  Batch z(count, dim);
  for (Index r = 0; r < count; ++r)
    for (Index c = 0; c < dim; ++c) z(r, c) = normal(rng);
  return z;
}

Vector discriminate(const GanPair& gan, const Batch& features) {
  return evaluate_mlp(gan.discriminator, features).col(0);
}

Real discriminate(const GanPair& gan, const AbstractFeature& feature) {
  return discriminate(gan, Batch(feature.vector.transpose()))(0);
}

Batch generate(const GanPair& gan, const Batch& noise) {
  if (noise.cols() != gan.noise_dim) {
    throw DimensionError("noise has " + std::to_string(noise.cols()) + " columns, generator expects " +
                         std::to_string(gan.noise_dim));
  }
  return evaluate_mlp(gan.generator, noise);
}

Real discriminator_step(GanPair& gan, const Batch& real, const Batch& fake) {
  check_batch(real, gan.feature_dim(), "real");
  check_batch(fake, gan.feature_dim(), "fake");
  gan.discriminator.zero_grad();
  const T d_real = clamped(forward_mlp(gan.discriminator, T(real)));
  const T d_fake = clamped(forward_mlp(gan.discriminator, T(fake)));
  const T loss = -(mean(log(d_real)) + mean(log(one_minus(d_fake))));
  const Real value = loss.item();
  require_finite(value, "discriminator loss");
  loss.backward();
  const auto params = gan.discriminator.named_parameters();
  optimizer_step<Real>(gan.discriminator_opt, params);
  return value;
}

Real generator_step(GanPair& gan, const Batch& noise) {
  check_batch(noise, gan.noise_dim, "noise");
  gan.generator.zero_grad();
  const T fake = forward_mlp(gan.generator, T(noise));
  const T d_fake = clamped(forward_mlp(gan.discriminator, fake));
  const T loss = mean(log(one_minus(d_fake)));
  const Real value = loss.item();
  require_finite(value, "generator loss");
  loss.backward();
  const auto params = gan.generator.named_parameters();
  optimizer_step<Real>(gan.generator_opt, params);
  return value;
}

GanLosses gan_update(GanPair& gan, const Batch& real, const Batch& noise, const GanUpdateOptions& options) {
  check_batch(real, gan.feature_dim(), "real");
  check_batch(noise, gan.noise_dim, "noise");
  if (real.rows() != noise.rows()) throw ContractError("real and noise batches differ in size");
  if (options.discriminator_steps < 0 || options.generator_steps < 0) {
    throw ContractError("step counts must be non-negative");
  }

  GanLosses losses;
  {
    const Vector d_real = discriminate(gan, real);
    const Vector d_fake = discriminate(gan, generate(gan, noise));
    losses.d_real = d_real.mean();
    losses.d_fake = d_fake.mean();
    losses.d_loss = -(mean_log(d_real) + mean_log_one_minus(d_fake));
    losses.g_loss = mean_log_one_minus(d_fake);
    require_finite(losses.d_loss, "discriminator loss");
    require_finite(losses.g_loss, "generator loss");
  }

  for (int i = 0; i < options.discriminator_steps; ++i) discriminator_step(gan, real, generate(gan, noise));
  if (options.update_generator) {
    for (int i = 0; i < options.generator_steps; ++i) generator_step(gan, noise);
  }
  return losses;
}

Real intrinsic_reward(Real d_value, Real beta) {
  const Real miss = 1.0 - d_value;
  return beta * miss * miss;
}

Vector discounted_visitation(const Batch& policy, const ChainMdp& chain, Real gamma) {
  const int n = chain.length();
  if (policy.rows() != n || policy.cols() != ChainMdp::kNumActions) {
    throw ValidationError("policy must be " + std::to_string(n) + " x 2");
  }
  for (int s = 0; s < n; ++s) {
    const Real total = policy.row(s).sum();
    if ((policy.row(s).array() < 0).any() || std::abs(total - 1.0) > 1e-9) {
      throw ValidationError("policy row for s" + std::to_string(s + 1) + " is not a distribution");
    }
  }
  if (!(gamma > 0 && gamma < 1)) throw ValidationError("gamma must lie in (0, 1)");

  Vector p = Vector::Zero(n);
  p(chain.reset().index - 1) = 1.0;
  Vector rho = Vector::Zero(n);
  Real weight = 1.0 - gamma;
  for (int t = 0; t < chain.horizon(); ++t) {
    rho += weight * p;
    weight *= gamma;
    Vector next = Vector::Zero(n);
    for (int s = 0; s < n; ++s) {
      if (p(s) == 0) continue;
      for (int a = 0; a < ChainMdp::kNumActions; ++a) {
        const ChainStep step = chain.step(ChainState{s + 1, 0}, a);
        next(step.state.index - 1) += p(s) * policy(s, a);
      }
    }
    p = std::move(next);
  }
  return rho / rho.sum();
}

NoveltyOracleTable novelty_oracle(const Batch& policy, const ChainMdp& chain, Real gamma, const Vector& g) {
  if (g.size() != chain.length()) throw ValidationError("g must have one entry per chain state");
  if ((g.array() < 0).any()) throw ValidationError("g must be non-negative");
  NoveltyOracleTable table;
  table.rho = discounted_visitation(policy, chain, gamma);
  table.g = g;
  table.novelty.resize(g.size());
  for (Index i = 0; i < g.size(); ++i) {
    const Real denom = table.rho(i) + g(i);
    // No real and no fake mass: nothing has been seen there.
    table.novelty(i) = denom > 0 ? 1.0 - table.rho(i) / denom : 1.0;
  }
  return table;
}

}  // namespace gaex
