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

// Generative adversarial exploration: a generator producing fake abstract
// states, a discriminator scoring how "visited" a state looks, the bonus map
// f(D) = beta (1 - D)^2, and an exact visitation/novelty table for the chain.

#ifndef GAEX_GAN_HPP_
#define GAEX_GAN_HPP_

#include <random>
#include <vector>

#include "gaex/abstraction.hpp"
#include "gaex/envs.hpp"
#include "gaex/nn.hpp"
#include "gaex/optim.hpp"
#include "gaex/types.hpp"

namespace gaex {

struct GanConfig {
  Index feature_dim = 0;
  Index noise_dim = 0;
  std::vector<Index> generator_hidden{50, 50};
  std::vector<Index> discriminator_hidden{50, 50};
  double leaky_slope = 0.01;
  double generator_lr = 0.001;
  double discriminator_lr = 0.001;
};

struct GanPair {
  NetworkParams<Real> generator;
  NetworkParams<Real> discriminator;
  Index noise_dim = 0;
  OptimizerState<Real> generator_opt;
  OptimizerState<Real> discriminator_opt;

  Index feature_dim() const { return discriminator.input_dim(); }
};

GanPair make_gan(const GanConfig& config, std::mt19937_64& rng);

// z ~ N(0, 1), one row per sample.
Batch sample_noise(Index count, Index dim, std::mt19937_64& rng);

// D(x) for each row of `features`.
Vector discriminate(const GanPair& gan, const Batch& features);
Real discriminate(const GanPair& gan, const AbstractFeature& feature);

Batch generate(const GanPair& gan, const Batch& noise);

inline constexpr Real kProbabilityFloor = 1e-7;

struct GanLosses {
  Real d_loss = 0;  // -(mean log D(real) + mean log(1 - D(fake)))
  Real g_loss = 0;  // mean log(1 - D(G(z)))
  Real d_real = 0;  // mean D(real)
  Real d_fake = 0;  // mean D(G(z))
};

struct GanUpdateOptions {
  bool update_generator = true;
  int discriminator_steps = 1;
  int generator_steps = 1;
};

// Discriminator ascent then generator descent on the original GAN objective.
// The returned losses are evaluated before either network moves.
GanLosses gan_update(GanPair& gan, const Batch& real, const Batch& noise, const GanUpdateOptions& options = {});

// One ascent step of the discriminator objective against an explicit fake
// batch. Returns the pre-update d_loss.
Real discriminator_step(GanPair& gan, const Batch& real, const Batch& fake);

// One descent step of mean log(1 - D(G(z))) on the generator only.
Real generator_step(GanPair& gan, const Batch& noise);

// f(d) = beta (1 - d)^2.
Real intrinsic_reward(Real d_value, Real beta);

struct NoveltyOracleTable {
  Vector rho;      // normalized discounted visitation, index i -> state s_{i+1}
  Vector g;        // fake density as supplied
  Vector novelty;  // 1 - rho / (rho + g)
};

// Exact discounted visitation of a stationary policy on the chain, truncated
// at the episode horizon and renormalized. `policy` is N x 2 with rows
// (P(left), P(right)).
Vector discounted_visitation(const Batch& policy, const ChainMdp& chain, Real gamma);

NoveltyOracleTable novelty_oracle(const Batch& policy, const ChainMdp& chain, Real gamma, const Vector& g);

}  // namespace gaex

#endif  // GAEX_GAN_HPP_
