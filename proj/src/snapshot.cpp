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

#include "gaex/snapshot.hpp"

#include <cstring>
#include <fstream>

#include "gaex/errors.hpp"

namespace gaex {
namespace {

constexpr char kMagic[8] = {'G', 'A', 'E', 'X', 'S', 'N', 'P', '1'};

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("snapshot truncated");
  return v;
}

void put_matrix(std::ofstream& out, const Matrix<Real>& m) {
  put<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
  out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(Real)));
}

Matrix<Real> get_matrix(std::ifstream& in) {
  const auto rows = get<std::uint64_t>(in);
  const auto cols = get<std::uint64_t>(in);
  if (rows > (1u << 24) || cols > (1u << 24)) throw Error("snapshot matrix too large");
  Matrix<Real> m(static_cast<Index>(rows), static_cast<Index>(cols));
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(Real)));
  if (!in) throw Error("snapshot truncated");
  return m;
}

}  // namespace

void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write snapshot " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put<std::uint64_t>(out, snapshot.config_hash);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(snapshot.networks.size()));
  for (const auto& [name, net] : snapshot.networks) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(net.activation));
    put<double>(out, net.leaky_slope);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(net.head));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(net.output));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(net.layers.size()));
    for (const auto& layer : net.layers) {
      put_matrix(out, layer.weight.value());
      put_matrix(out, layer.bias.value());
    }
  }
  if (!out) throw Error("failed writing snapshot " + path.string());
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open snapshot " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw Error("not a snapshot file: " + path.string());
  Snapshot s;
  s.config_hash = get<std::uint64_t>(in);
  const auto count = get<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto len = get<std::uint32_t>(in);
    std::string name(len, '\0');
    in.read(name.data(), len);
    NetworkParams<Real> net;
    net.activation = static_cast<Activation>(get<std::uint8_t>(in));
    net.leaky_slope = get<double>(in);
    net.head = static_cast<HeadKind>(get<std::uint8_t>(in));
    net.output = static_cast<OutputKind>(get<std::uint8_t>(in));
    const auto layers = get<std::uint32_t>(in);
    for (std::uint32_t l = 0; l < layers; ++l) {
      Matrix<Real> w = get_matrix(in);
      Matrix<Real> b = get_matrix(in);
      net.layers.push_back({Tensor<Real>::parameter(std::move(w)), Tensor<Real>::parameter(std::move(b))});
    }
    s.networks.emplace_back(std::move(name), std::move(net));
  }
  return s;
}

}  // namespace gaex
