// Copyright 2026 The PDPSearch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pdpsearch/infection.h"

#include <stdexcept>

#include "pdpsearch/hashing.h"

namespace pdpsearch {

namespace {
constexpr uint64_t kInfectTag = 0x696E66656374;  // "infect"
constexpr uint64_t kImmuneTag = 0x696D6D756E65;  // "immune"
}  // namespace

std::vector<int> Infect(const Graph& g, const InfectionConfig& cfg) {
  const int n = g.NumVertices();
  if (cfg.seed_vertex < 0 || cfg.seed_vertex >= n) {
    throw std::invalid_argument("seed vertex out of range");
  }
  if (!(cfg.infect_probability >= 0.0 && cfg.infect_probability <= 1.0) ||
      !(cfg.immune_probability >= 0.0 && cfg.immune_probability <= 1.0)) {
    throw std::invalid_argument("probabilities must lie in [0, 1]");
  }
  if (cfg.rounds < 1) throw std::invalid_argument("rounds must be >= 1");

  const uint64_t infect_base = HashChain(cfg.rng_seed, kInfectTag);
  const uint64_t immune_base = HashChain(cfg.rng_seed, kImmuneTag);

  std::vector<char> infected(n, 0);
  infected[cfg.seed_vertex] = 1;
  std::vector<int> members = {cfg.seed_vertex};
  for (int round = 1; round <= cfg.rounds; ++round) {
    const uint64_t round_base = HashChain(infect_base, round);
    // Snapshot the frontier: every uninfected neighbor of the current set
    // gets exactly one trial this round.
    std::vector<int> frontier;
    std::vector<char> in_frontier(n, 0);
    for (int u : members) {
      for (int v : g.Neighbors(u)) {
        if (!infected[v] && !in_frontier[v]) {
          in_frontier[v] = 1;
          frontier.push_back(v);
        }
      }
    }
    for (int v : frontier) {
      if (ToUnitInterval(HashChain(round_base, v)) <= cfg.infect_probability) {
        infected[v] = 1;
        members.push_back(v);
      }
    }
  }

  std::vector<int> targeted;
  for (int v = 0; v < n; ++v) {
    if (!infected[v]) continue;
    if (cfg.protect_seed && v == cfg.seed_vertex) {
      targeted.push_back(v);
      continue;
    }
    if (ToUnitInterval(HashChain(immune_base, v)) > cfg.immune_probability) {
      targeted.push_back(v);
    }
  }
  return targeted;
}

}  // namespace pdpsearch
