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

#ifndef PDPSEARCH_INFECTION_H_
#define PDPSEARCH_INFECTION_H_

#include <cstdint>
#include <vector>

#include "pdpsearch/graph.h"

namespace pdpsearch {

struct InfectionConfig {
  int seed_vertex = 0;
  double infect_probability = 0.5;  // p
  double immune_probability = 0.5;  // q
  int rounds = 1;                   // k
  uint64_t rng_seed = 0;
  // Exempts the seed from the immune phase so search experiments always
  // have a live seed; turn off for the process exactly as defined.
  bool protect_seed = true;
};

// Two-phase diffusion generator for targeted subpopulations.  Phase one
// runs `rounds` rounds where every current neighbor of the infected set is
// added independently with probability p (one trial per round per vertex,
// retried next round while still adjacent); phase two removes each
// infected vertex independently with probability q.  Returns the
// survivors, sorted.
//
// Every Bernoulli trial's uniform is a pure hash of (seed, round, vertex)
// (and (seed, vertex) in the immune phase), so identical configs replay
// identical sets and runs with shared seeds are monotonically coupled
// in p.
std::vector<int> Infect(const Graph& g, const InfectionConfig& cfg);

}  // namespace pdpsearch

#endif  // PDPSEARCH_INFECTION_H_
