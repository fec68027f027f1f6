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

#ifndef PDPSEARCH_SEARCH_H_
#define PDPSEARCH_SEARCH_H_

#include <optional>
#include <vector>

#include "pdpsearch/graph.h"
#include "pdpsearch/mechanisms.h"
#include "pdpsearch/proximity.h"

namespace pdpsearch {

class InvalidSeedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Which Laplace scales the component search uses.  kAppendix
// (Lap(4 Delta/eps) values, Lap(2 IC/eps) threshold) carries the privacy
// proof and is the default; kMaintext (Lap(Delta/eps) values, same
// threshold rule) reproduces the Lap(20) <-> (k-1)/20 experimental
// accounting.  Neither is silently preferred: every entry point takes the
// mode explicitly.
enum class NoiseMode { kAppendix, kMaintext };

enum class HaltReason {
  kComponentBudget,    // a component search ran out of its query allowance
  kGlobalRounds,       // k components sought and the round budget is spent
  kExhaustedVertices,  // nothing left to query
};

struct QueryRecord {
  int vertex = 0;
  bool targeted = false;
  long long budget = 0;  // 1-based query index
};

struct ComponentEvent {
  long long budget = 0;  // budget index when the component's seed was confirmed
  int components = 0;    // components discovered so far, this one included
  double epsilon_spent = 0.0;
  double risk_multiplier = 1.0;
};

// Full record of one search run.  Budget indices strictly increase and no
// vertex is ever queried twice.
struct SearchTrace {
  std::vector<QueryRecord> queries;
  std::vector<int> discoveries;               // targeted ids as found
  std::vector<long long> discovery_budgets;   // parallel to discoveries
  std::vector<ComponentEvent> component_events;
  PrivacyLedger ledger;                       // final accounting state
  HaltReason halted_by = HaltReason::kGlobalRounds;

  long long TotalBudget() const { return static_cast<long long>(queries.size()); }
  // Number of discoveries with budget index <= cap (the seed counts at 0).
  long long DiscoveredAtBudget(long long cap) const;
  int ComponentsAtBudget(long long cap) const;
};

struct SfsResult {
  std::vector<int> targeted;      // the seed's whole targeted component, in
                                  // discovery order
  std::vector<int> investigated;  // component plus its protected frontier,
                                  // sorted
};

// Statistic-first search: grows the seed's targeted component by always
// examining the frontier vertex with the highest Path_1 count into the
// discovered set (ties to the smallest id).  Every frontier vertex gets
// examined, so the output is exactly the seed's component in the
// T-induced subgraph, independent of any protected vertex's edges.
SfsResult Sfs(const Graph& g, const Population& pop, int seed_vertex);

// One private search for a fresh component (the subroutine between SFS
// phases).  Draws the noisy allowance K_hat = K + Lap(2 IC(f)/eps) once,
// perturbs f(G, v, discovered) once per uninvestigated vertex (ascending
// id), then queries in descending noisy order until a targeted vertex
// turns up (returned) or the allowance or the vertex pool runs out
// (nullopt).  Every query lands in `trace` and `investigated`.
// eps = kInfiniteEpsilon turns all noise off.
std::optional<int> SearchCom(const Graph& g, const Population& pop,
                             const std::vector<int>& discovered,
                             std::vector<uint8_t>& investigated,
                             const SoPDescriptor& sop, double epsilon,
                             int stop_threshold, NoiseMode mode,
                             NoiseSource* src, SearchTrace& trace);

// Non-private targeting: alternates SFS with an exact-SoP component search
// for up to k components, each search limited to stop_threshold queries.
// Deterministic.
SearchTrace Target(const Graph& g, const Population& pop, int seed_vertex,
                   const SoPDescriptor& sop, int k, int stop_threshold);

// Private targeting: same skeleton with SearchCom as the component search;
// the ledger accrues one epsilon-round per SearchCom invocation and the
// trace snapshots (rounds * eps, e^(rounds * eps)) at every component
// event.  epsilon = kInfiniteEpsilon degenerates to Target, trace for
// trace.
SearchTrace PTarget(const Graph& g, const Population& pop, int seed_vertex,
                    const SoPDescriptor& sop, int k, int stop_threshold,
                    double epsilon, NoiseMode mode, NoiseSource& src);

}  // namespace pdpsearch

#endif  // PDPSEARCH_SEARCH_H_
