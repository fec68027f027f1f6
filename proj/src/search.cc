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

#include "pdpsearch/search.h"

#include <algorithm>
#include <cmath>
#include <map>

namespace pdpsearch {

namespace {

// Oracle query with trace bookkeeping; returns the answer.
bool QueryVertex(const Population& pop, int v, std::vector<uint8_t>& investigated,
                 SearchTrace& trace) {
  bool answer = pop.QueryOracle(v);
  investigated[v] = 1;
  trace.queries.push_back(
      {v, answer, static_cast<long long>(trace.queries.size()) + 1});
  return answer;
}

void RecordDiscovery(int v, SearchTrace& trace) {
  trace.discoveries.push_back(v);
  trace.discovery_budgets.push_back(trace.TotalBudget());
}

// Grows the component of `seed` (already confirmed targeted and marked
// investigated) inside the shared trace.  Returns the component in
// discovery order.  record_seed is false when the caller (SearchCom) has
// already logged the seed's discovery.
std::vector<int> SfsInto(const Graph& g, const Population& pop, int seed,
                         std::vector<uint8_t>& investigated,
                         SearchTrace& trace, bool record_seed) {
  std::vector<int> component = {seed};
  std::vector<uint8_t> in_component(g.NumVertices(), 0);
  in_component[seed] = 1;
  if (record_seed) RecordDiscovery(seed, trace);

  // Frontier keyed by id so the (Path_1 desc, id asc) argmax is a single
  // ordered scan.
  std::map<int, int> path1;
  for (int u : g.Neighbors(seed)) {
    if (!investigated[u]) path1[u] = 1;
  }
  while (!path1.empty()) {
    int best = -1;
    int best_count = -1;
    for (const auto& [v, count] : path1) {
      if (count > best_count) {
        best = v;
        best_count = count;
      }
    }
    path1.erase(best);
    if (QueryVertex(pop, best, investigated, trace)) {
      component.push_back(best);
      in_component[best] = 1;
      RecordDiscovery(best, trace);
      // Only neighbors of `best` can have changed Path_1 counts; recompute
      // them (this also inserts the fresh frontier vertices).
      for (int u : g.Neighbors(best)) {
        if (investigated[u]) continue;
        int count = 0;
        for (int w : g.Neighbors(u)) {
          if (in_component[w]) ++count;
        }
        path1[u] = count;
      }
    }
  }
  return component;
}

}  // namespace

long long SearchTrace::DiscoveredAtBudget(long long cap) const {
  long long count = 0;
  for (long long b : discovery_budgets) {
    if (b <= cap) ++count;
  }
  return count;
}

int SearchTrace::ComponentsAtBudget(long long cap) const {
  int count = 0;
  for (const auto& event : component_events) {
    if (event.budget <= cap) ++count;
  }
  return count;
}

SfsResult Sfs(const Graph& g, const Population& pop, int seed_vertex) {
  if (seed_vertex < 0 || seed_vertex >= g.NumVertices()) {
    throw std::invalid_argument("seed vertex out of range");
  }
  if (!pop.QueryOracle(seed_vertex)) {
    throw InvalidSeedError("seed vertex is not targeted");
  }
  std::vector<uint8_t> investigated(g.NumVertices(), 0);
  investigated[seed_vertex] = 1;
  SearchTrace trace;
  SfsResult result;
  result.targeted = SfsInto(g, pop, seed_vertex, investigated, trace,
                            /*record_seed=*/true);
  for (int v = 0; v < g.NumVertices(); ++v) {
    if (investigated[v]) result.investigated.push_back(v);
  }
  return result;
}

std::optional<int> SearchCom(const Graph& g, const Population& pop,
                             const std::vector<int>& discovered,
                             std::vector<uint8_t>& investigated,
                             const SoPDescriptor& sop, double epsilon,
                             int stop_threshold, NoiseMode mode,
                             NoiseSource* src, SearchTrace& trace) {
  if (stop_threshold < 1) {
    throw std::invalid_argument("stop threshold must be >= 1");
  }
  bool zero_noise = std::isinf(epsilon) && epsilon > 0.0;
  if (!zero_noise && !(epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive or infinite");
  }
  if (!zero_noise && src == nullptr) {
    throw std::invalid_argument("finite epsilon needs a noise source");
  }

  int d_max = sop.EffectiveDMax(g);
  double delta_f = sop.SensitivityBound(d_max);
  double impact = sop.ImpactCardinalityBound(d_max);
  // A zero bound needs no perturbation (the statistic is invariant).
  auto noise = [&](double scale) {
    return (zero_noise || scale == 0.0) ? 0.0 : SampleLaplace(scale, *src);
  };

  // Noisy allowance first, then one noisy value per uninvestigated vertex
  // in ascending id order; this fixed draw order is what makes replays
  // exact.
  double k_hat = static_cast<double>(stop_threshold) +
                 noise(2.0 * impact / epsilon);
  double value_scale =
      (mode == NoiseMode::kAppendix ? 4.0 : 1.0) * delta_f / epsilon;
  std::vector<std::pair<double, int>> order;  // (-noisy value, id)
  for (int v = 0; v < g.NumVertices(); ++v) {
    if (investigated[v]) continue;
    double noisy = sop.Evaluate(g, v, discovered) + noise(value_scale);
    order.emplace_back(-noisy, v);
  }
  std::sort(order.begin(), order.end());

  long long count = 0;
  for (const auto& [neg_value, v] : order) {
    // Strict comparison: a round makes at most stop_threshold queries when
    // noiseless, and a non-positive allowance makes none.
    if (!(static_cast<double>(count) < k_hat)) return std::nullopt;
    ++count;
    if (QueryVertex(pop, v, investigated, trace)) {
      RecordDiscovery(v, trace);
      return v;
    }
  }
  return std::nullopt;
}

namespace {

SearchTrace RunTargeting(const Graph& g, const Population& pop,
                         int seed_vertex, const SoPDescriptor& sop, int k,
                         int stop_threshold, double epsilon, NoiseMode mode,
                         NoiseSource* src) {
  if (k < 1) throw std::invalid_argument("component count must be >= 1");
  if (stop_threshold < 1) {
    throw std::invalid_argument("stop threshold must be >= 1");
  }
  if (seed_vertex < 0 || seed_vertex >= g.NumVertices()) {
    throw std::invalid_argument("seed vertex out of range");
  }
  if (!pop.IsTargeted(seed_vertex)) {
    throw InvalidSeedError("seed vertex is not targeted");
  }

  SearchTrace trace;
  trace.ledger.per_round_epsilon = epsilon;
  trace.ledger.rounds_used = 0;
  std::vector<uint8_t> investigated(g.NumVertices(), 0);
  // The seed arrives pre-confirmed; confirming an unconfirmed one would
  // cost one budget unit via Sfs().
  investigated[seed_vertex] = 1;

  auto record_event = [&trace]() {
    ComponentEvent event;
    event.budget = trace.TotalBudget();
    event.components = static_cast<int>(trace.component_events.size()) + 1;
    event.epsilon_spent = ComposeBasic(trace.ledger);
    event.risk_multiplier = std::exp(event.epsilon_spent);
    trace.component_events.push_back(event);
  };

  // The initial component event is the pre-confirmed seed itself.
  record_event();
  std::vector<int> discovered = SfsInto(g, pop, seed_vertex, investigated,
                                        trace, /*record_seed=*/true);

  trace.halted_by = HaltReason::kGlobalRounds;
  for (int round = 1; round < k; ++round) {
    trace.ledger.rounds_used += 1;
    std::optional<int> found =
        SearchCom(g, pop, discovered, investigated, sop, epsilon,
                  stop_threshold, mode, src, trace);
    if (!found) {
      bool exhausted = true;
      for (int v = 0; v < g.NumVertices() && exhausted; ++v) {
        exhausted = investigated[v] != 0;
      }
      trace.halted_by = exhausted ? HaltReason::kExhaustedVertices
                                  : HaltReason::kComponentBudget;
      break;
    }
    record_event();
    std::vector<int> component =
        SfsInto(g, pop, *found, investigated, trace, /*record_seed=*/false);
    discovered.insert(discovered.end(), component.begin(), component.end());
  }
  return trace;
}

}  // namespace

SearchTrace Target(const Graph& g, const Population& pop, int seed_vertex,
                   const SoPDescriptor& sop, int k, int stop_threshold) {
  return RunTargeting(g, pop, seed_vertex, sop, k, stop_threshold,
                      kInfiniteEpsilon, NoiseMode::kAppendix, nullptr);
}

SearchTrace PTarget(const Graph& g, const Population& pop, int seed_vertex,
                    const SoPDescriptor& sop, int k, int stop_threshold,
                    double epsilon, NoiseMode mode, NoiseSource& src) {
  return RunTargeting(g, pop, seed_vertex, sop, k, stop_threshold, epsilon,
                      mode, &src);
}

}  // namespace pdpsearch
