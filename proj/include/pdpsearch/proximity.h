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

#ifndef PDPSEARCH_PROXIMITY_H_
#define PDPSEARCH_PROXIMITY_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdpsearch/flow_lp.h"
#include "pdpsearch/graph.h"

namespace pdpsearch {

// Statistics of proximity f(G, v, S): how close vertex v sits to the
// already-discovered targeted set S.  All of them require v not in S;
// every use in the search algorithms has v outside the discovered set.

// |{u : (v,u) in E and (u,v') in E for some v' in S}|.
long long CommonNeighbors(const Graph& g, int v, const std::vector<int>& S);

// Number of simple paths from v ending at a member of S with edge-length
// at most k (k >= 1).  Paths may pass through S members; each S endpoint
// counts once per distinct path.
long long PathCount(const Graph& g, int v, const std::vector<int>& S, int k);

// |{{a,b} in S : a,b,v form a triangle}|.
long long TriangleSop(const Graph& g, int v, const std::vector<int>& S);

// Optimum of the layered LP for Flow_k(v, S); exact delegation to flow_lp.
Rational FlowSop(const Graph& g, int v, const std::vector<int>& S, int k);

enum class SopKind { kCommonNeighbors, kPath, kTriangle, kFlow };

// One proximity statistic bundled with its closed-form targeted
// sensitivity and impact cardinality bounds.
struct SoPDescriptor {
  SopKind kind = SopKind::kCommonNeighbors;
  int k = 1;  // length bound for path/flow kinds
  // When >= 0, bounds use this maximum degree instead of the input
  // graph's; lets callers pin d_max across a family of graphs.
  int configured_d_max = -1;

  // CN -> 1, Triangle -> d, Flow_k -> d, Path_k -> (k-1) d^(k-1) (zero for
  // Path_1).
  double SensitivityBound(int d_max) const;
  // Library-wide default 2 d_max: a rewired protected vertex can take
  // the common-neighbor role for its old and its new neighbors.  Validated
  // by the brute-force probe below, never stated in closed form otherwise.
  double ImpactCardinalityBound(int d_max) const;

  int EffectiveDMax(const Graph& g) const {
    return configured_d_max >= 0 ? configured_d_max : g.MaxDegree();
  }

  double Evaluate(const Graph& g, int v, const std::vector<int>& S) const;

  // Parses "cn" | "path" | "triangle" | "flow" as used in experiment
  // configs.
  static SoPDescriptor FromName(const std::string& name, int k);
  std::string Name() const;
};

using SopEvaluator =
    std::function<double(const Graph&, int, const std::vector<int>&)>;

// Result of randomized lower-bound probes for the sensitivity and impact
// cardinality definitions.  Each trial draws a small graph, a partition,
// and a full rewiring of one protected vertex, then enumerates every
// targeted t and every S inside the targeted set.
struct SensitivityProbe {
  double max_difference = 0.0;  // max |f(G,t,S) - f(G',t,S)| observed
  int max_degree = 0;           // largest d_max over sampled pairs
  bool within_bound = true;     // every pair respected SensitivityBound(d_pair)
};

SensitivityProbe BruteForceTargetedSensitivity(const SoPDescriptor& sop, int n,
                                               int trials, uint64_t seed);

struct ImpactProbe {
  int max_changed = 0;           // vertices (outside S) whose value changed
  int max_changed_targeted = 0;  // same, restricted to targeted vertices
  int max_degree = 0;
};

ImpactProbe BruteForceImpactCardinality(const SoPDescriptor& sop, int n,
                                        int trials, uint64_t seed);

// Generic variant for probing arbitrary statistics (e.g. a constant stub).
ImpactProbe BruteForceImpactCardinalityOf(const SopEvaluator& f, int n,
                                          int trials, uint64_t seed);

}  // namespace pdpsearch

#endif  // PDPSEARCH_PROXIMITY_H_
