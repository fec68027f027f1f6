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

#include "pdpsearch/proximity.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pdpsearch/mechanisms.h"

namespace pdpsearch {

namespace {

// Validates v and S, returns S sorted and deduplicated.
std::vector<int> CheckArgs(const Graph& g, int v, const std::vector<int>& S) {
  if (v < 0 || v >= g.NumVertices()) {
    throw std::invalid_argument("vertex id out of range");
  }
  std::vector<int> s = S;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (int x : s) {
    if (x < 0 || x >= g.NumVertices()) {
      throw std::invalid_argument("set member out of range");
    }
    if (x == v) throw std::invalid_argument("v must not be a member of S");
  }
  return s;
}

long long CountSimplePaths(const Graph& g, int v, const std::vector<char>& in_s,
                           std::vector<char>& visited, int depth_left) {
  long long count = 0;
  visited[v] = 1;
  for (int u : g.Neighbors(v)) {
    if (visited[u]) continue;
    if (in_s[u]) ++count;
    if (depth_left > 1) {
      count += CountSimplePaths(g, u, in_s, visited, depth_left - 1);
    }
  }
  visited[v] = 0;
  return count;
}

}  // namespace

long long CommonNeighbors(const Graph& g, int v, const std::vector<int>& S) {
  std::vector<int> s = CheckArgs(g, v, S);
  std::vector<char> near_s(g.NumVertices(), 0);
  for (int x : s) {
    for (int u : g.Neighbors(x)) near_s[u] = 1;
  }
  long long count = 0;
  for (int u : g.Neighbors(v)) count += near_s[u];
  return count;
}

long long PathCount(const Graph& g, int v, const std::vector<int>& S, int k) {
  if (k < 1) throw std::invalid_argument("path length bound must be >= 1");
  std::vector<int> s = CheckArgs(g, v, S);
  std::vector<char> in_s(g.NumVertices(), 0);
  for (int x : s) in_s[x] = 1;
  std::vector<char> visited(g.NumVertices(), 0);
  return CountSimplePaths(g, v, in_s, visited, k);
}

long long TriangleSop(const Graph& g, int v, const std::vector<int>& S) {
  std::vector<int> s = CheckArgs(g, v, S);
  long long count = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (!g.HasEdge(s[i], v)) continue;
    for (size_t j = i + 1; j < s.size(); ++j) {
      if (g.HasEdge(s[j], v) && g.HasEdge(s[i], s[j])) ++count;
    }
  }
  return count;
}

Rational FlowSop(const Graph& g, int v, const std::vector<int>& S, int k) {
  std::vector<int> s = CheckArgs(g, v, S);
  return SolveFlowLp(BuildLayeredNetwork(g, v, s, k)).value;
}

double SoPDescriptor::SensitivityBound(int d_max) const {
  if (d_max < 0) throw std::invalid_argument("d_max must be nonnegative");
  double d = static_cast<double>(d_max);
  switch (kind) {
    case SopKind::kCommonNeighbors:
      return 1.0;
    case SopKind::kTriangle:
    case SopKind::kFlow:
      return d;
    case SopKind::kPath:
      // (k-1) d^(k-1); evaluates to the exact zero of Path_1.
      return static_cast<double>(k - 1) * std::pow(d, k - 1);
  }
  throw std::logic_error("unknown SoP kind");
}

double SoPDescriptor::ImpactCardinalityBound(int d_max) const {
  if (d_max < 0) throw std::invalid_argument("d_max must be nonnegative");
  return 2.0 * static_cast<double>(d_max);
}

double SoPDescriptor::Evaluate(const Graph& g, int v,
                               const std::vector<int>& S) const {
  switch (kind) {
    case SopKind::kCommonNeighbors:
      return static_cast<double>(CommonNeighbors(g, v, S));
    case SopKind::kPath:
      return static_cast<double>(PathCount(g, v, S, k));
    case SopKind::kTriangle:
      return static_cast<double>(TriangleSop(g, v, S));
    case SopKind::kFlow:
      return FlowSop(g, v, S, k).convert_to<double>();
  }
  throw std::logic_error("unknown SoP kind");
}

SoPDescriptor SoPDescriptor::FromName(const std::string& name, int k) {
  SoPDescriptor sop;
  sop.k = k;
  if (name == "cn") {
    sop.kind = SopKind::kCommonNeighbors;
  } else if (name == "path") {
    sop.kind = SopKind::kPath;
  } else if (name == "triangle") {
    sop.kind = SopKind::kTriangle;
  } else if (name == "flow") {
    sop.kind = SopKind::kFlow;
  } else {
    throw std::invalid_argument("unknown SoP name '" + name + "'");
  }
  if ((sop.kind == SopKind::kPath || sop.kind == SopKind::kFlow) && k < 1) {
    throw std::invalid_argument("SoP length bound must be >= 1");
  }
  return sop;
}

std::string SoPDescriptor::Name() const {
  switch (kind) {
    case SopKind::kCommonNeighbors:
      return "cn";
    case SopKind::kPath:
      return "path";
    case SopKind::kTriangle:
      return "triangle";
    case SopKind::kFlow:
      return "flow";
  }
  throw std::logic_error("unknown SoP kind");
}

namespace {

// Shared trial sampler: random graph, random partition with at least one
// targeted and one protected vertex, random protected vertex, random full
// rewiring.
struct NeighborPair {
  Graph g;
  Graph g_prime;
  std::vector<int> targeted;
  int rewired = 0;
  int d_max = 0;
};

NeighborPair SampleNeighborPair(int n, NoiseSource& rng) {
  static constexpr double kEdgeProbs[] = {0.25, 0.5, 0.75};
  double edge_p = kEdgeProbs[rng.NextU64() % 3];
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.NextUniform() < edge_p) edges.emplace_back(i, j);
    }
  }
  NeighborPair pair;
  pair.g = Graph::FromEdges(n, std::move(edges));
  std::vector<int> protected_vertices;
  for (;;) {
    pair.targeted.clear();
    protected_vertices.clear();
    for (int v = 0; v < n; ++v) {
      if (rng.NextUniform() < 0.5) {
        pair.targeted.push_back(v);
      } else {
        protected_vertices.push_back(v);
      }
    }
    if (!pair.targeted.empty() && !protected_vertices.empty()) break;
  }
  pair.rewired =
      protected_vertices[rng.NextU64() % protected_vertices.size()];
  std::vector<int> new_neighbors;
  for (int v = 0; v < n; ++v) {
    if (v != pair.rewired && rng.NextUniform() < 0.5) new_neighbors.push_back(v);
  }
  pair.g_prime = RewireVertex(pair.g, pair.rewired, new_neighbors);
  pair.d_max = std::max(pair.g.MaxDegree(), pair.g_prime.MaxDegree());
  return pair;
}

}  // namespace

SensitivityProbe BruteForceTargetedSensitivity(const SoPDescriptor& sop, int n,
                                               int trials, uint64_t seed) {
  if (n < 2 || n > 8) {
    throw std::invalid_argument("probe wants 2 <= n <= 8 (exhaustive subsets)");
  }
  NoiseSource rng(seed, "sensitivity-probe");
  SensitivityProbe probe;
  const bool needs_nonempty_s = sop.kind == SopKind::kFlow;
  for (int trial = 0; trial < trials; ++trial) {
    NeighborPair pair = SampleNeighborPair(n, rng);
    probe.max_degree = std::max(probe.max_degree, pair.d_max);
    double bound = sop.SensitivityBound(pair.d_max);
    const auto& targeted = pair.targeted;
    for (size_t ti = 0; ti < targeted.size(); ++ti) {
      std::vector<int> others;
      for (size_t i = 0; i < targeted.size(); ++i) {
        if (i != ti) others.push_back(targeted[i]);
      }
      for (uint32_t mask = 0; mask < (1u << others.size()); ++mask) {
        std::vector<int> subset;
        for (size_t i = 0; i < others.size(); ++i) {
          if (mask & (1u << i)) subset.push_back(others[i]);
        }
        if (subset.empty() && needs_nonempty_s) continue;
        double a = sop.Evaluate(pair.g, targeted[ti], subset);
        double b = sop.Evaluate(pair.g_prime, targeted[ti], subset);
        double diff = std::abs(a - b);
        probe.max_difference = std::max(probe.max_difference, diff);
        if (diff > bound) probe.within_bound = false;
      }
    }
  }
  return probe;
}

ImpactProbe BruteForceImpactCardinalityOf(const SopEvaluator& f, int n,
                                          int trials, uint64_t seed) {
  if (n < 2 || n > 8) {
    throw std::invalid_argument("probe wants 2 <= n <= 8 (exhaustive subsets)");
  }
  NoiseSource rng(seed, "impact-probe");
  ImpactProbe probe;
  for (int trial = 0; trial < trials; ++trial) {
    NeighborPair pair = SampleNeighborPair(n, rng);
    probe.max_degree = std::max(probe.max_degree, pair.d_max);
    const auto& targeted = pair.targeted;
    std::vector<char> is_targeted(n, 0);
    for (int t : targeted) is_targeted[t] = 1;
    for (uint32_t mask = 0; mask < (1u << targeted.size()); ++mask) {
      std::vector<int> subset;
      for (size_t i = 0; i < targeted.size(); ++i) {
        if (mask & (1u << i)) subset.push_back(targeted[i]);
      }
      std::vector<char> in_subset(n, 0);
      for (int x : subset) in_subset[x] = 1;
      int changed = 0;
      int changed_targeted = 0;
      for (int v = 0; v < n; ++v) {
        if (in_subset[v]) continue;
        if (f(pair.g, v, subset) != f(pair.g_prime, v, subset)) {
          ++changed;
          if (is_targeted[v]) ++changed_targeted;
        }
      }
      probe.max_changed = std::max(probe.max_changed, changed);
      probe.max_changed_targeted =
          std::max(probe.max_changed_targeted, changed_targeted);
    }
  }
  return probe;
}

ImpactProbe BruteForceImpactCardinality(const SoPDescriptor& sop, int n,
                                        int trials, uint64_t seed) {
  return BruteForceImpactCardinalityOf(
      [&sop](const Graph& g, int v, const std::vector<int>& S) {
        return sop.Evaluate(g, v, S);
      },
      n, trials, seed);
}

}  // namespace pdpsearch
