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

#ifndef PDPSEARCH_GRAPH_H_
#define PDPSEARCH_GRAPH_H_

#include <atomic>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pdpsearch {

// Error raised while reading an edge-list or partition file; the message
// carries the 1-based line number of the offending record.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Immutable undirected graph with optional positive integer edge weights.
// Vertex ids are dense 0..n-1; neighbor lists are sorted ascending so all
// iteration orders are canonical and replays are deterministic.
class Graph {
 public:
  Graph() = default;

  // `edges` may be in any order and orientation; self-loops and duplicate
  // edges are rejected with std::invalid_argument.
  static Graph FromEdges(int n, std::vector<std::pair<int, int>> edges);

  struct WeightedEdge {
    int u = 0;
    int v = 0;
    long long weight = 1;
  };
  // Weights must be >= 1; duplicates are rejected here (merging duplicate
  // input lines is LoadEdgeList's job).
  static Graph FromWeightedEdges(int n, std::vector<WeightedEdge> edges);

  int NumVertices() const { return n_; }
  int NumEdges() const { return static_cast<int>(edges_.size()); }
  bool IsWeighted() const { return weighted_; }

  const std::vector<int>& Neighbors(int v) const;
  int Degree(int v) const;
  int MaxDegree() const;
  bool HasEdge(int u, int v) const;

  // Edges in canonical order: u < v, sorted lexicographically.
  const std::vector<std::pair<int, int>>& Edges() const { return edges_; }
  // Weight of edge {u, v}; throws std::invalid_argument on an unweighted
  // graph or a missing edge.
  long long Weight(int u, int v) const;

  // Stable textual form ("n\nu v [w]\n..." in canonical edge order); equal
  // graphs serialize to equal bytes.
  std::string CanonicalSerialize() const;

 private:
  void BuildAdjacency();
  void CheckVertex(int v) const;

  int n_ = 0;
  bool weighted_ = false;
  std::vector<std::pair<int, int>> edges_;  // canonical (u < v), sorted
  std::vector<long long> weights_;          // parallel to edges_ if weighted
  std::vector<std::vector<int>> adj_;       // sorted neighbor lists
};

// Result of ingesting an edge-list file: the canonical graph plus the map
// between original labels and dense ids.
struct EdgeListGraph {
  Graph graph;
  std::vector<std::string> labels;                // dense id -> original label
  std::unordered_map<std::string, int> id_of;     // original label -> dense id
};

// Reads a whitespace-separated edge list ("u v" or, with `weighted`,
// "u v w"); lines whose first non-blank character is '#' are comments.
// Labels are compacted to 0..n-1 in first-appearance order.  In weighted
// mode duplicate edges merge by weight summation; in unweighted mode a
// duplicate edge is a ParseError, as are malformed fields, self-loops and
// weights < 1.
EdgeListGraph LoadEdgeList(std::istream& in, bool weighted);

// Keeps exactly the edges with weight >= min_weight; the vertex set is
// unchanged and the result stays weighted.  Throws std::invalid_argument
// on an unweighted input.
Graph SparsifyByWeight(const Graph& g, long long min_weight);

// Returns a copy of `g` in which the edges incident to `v` are exactly
// {v,u} for u in new_neighbors.  Used to build the neighboring graphs
// G ~ G' of the privacy definition.  Kept edges keep their weights; newly
// created edges get weight 1 on weighted graphs.
Graph RewireVertex(const Graph& g, int v, const std::vector<int>& new_neighbors);

// The hidden partition V = T ∪ P plus the query-counting identity oracle.
// The partition is immutable; the oracle counter and per-vertex queried
// flags are atomics so concurrent workers may share one instance.
class Population {
 public:
  Population(int n, const std::vector<int>& targeted);

  Population(const Population& other);
  Population& operator=(const Population& other);

  int NumVertices() const { return n_; }

  // Ground-truth membership; does not touch the oracle counter.  Reserved
  // for fixtures and ground-truth extraction, never for search decisions.
  bool IsTargeted(int v) const;

  // The identity oracle.  The first query of a vertex increments the
  // budget counter; repeat queries are free (searches never repeat them).
  bool QueryOracle(int v) const;

  long long OracleQueries() const { return queries_.load(); }
  bool WasQueried(int v) const;

  // Targeted ids, sorted ascending.
  const std::vector<int>& Targeted() const { return targeted_; }

 private:
  int n_ = 0;
  std::vector<int> targeted_;
  std::vector<uint8_t> is_targeted_;
  mutable std::vector<unsigned char> queried_;
  mutable std::atomic<long long> queries_{0};
};

// Connected components of the subgraph induced on the targeted set, each
// sorted ascending, listed by smallest member.  Ground truth only; the
// search algorithms never call this.
std::vector<std::vector<int>> TargetedComponents(const Graph& g,
                                                 const Population& pop);

// Partition file helpers: one targeted label per line, '#' comments.
std::vector<std::string> ReadPartitionLabels(std::istream& in);
void WritePartitionLabels(std::ostream& out,
                          const std::vector<std::string>& labels);

}  // namespace pdpsearch

#endif  // PDPSEARCH_GRAPH_H_
