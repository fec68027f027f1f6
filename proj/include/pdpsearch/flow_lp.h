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

#ifndef PDPSEARCH_FLOW_LP_H_
#define PDPSEARCH_FLOW_LP_H_

#include <boost/multiprecision/cpp_int.hpp>
#include <ostream>
#include <vector>

#include "pdpsearch/graph.h"

namespace pdpsearch {

// All LP arithmetic is exact; solutions and certificates are
// bit-reproducible. Floating point appears only at the proximity facade.
using Rational = boost::multiprecision::cpp_rational;

// One directed edge of the layered network; also one LP variable.
struct LayerEdge {
  int tail = 0;            // original vertex id (ignored for source edges)
  int head = 0;            // original vertex id; head == sink vertex ends flow
  int layer = 0;           // 0: source edge s -> t^1; 1..k: layer l -> l+1
  int original_edge = -1;  // index into Graph::Edges(); -1 for source edges
  bool removed = false;    // tail is the sink vertex: not a variable at all
  bool active = false;     // survives source/sink reachability pruning
};

// The (k+1)-layer expansion on which Flow_k(v, T) is a source-sink LP:
// layer copies x^1..x^(k+1) of every vertex, a synthetic source s wired to
// t^1 for each target, and both directions of every original edge repeated
// between consecutive layers, all copies of one original edge sharing a
// single unit capacity.  Flow entering any copy of v is absorbed by the
// sink (paths end at v), and v's own copies have no outgoing edges, so
// shorter-than-k paths route without padding and the optimum is monotone
// in k.
class LayeredNetwork {
 public:
  LayeredNetwork(const Graph& g, int sink_vertex, std::vector<int> targets,
                 int k);

  int k() const { return k_; }
  int num_vertices() const { return n_; }
  int sink_vertex() const { return sink_vertex_; }
  const std::vector<int>& targets() const { return targets_; }
  const std::vector<std::pair<int, int>>& original_edges() const {
    return original_edges_;
  }

  // All variables, in the fixed construction order: source edges by
  // ascending target, then per layer 1..k and per canonical original edge,
  // the low->high then high->low direction.  Size |T| + 2|E|k.
  const std::vector<LayerEdge>& edges() const { return edges_; }
  int VariableCount() const { return static_cast<int>(edges_.size()); }
  int ActiveVariableCount() const;

  // Layered-node numbering used by certificates: source() first, then
  // x^l at NodeId(l, x) for l in 1..k+1.  Sink() is NodeId(k+1, v).
  int NodeCount() const { return 1 + (k_ + 1) * n_; }
  int SourceNode() const { return 0; }
  int NodeId(int layer, int vertex) const {
    return 1 + (layer - 1) * n_ + vertex;
  }
  int SinkNode() const { return NodeId(k_ + 1, sink_vertex_); }
  // Node the given edge leaves from / arrives at (redirect applied).
  int TailNode(const LayerEdge& e) const;
  int HeadNode(const LayerEdge& e) const;

  // True for layered nodes that exist in the LP: not the source, not the
  // sink, and not a copy of the sink vertex.
  bool IsInternalNode(int node) const;

 private:
  void Prune();

  int n_ = 0;
  int k_ = 0;
  int sink_vertex_ = 0;
  std::vector<int> targets_;
  std::vector<std::pair<int, int>> original_edges_;
  std::vector<LayerEdge> edges_;
};

// Convenience wrapper with precondition checks (v not in targets, targets
// nonempty, k >= 1).
LayeredNetwork BuildLayeredNetwork(const Graph& g, int v,
                                   const std::vector<int>& targets, int k);

// Optimal flow with a matching dual certificate.
struct FlowSolution {
  Rational value;
  // Per raw variable (same indexing as LayeredNetwork::edges()); removed
  // and pruned variables carry 0.
  std::vector<Rational> flow;
  // Dual certificate: a potential per layered node (source/sink implied 0
  // and unused) and a nonnegative multiplier per original edge's coupling
  // constraint.  Dual objective = sum of coupling duals.
  std::vector<Rational> node_potential;
  std::vector<Rational> coupling_dual;
};

// Dense primal simplex with Bland's anti-cycling rule over exact
// rationals.  Deterministic: identical input bits give identical solution
// bits.  The LP is always feasible (zero flow) and bounded, so this never
// fails.
FlowSolution SolveFlowLp(const LayeredNetwork& net);

// Independent exact re-check of a solution: primal feasibility
// (conservation at every internal layered node, coupled unit capacities,
// nonnegativity), dual feasibility, and equality of the two objectives.
bool VerifyCertificate(const LayeredNetwork& net, const FlowSolution& sol);

// Dumps the instance in CPLEX LP text format for cross-checking with
// external solvers.
void WriteLpFormat(const LayeredNetwork& net, std::ostream& out);

}  // namespace pdpsearch

#endif  // PDPSEARCH_FLOW_LP_H_
