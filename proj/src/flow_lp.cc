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

#include "pdpsearch/flow_lp.h"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace pdpsearch {

LayeredNetwork::LayeredNetwork(const Graph& g, int sink_vertex,
                               std::vector<int> targets, int k)
    : n_(g.NumVertices()),
      k_(k),
      sink_vertex_(sink_vertex),
      targets_(std::move(targets)),
      original_edges_(g.Edges()) {
  if (k_ < 1) throw std::invalid_argument("k must be >= 1");
  if (sink_vertex_ < 0 || sink_vertex_ >= n_) {
    throw std::invalid_argument("vertex id out of range");
  }
  std::sort(targets_.begin(), targets_.end());
  targets_.erase(std::unique(targets_.begin(), targets_.end()),
                 targets_.end());
  if (targets_.empty()) throw std::invalid_argument("targets must be nonempty");
  for (int t : targets_) {
    if (t < 0 || t >= n_) throw std::invalid_argument("target out of range");
    if (t == sink_vertex_) {
      throw std::invalid_argument("sink vertex may not be a target");
    }
  }

  for (int t : targets_) {
    LayerEdge e;
    e.tail = -1;
    e.head = t;
    e.layer = 0;
    e.original_edge = -1;
    edges_.push_back(e);
  }
  for (int layer = 1; layer <= k_; ++layer) {
    for (int i = 0; i < static_cast<int>(original_edges_.size()); ++i) {
      auto [a, b] = original_edges_[i];
      edges_.push_back({a, b, layer, i});
      edges_.push_back({b, a, layer, i});
    }
  }
  for (auto& e : edges_) {
    e.removed = e.layer > 0 && e.tail == sink_vertex_;
  }
  Prune();
}

int LayeredNetwork::TailNode(const LayerEdge& e) const {
  return e.layer == 0 ? SourceNode() : NodeId(e.layer, e.tail);
}

int LayeredNetwork::HeadNode(const LayerEdge& e) const {
  if (e.head == sink_vertex_) return SinkNode();
  return NodeId(e.layer + 1, e.head);
}

bool LayeredNetwork::IsInternalNode(int node) const {
  if (node == SourceNode() || node == SinkNode()) return false;
  int vertex = (node - 1) % n_;
  return vertex != sink_vertex_;
}

int LayeredNetwork::ActiveVariableCount() const {
  return static_cast<int>(
      std::count_if(edges_.begin(), edges_.end(),
                    [](const LayerEdge& e) { return e.active; }));
}

void LayeredNetwork::Prune() {
  std::vector<std::vector<int>> out(NodeCount()), in(NodeCount());
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    if (edges_[i].removed) continue;
    out[TailNode(edges_[i])].push_back(i);
    in[HeadNode(edges_[i])].push_back(i);
  }
  auto bfs = [this](const std::vector<std::vector<int>>& adj, int start,
                    bool follow_heads) {
    std::vector<char> seen(NodeCount(), 0);
    std::deque<int> queue = {start};
    seen[start] = 1;
    while (!queue.empty()) {
      int node = queue.front();
      queue.pop_front();
      for (int ei : adj[node]) {
        int next = follow_heads ? HeadNode(edges_[ei]) : TailNode(edges_[ei]);
        if (!seen[next]) {
          seen[next] = 1;
          queue.push_back(next);
        }
      }
    }
    return seen;
  };
  std::vector<char> fwd = bfs(out, SourceNode(), true);
  std::vector<char> bwd = bfs(in, SinkNode(), false);
  for (auto& e : edges_) {
    e.active = !e.removed && fwd[TailNode(e)] && bwd[HeadNode(e)];
  }
}

LayeredNetwork BuildLayeredNetwork(const Graph& g, int v,
                                   const std::vector<int>& targets, int k) {
  return LayeredNetwork(g, v, targets, k);
}

namespace {

// Dense simplex tableau.  Column layout: structural variables (active
// layer edges, in raw order), then one slack per coupling row, then one
// artificial per conservation row; the final entry of each row is b.  The
// objective row holds reduced costs, with the running objective value in
// its final entry.  Artificials never re-enter, so their reduced costs at
// optimality are exactly the conservation duals, and the slack reduced
// costs are the coupling duals.
class SimplexTableau {
 public:
  SimplexTableau(int rows, int structural, int slacks, int artificials)
      : num_structural_(structural),
        num_slacks_(slacks),
        cols_(structural + slacks + artificials),
        rows_(rows, std::vector<Rational>(structural + slacks + artificials + 1)),
        obj_(structural + slacks + artificials + 1),
        basis_(rows) {}

  Rational& At(int r, int c) { return rows_[r][c]; }
  Rational& B(int r) { return rows_[r][cols_]; }
  Rational& Obj(int c) { return obj_[c]; }
  const Rational& ObjValue() const { return obj_[cols_]; }
  int SlackColumn(int i) const { return num_structural_ + i; }
  int ArtificialColumn(int i) const {
    return num_structural_ + num_slacks_ + i;
  }
  void SetBasis(int r, int c) { basis_[r] = c; }

  void Pivot(int r, int c) {
    const Rational piv = rows_[r][c];
    for (auto& x : rows_[r]) x /= piv;
    for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
      if (i == r) continue;
      const Rational factor = rows_[i][c];
      if (factor == 0) continue;
      for (int j = 0; j <= cols_; ++j) {
        if (rows_[r][j] != 0) rows_[i][j] -= factor * rows_[r][j];
      }
    }
    const Rational factor = obj_[c];
    if (factor != 0) {
      for (int j = 0; j <= cols_; ++j) {
        if (rows_[r][j] != 0) obj_[j] -= factor * rows_[r][j];
      }
    }
    basis_[r] = c;
  }

  // Pivots artificial variables out of the basis; a row with no nonzero
  // entry among real columns is redundant and can stay parked on its
  // artificial (it is all-zero and never interferes).
  void DriveOutArtificials() {
    for (int r = 0; r < static_cast<int>(rows_.size()); ++r) {
      if (basis_[r] < num_structural_ + num_slacks_) continue;
      for (int c = 0; c < num_structural_ + num_slacks_; ++c) {
        if (rows_[r][c] != 0) {
          Pivot(r, c);
          break;
        }
      }
    }
  }

  // Bland's rule: smallest eligible entering column, smallest-basic-index
  // tie break on the ratio test.  Maximization.
  void Optimize() {
    const int enterable = num_structural_ + num_slacks_;
    for (;;) {
      int entering = -1;
      for (int c = 0; c < enterable; ++c) {
        if (obj_[c] < 0) {
          entering = c;
          break;
        }
      }
      if (entering < 0) return;
      int leaving = -1;
      Rational best_num, best_den;
      for (int r = 0; r < static_cast<int>(rows_.size()); ++r) {
        const Rational& coef = rows_[r][entering];
        if (coef <= 0) continue;
        if (leaving < 0 || B(r) * best_den < best_num * coef ||
            (B(r) * best_den == best_num * coef &&
             basis_[r] < basis_[leaving])) {
          leaving = r;
          best_num = B(r);
          best_den = coef;
        }
      }
      if (leaving < 0) {
        throw std::logic_error("flow LP is bounded; no leaving row found");
      }
      Pivot(leaving, entering);
    }
  }

  Rational BasicValue(int col) const {
    for (int r = 0; r < static_cast<int>(rows_.size()); ++r) {
      if (basis_[r] == col) return rows_[r][cols_];
    }
    return Rational(0);
  }

 private:
  int num_structural_;
  int num_slacks_;
  int cols_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> obj_;
  std::vector<int> basis_;
};

}  // namespace

FlowSolution SolveFlowLp(const LayeredNetwork& net) {
  const auto& edges = net.edges();
  std::vector<int> vars;
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    if (edges[i].active) vars.push_back(i);
  }

  // Conservation rows: internal nodes incident to an active edge.
  std::vector<int> row_of_node(net.NodeCount(), -1);
  std::vector<int> cons_nodes;
  for (int vi : vars) {
    for (int node : {net.TailNode(edges[vi]), net.HeadNode(edges[vi])}) {
      if (net.IsInternalNode(node) && row_of_node[node] < 0) {
        row_of_node[node] = 0;  // mark
        cons_nodes.push_back(node);
      }
    }
  }
  std::sort(cons_nodes.begin(), cons_nodes.end());
  for (int i = 0; i < static_cast<int>(cons_nodes.size()); ++i) {
    row_of_node[cons_nodes[i]] = i;
  }

  // Coupling rows: original edges with an active copy.
  const int num_original = static_cast<int>(net.original_edges().size());
  std::vector<int> row_of_coupling(num_original, -1);
  std::vector<int> coupled;
  for (int vi : vars) {
    int oe = edges[vi].original_edge;
    if (oe >= 0 && row_of_coupling[oe] < 0) {
      row_of_coupling[oe] = 0;
      coupled.push_back(oe);
    }
  }
  std::sort(coupled.begin(), coupled.end());
  for (int i = 0; i < static_cast<int>(coupled.size()); ++i) {
    row_of_coupling[coupled[i]] = i;
  }

  const int num_cons = static_cast<int>(cons_nodes.size());
  const int num_coupling = static_cast<int>(coupled.size());
  const int num_rows = num_cons + num_coupling;
  SimplexTableau tableau(num_rows, static_cast<int>(vars.size()),
                         num_coupling, num_cons);

  for (int col = 0; col < static_cast<int>(vars.size()); ++col) {
    const LayerEdge& e = edges[vars[col]];
    int head = net.HeadNode(e);
    int tail = net.TailNode(e);
    if (net.IsInternalNode(head)) tableau.At(row_of_node[head], col) += 1;
    if (net.IsInternalNode(tail)) tableau.At(row_of_node[tail], col) -= 1;
    if (e.original_edge >= 0) {
      tableau.At(num_cons + row_of_coupling[e.original_edge], col) += 1;
    }
    if (e.layer == 0) tableau.Obj(col) = -1;  // reduced cost of c = +1
  }
  for (int i = 0; i < num_cons; ++i) {
    tableau.At(i, tableau.ArtificialColumn(i)) = 1;
    tableau.SetBasis(i, tableau.ArtificialColumn(i));
  }
  for (int i = 0; i < num_coupling; ++i) {
    tableau.At(num_cons + i, tableau.SlackColumn(i)) = 1;
    tableau.B(num_cons + i) = 1;
    tableau.SetBasis(num_cons + i, tableau.SlackColumn(i));
  }

  // The zero flow is feasible (conservation rows have b = 0), so no phase
  // one is needed; just unseat the artificials before optimizing.
  tableau.DriveOutArtificials();
  tableau.Optimize();

  FlowSolution sol;
  sol.value = tableau.ObjValue();
  sol.flow.assign(edges.size(), Rational(0));
  for (int col = 0; col < static_cast<int>(vars.size()); ++col) {
    sol.flow[vars[col]] = tableau.BasicValue(col);
  }

  // Duals of the solved system, read from the identity columns.
  std::vector<Rational> y(num_cons), w(num_coupling);
  for (int i = 0; i < num_cons; ++i) y[i] = tableau.Obj(tableau.ArtificialColumn(i));
  for (int i = 0; i < num_coupling; ++i) w[i] = tableau.Obj(tableau.SlackColumn(i));

  // Extend to the full redirected system.  Nodes pruned away fall in two
  // classes: reachable from the source but unable to reach the sink (all
  // their flow is dead-ended; potential +M) and unreachable from the
  // source (potential -M).  Any M larger than every solved dual value
  // makes all pruned-edge dual constraints hold; see the checks in
  // VerifyCertificate.
  Rational big(1);
  for (const Rational& q : y) {
    Rational a = abs(q);
    if (a > big) big = a;
  }
  for (const Rational& q : w) {
    if (q > big) big = q;
  }
  big += 1;

  std::vector<std::vector<int>> out(net.NodeCount()), in(net.NodeCount());
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    if (edges[i].removed) continue;
    out[net.TailNode(edges[i])].push_back(i);
    in[net.HeadNode(edges[i])].push_back(i);
  }
  std::vector<char> fwd(net.NodeCount(), 0), bwd(net.NodeCount(), 0);
  std::deque<int> queue = {net.SourceNode()};
  fwd[net.SourceNode()] = 1;
  while (!queue.empty()) {
    int node = queue.front();
    queue.pop_front();
    for (int ei : out[node]) {
      int next = net.HeadNode(edges[ei]);
      if (!fwd[next]) {
        fwd[next] = 1;
        queue.push_back(next);
      }
    }
  }
  queue = {net.SinkNode()};
  bwd[net.SinkNode()] = 1;
  while (!queue.empty()) {
    int node = queue.front();
    queue.pop_front();
    for (int ei : in[node]) {
      int next = net.TailNode(edges[ei]);
      if (!bwd[next]) {
        bwd[next] = 1;
        queue.push_back(next);
      }
    }
  }

  sol.node_potential.assign(net.NodeCount(), Rational(0));
  for (int node = 0; node < net.NodeCount(); ++node) {
    if (!net.IsInternalNode(node)) continue;
    if (row_of_node[node] >= 0) {
      sol.node_potential[node] = y[row_of_node[node]];
    } else if (fwd[node] && !bwd[node]) {
      sol.node_potential[node] = big;
    } else if (!fwd[node]) {
      sol.node_potential[node] = -big;
    }
  }
  sol.coupling_dual.assign(num_original, Rational(0));
  for (int oe = 0; oe < num_original; ++oe) {
    if (row_of_coupling[oe] >= 0) sol.coupling_dual[oe] = w[row_of_coupling[oe]];
  }
  return sol;
}

bool VerifyCertificate(const LayeredNetwork& net, const FlowSolution& sol) {
  const auto& edges = net.edges();
  const int num_original = static_cast<int>(net.original_edges().size());
  if (sol.flow.size() != edges.size()) return false;
  if (sol.node_potential.size() != static_cast<size_t>(net.NodeCount())) {
    return false;
  }
  if (sol.coupling_dual.size() != static_cast<size_t>(num_original)) {
    return false;
  }

  // Primal feasibility.
  std::vector<Rational> net_flow(net.NodeCount());  // inflow - outflow
  std::vector<Rational> coupling_load(num_original);
  Rational source_out(0);
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    const Rational& f = sol.flow[i];
    if (edges[i].removed) {
      if (f != 0) return false;
      continue;
    }
    if (f < 0) return false;
    net_flow[net.HeadNode(edges[i])] += f;
    net_flow[net.TailNode(edges[i])] -= f;
    if (edges[i].original_edge >= 0) coupling_load[edges[i].original_edge] += f;
    if (edges[i].layer == 0) source_out += f;
  }
  for (int node = 0; node < net.NodeCount(); ++node) {
    if (net.IsInternalNode(node) && net_flow[node] != 0) return false;
  }
  for (int oe = 0; oe < num_original; ++oe) {
    if (coupling_load[oe] > 1) return false;
  }
  if (source_out != sol.value) return false;

  // Dual feasibility.  Source and sink potentials are fixed at zero by
  // convention (they have no conservation rows).
  Rational dual_value(0);
  for (int oe = 0; oe < num_original; ++oe) {
    if (sol.coupling_dual[oe] < 0) return false;
    dual_value += sol.coupling_dual[oe];
  }
  auto potential = [&](int node) -> Rational {
    if (node == net.SourceNode() || node == net.SinkNode()) return Rational(0);
    return sol.node_potential[node];
  };
  for (const auto& e : edges) {
    if (e.removed) continue;
    Rational lhs = potential(net.HeadNode(e)) - potential(net.TailNode(e));
    if (e.original_edge >= 0) lhs += sol.coupling_dual[e.original_edge];
    Rational cost = e.layer == 0 ? Rational(1) : Rational(0);
    if (lhs < cost) return false;
  }

  // Matching objectives certify optimality of both solutions.
  return dual_value == sol.value;
}

void WriteLpFormat(const LayeredNetwork& net, std::ostream& out) {
  const auto& edges = net.edges();
  auto var_name = [&](int i) {
    const LayerEdge& e = edges[i];
    if (e.layer == 0) return "zs_" + std::to_string(e.head);
    return "z" + std::to_string(e.layer) + "_" + std::to_string(e.tail) +
           "_" + std::to_string(e.head);
  };
  out << "\\ Flow_k layered LP: k=" << net.k()
      << " sink=" << net.sink_vertex() << "\n";
  out << "Maximize\n obj:";
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    if (edges[i].layer == 0) out << " + " << var_name(i);
  }
  out << "\nSubject To\n";
  std::vector<std::vector<int>> incident(net.NodeCount());
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    if (edges[i].removed) continue;
    incident[net.HeadNode(edges[i])].push_back(i + 1);
    incident[net.TailNode(edges[i])].push_back(-(i + 1));
  }
  for (int node = 0; node < net.NodeCount(); ++node) {
    if (!net.IsInternalNode(node) || incident[node].empty()) continue;
    out << " c" << node << ":";
    for (int signed_i : incident[node]) {
      out << (signed_i > 0 ? " + " : " - ") << var_name(abs(signed_i) - 1);
    }
    out << " = 0\n";
  }
  for (int oe = 0; oe < static_cast<int>(net.original_edges().size()); ++oe) {
    bool any = false;
    std::string terms;
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
      if (!edges[i].removed && edges[i].original_edge == oe) {
        terms += " + " + var_name(i);
        any = true;
      }
    }
    if (any) out << " cap" << oe << ":" << terms << " <= 1\n";
  }
  out << "End\n";
}

}  // namespace pdpsearch
