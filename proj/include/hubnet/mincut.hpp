#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hubnet/dense.hpp"

namespace hubnet {

struct MinCutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense capacity graph on nodes 0..n-1.  cap(i,j) is the capacity of arc
// (i,j); entries below 1e-9 are treated as absent.
struct CapacityGraph {
  int n = 0;
  Mat cap;
};

struct MaxFlowResult {
  double value = 0.0;
  std::vector<char> side;  // 1 on the s side of a minimum cut
};

// Edmonds-Karp.  Works on directed capacities.
MaxFlowResult max_flow(const CapacityGraph& g, int s, int t);

// Gusfield's Gomory-Hu tree (n-1 max-flow calls, no contraction).  Requires
// symmetric capacities; parent[0] == -1.  The minimum s-t cut value equals
// the smallest label on the tree path between s and t.
struct GomoryHuTree {
  std::vector<int> parent;
  std::vector<double> label;  // label[i] = cut value between i and parent[i]
};
GomoryHuTree gomory_hu(const CapacityGraph& g);

double tree_min_cut(const GomoryHuTree& t, int u, int v);

// Runs the Gusfield sweep but stops at the first max-flow whose cut side
// (or its complement) satisfies `take`.  Returns that side, or nullopt if
// the sweep completes without a hit.
std::optional<std::vector<char>> first_violated_cut(
    const CapacityGraph& g, const std::function<bool(const std::vector<char>&)>& take);

}  // namespace hubnet
