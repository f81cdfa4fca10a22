#include "hubnet/mincut.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace hubnet {

namespace {

constexpr double kZero = 1e-9;

void check_graph(const CapacityGraph& g) {
  if (g.n < 2) throw MinCutError("graph needs at least two nodes");
  if (g.cap.rows() != g.n || g.cap.cols() != g.n)
    throw MinCutError("capacity matrix shape mismatch");
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      double v = g.cap(i, j);
      if (!std::isfinite(v) || v < 0.0) throw MinCutError("bad capacity entry");
    }
}

void check_symmetric(const CapacityGraph& g) {
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (std::abs(g.cap(i, j) - g.cap(j, i)) > kZero * (1.0 + std::abs(g.cap(i, j))))
        throw MinCutError("tree construction needs symmetric capacities");
}

}  // namespace

MaxFlowResult max_flow(const CapacityGraph& g, int s, int t) {
  check_graph(g);
  if (s == t || s < 0 || t < 0 || s >= g.n || t >= g.n)
    throw MinCutError("bad terminal pair");
  int n = g.n;
  Mat res = g.cap;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (res(i, j) < kZero) res(i, j) = 0.0;
  double value = 0.0;
  std::vector<int> pred(n);
  for (;;) {
    std::fill(pred.begin(), pred.end(), -1);
    pred[s] = s;
    std::deque<int> q{s};
    while (!q.empty() && pred[t] < 0) {
      int u = q.front();
      q.pop_front();
      for (int v = 0; v < n; ++v)
        if (pred[v] < 0 && res(u, v) > kZero) {
          pred[v] = u;
          q.push_back(v);
        }
    }
    if (pred[t] < 0) break;
    double aug = std::numeric_limits<double>::infinity();
    for (int v = t; v != s; v = pred[v]) aug = std::min(aug, res(pred[v], v));
    for (int v = t; v != s; v = pred[v]) {
      res(pred[v], v) -= aug;
      res(v, pred[v]) += aug;
    }
    value += aug;
  }
  MaxFlowResult out;
  out.value = value;
  out.side.assign(n, 0);
  for (int v = 0; v < n; ++v) out.side[v] = pred[v] >= 0 ? 1 : 0;
  return out;
}

GomoryHuTree gomory_hu(const CapacityGraph& g) {
  check_graph(g);
  check_symmetric(g);
  int n = g.n;
  GomoryHuTree t;
  t.parent.assign(n, 0);
  t.parent[0] = -1;
  t.label.assign(n, 0.0);
  for (int s = 1; s < n; ++s) {
    int p = t.parent[s];
    MaxFlowResult mf = max_flow(g, s, p);
    t.label[s] = mf.value;
    for (int i = 0; i < n; ++i)
      if (i != s && i != p && mf.side[i] && t.parent[i] == p) t.parent[i] = s;
    if (t.parent[p] >= 0 && mf.side[t.parent[p]]) {
      t.parent[s] = t.parent[p];
      t.parent[p] = s;
      std::swap(t.label[s], t.label[p]);
      t.label[p] = mf.value;
    }
  }
  return t;
}

double tree_min_cut(const GomoryHuTree& t, int u, int v) {
  int n = (int)t.parent.size();
  if (u == v || u < 0 || v < 0 || u >= n || v >= n) throw MinCutError("bad tree query");
  std::vector<char> onpath(n, 0);
  for (int x = u; x >= 0; x = t.parent[x]) onpath[x] = 1;
  double best = std::numeric_limits<double>::infinity();
  int x = v;
  while (!onpath[x]) {
    best = std::min(best, t.label[x]);
    x = t.parent[x];
  }
  // x is the meeting point; climb from u to it
  for (int y = u; y != x; y = t.parent[y]) best = std::min(best, t.label[y]);
  return best;
}

std::optional<std::vector<char>> first_violated_cut(
    const CapacityGraph& g, const std::function<bool(const std::vector<char>&)>& take) {
  check_graph(g);
  check_symmetric(g);
  int n = g.n;
  std::vector<int> parent(n, 0);
  parent[0] = -1;
  std::vector<double> label(n, 0.0);
  for (int s = 1; s < n; ++s) {
    int p = parent[s];
    MaxFlowResult mf = max_flow(g, s, p);
    if (take(mf.side)) return mf.side;
    std::vector<char> comp(n);
    for (int i = 0; i < n; ++i) comp[i] = mf.side[i] ? 0 : 1;
    if (take(comp)) return comp;
    label[s] = mf.value;
    for (int i = 0; i < n; ++i)
      if (i != s && i != p && mf.side[i] && parent[i] == p) parent[i] = s;
    if (parent[p] >= 0 && mf.side[parent[p]]) {
      parent[s] = parent[p];
      parent[p] = s;
      std::swap(label[s], label[p]);
      label[p] = mf.value;
    }
  }
  return std::nullopt;
}

}  // namespace hubnet
