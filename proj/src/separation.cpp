#include "hubnet/separation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "hubnet/lp.hpp"
#include "hubnet/mincut.hpp"

namespace hubnet {

namespace {

constexpr double kViol = 1e-6;

void check_subset(int n, const std::vector<int>& S, std::vector<char>& in_s) {
  if (S.empty()) throw std::invalid_argument("node set must be nonempty");
  if ((int)S.size() >= n) throw std::invalid_argument("node set must be a proper subset");
  in_s.assign(n, 0);
  for (int v : S) {
    if (v < 0 || v >= n) throw std::invalid_argument("node out of range");
    if (in_s[v]) throw std::invalid_argument("duplicate node in set");
    in_s[v] = 1;
  }
}

// Q(delta+(S)): crossing flow minus crossing demand.  Negative means the
// aggregated demand row for S is violated.
double crossing_surplus(const Instance& inst, const Flows& f, const std::vector<char>& in_s) {
  double v = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    if (!in_s[i]) continue;
    for (int j = 0; j < inst.n; ++j) {
      if (j == i || in_s[j]) continue;
      v += f.t_at(i, j) + f.h1_at(i, j) + f.h2_at(i, j) - inst.w(i, j);
    }
  }
  return v;
}

std::vector<int> members(const std::vector<char>& in_s) {
  std::vector<int> out;
  for (int i = 0; i < (int)in_s.size(); ++i)
    if (in_s[i]) out.push_back(i);
  return out;
}

}  // namespace

std::vector<std::vector<int>> separate_demand(const Instance& inst, const Flows& fbar,
                                              DemandSepMode mode) {
  const int n = inst.n;
  for (const auto* block : {&fbar.t, &fbar.h1, &fbar.h2})
    for (double v : *block)
      if (!std::isfinite(v)) throw std::invalid_argument("flow values must be finite");

  switch (mode.kind) {
    case DemandSepMode::Heuristic: {
      // Min-cut tree over the clipped surpluses.  Arcs already at or below
      // their demand contribute nothing, so light cuts in this graph are
      // places where little spare flow crosses; each candidate side is then
      // re-checked against the real directed surplus.
      CapacityGraph g;
      g.n = n;
      g.cap = Mat(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          double q = fbar.t_at(i, j) + fbar.h1_at(i, j) + fbar.h2_at(i, j) - inst.w(i, j);
          if (q > 0.0) {
            g.cap(i, j) += q;
            g.cap(j, i) += q;
          }
        }
      auto take = [&](const std::vector<char>& side) {
        return crossing_surplus(inst, fbar, side) < -kViol;
      };
      auto side = first_violated_cut(g, take);
      if (!side) return {};
      return {members(*side)};
    }

    case DemandSepMode::Exact: {
      if (n > 20)
        throw std::invalid_argument(
            "exact demand separation enumerates every node subset; it stops at n = 20");
      Mat qb(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (j != i)
            qb(i, j) = fbar.t_at(i, j) + fbar.h1_at(i, j) + fbar.h2_at(i, j) - inst.w(i, j);
      // Gray-code walk: one node enters or leaves per step, so the surplus
      // updates in O(n).  The winner is re-evaluated from scratch at the
      // end to shed any accumulated drift.
      std::vector<char> in_s(n, 0);
      std::vector<char> best_set;
      double val = 0.0, best = -kViol;
      int size = 0;
      const unsigned long long total = 1ULL << n;
      for (unsigned long long g = 1; g < total; ++g) {
        int v = std::countr_zero(g);
        double dv = 0.0;
        if (!in_s[v]) {
          for (int u = 0; u < n; ++u) {
            if (u == v) continue;
            if (in_s[u])
              dv -= qb(u, v);
            else
              dv += qb(v, u);
          }
          in_s[v] = 1;
          ++size;
        } else {
          for (int u = 0; u < n; ++u) {
            if (u == v) continue;
            if (in_s[u])
              dv += qb(u, v);
            else
              dv -= qb(v, u);
          }
          in_s[v] = 0;
          --size;
        }
        val += dv;
        if (size > 0 && size < n && val < best) {
          best = val;
          best_set = in_s;
        }
      }
      if (best_set.empty()) return {};
      if (crossing_surplus(inst, fbar, best_set) >= -kViol) return {};
      return {members(best_set)};
    }

    case DemandSepMode::Components: {
      if (!(mode.eps > 0.0 && mode.eps <= 1.0))
        throw std::invalid_argument("component threshold must lie in (0, 1]");
      // The flow pins the design variables from below (h1 <= O x1 and so
      // on), so those implied values stand in for the design the caller did
      // not pass.  For integral designs with routed flows this reduces to
      // the plain support graph.
      auto implied = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
      std::vector<int> up(n);
      std::iota(up.begin(), up.end(), 0);
      auto find = [&](int a) {
        while (up[a] != a) {
          up[a] = up[up[a]];
          a = up[a];
        }
        return a;
      };
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double wgt = implied(fbar.h1_at(i, j), inst.O[i]) +
                       implied(fbar.h1_at(j, i), inst.O[j]) +
                       implied(fbar.h2_at(i, j), inst.D[j]) +
                       implied(fbar.h2_at(j, i), inst.D[i]) +
                       implied(fbar.t_at(i, j) + fbar.t_at(j, i), inst.Wbar);
          if (wgt >= mode.eps) up[find(i)] = find(j);
        }
      std::vector<std::vector<char>> comps;
      std::vector<int> slot(n, -1);
      for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (slot[r] < 0) {
          slot[r] = (int)comps.size();
          comps.emplace_back(n, 0);
        }
        comps[slot[r]][i] = 1;
      }
      std::vector<std::vector<int>> out;
      if (comps.size() < 2) return out;
      for (const auto& side : comps)
        if (crossing_surplus(inst, fbar, side) < -kViol) out.push_back(members(side));
      return out;
    }
  }
  throw std::logic_error("unhandled separation mode");
}

CutRow make_demand_row(const Instance& inst, const std::vector<int>& S) {
  const int n = inst.n;
  VarMap vm{n};
  std::vector<char> in_s;
  check_subset(n, S, in_s);

  CutRow cut;
  cut.family = RowFamily::Demand;
  for (int i = 0; i < n; ++i) {
    if (!in_s[i]) continue;
    for (int j = 0; j < n; ++j) {
      if (in_s[j] || j == i) continue;
      cut.coef.push_back({vm.t(i, j), 1.0});
      cut.coef.push_back({vm.h1(i, j), 1.0});
      cut.coef.push_back({vm.h2(i, j), 1.0});
      cut.rhs += inst.w(i, j);
    }
  }
  if (inst.policy == Policy::SA) {
    // an origin allocated across the cut drags its same-side demand over it
    for (int i = 0; i < n; ++i) {
      double same = 0.0;
      for (int d = 0; d < n; ++d)
        if (d != i && in_s[d] == in_s[i]) same += inst.w(i, d);
      if (same <= 0.0) continue;
      for (int k = 0; k < n; ++k)
        if (k != i && in_s[k] != in_s[i]) cut.coef.push_back({vm.x1(i, k), -same});
    }
  }
  return cut;
}

CutRow make_connectivity_row(const Instance& inst, const std::vector<int>& S, int i, int j) {
  const int n = inst.n;
  VarMap vm{n};
  std::vector<char> in_s;
  check_subset(n, S, in_s);
  if (i < 0 || i >= n || j < 0 || j >= n || !in_s[i] || in_s[j])
    throw std::invalid_argument("certifying pair must straddle the node set");

  CutRow cut;
  cut.family = RowFamily::Connectivity;
  for (int k = 0; k < n; ++k) {
    if (!in_s[k]) continue;
    for (int m = 0; m < n; ++m)
      if (!in_s[m] && m != k) cut.coef.push_back({vm.y(k, m), 1.0});
  }
  cut.coef.push_back({vm.z(i), -1.0});
  cut.coef.push_back({vm.z(j), -1.0});
  cut.rhs = -1.0;
  return cut;
}

std::vector<CutRow> separate_connectivity(const Instance& inst, const std::vector<double>& zbar,
                                          const std::vector<double>& ybar) {
  const int n = inst.n;
  if ((int)zbar.size() != n || (int)ybar.size() != n * (n - 1) / 2)
    throw std::invalid_argument("design value vectors have the wrong length");
  for (const auto* block : {&zbar, &ybar})
    for (double v : *block)
      if (!(v > -kViol && v < 1.0 + kViol))
        throw std::invalid_argument("design values must lie in [0, 1]");
  if (n < 2) return {};

  CapacityGraph g;
  g.n = n;
  g.cap = Mat(n, n);
  for (int e = 0; e < n * (n - 1) / 2; ++e) {
    if (ybar[e] <= 0.0) continue;
    auto [k, m] = edge_nodes(n, e);
    g.cap(k, m) = ybar[e];
    g.cap(m, k) = ybar[e];
  }
  GomoryHuTree tree = gomory_hu(g);

  std::vector<std::vector<int>> adj(n);
  for (int v = 1; v < n; ++v) {
    adj[v].push_back(tree.parent[v]);
    adj[tree.parent[v]].push_back(v);
  }

  std::vector<CutRow> cuts;
  for (int v = 1; v < n; ++v) {
    // the side of v when its tree edge is removed
    std::vector<char> side(n, 0);
    std::vector<int> stack{v};
    side[v] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int x : adj[u]) {
        if (side[x]) continue;
        if ((u == v && x == tree.parent[v]) || (x == v && u == tree.parent[v])) continue;
        side[x] = 1;
        stack.push_back(x);
      }
    }
    double cross = 0.0;
    for (int k = 0; k < n; ++k)
      for (int m = k + 1; m < n; ++m)
        if (side[k] != side[m]) cross += ybar[edge_index(n, k, m)];
    int a = -1, b = -1;
    for (int i = 0; i < n; ++i) {
      if (side[i] && (a < 0 || zbar[i] > zbar[a])) a = i;
      if (!side[i] && (b < 0 || zbar[i] > zbar[b])) b = i;
    }
    if (cross < zbar[a] + zbar[b] - 1.0 - kViol)
      cuts.push_back(make_connectivity_row(inst, members(side), a, b));
  }
  return cuts;
}

std::optional<CutRow> separate_feasibility(const Instance& inst, const Design& sbar,
                                           const Flows& fbar) {
  AuxLp aux = build_aux_lp(inst, sbar, &fbar, false);
  if (aux.trivially_infeasible) return std::nullopt;

  lp::Solver solver;
  lp::Outcome out = solver.solve(aux.prob);
  if (out.status == lp::Status::Optimal) return std::nullopt;
  if (out.status != lp::Status::Infeasible || out.farkas.empty())
    throw lp::SolverFault("disaggregation probe ended without a usable certificate");

  const int n = inst.n;
  const int na = n * (n - 1);

  // Certificate values, rescaled so the largest entry is 1 and sorted into
  // the row families they came from.
  std::vector<double> ray = out.farkas;
  double scale = 0.0;
  for (double v : ray) scale = std::max(scale, std::fabs(v));
  if (scale <= 0.0) return std::nullopt;
  for (double& v : ray) v /= scale;

  std::vector<double> access(n, 0.0), hubout(n, 0.0);
  Mat deliver(n, n), balance(n, n);
  std::vector<double> sig(na, 0.0), tau1(na, 0.0), tau2(na, 0.0);
  std::vector<char> has_t(na, 0), has_h1(na, 0), has_h2(na, 0);
  for (size_t r = 0; r < aux.rows.size(); ++r) {
    const AuxRow& row = aux.rows[r];
    const double f = ray[r];
    switch (row.kind) {
      case AuxRowKind::Access:
        access[row.origin] = f;
        break;
      case AuxRowKind::HubOut:
        hubout[row.origin] = f;
        break;
      case AuxRowKind::Deliver:
        deliver(row.origin, row.to) = f;
        break;
      case AuxRowKind::Balance:
        balance(row.origin, row.from) = f;
        break;
      case AuxRowKind::CapT:
        sig[arc_index(n, row.from, row.to)] = f;
        has_t[arc_index(n, row.from, row.to)] = 1;
        break;
      case AuxRowKind::CapH1:
        tau1[arc_index(n, row.from, row.to)] = f;
        has_h1[arc_index(n, row.from, row.to)] = 1;
        break;
      case AuxRowKind::CapH2:
        tau2[arc_index(n, row.from, row.to)] = f;
        has_h2[arc_index(n, row.from, row.to)] = 1;
        break;
      default:
        throw std::logic_error("unexpected row kind in the disaggregation probe");
    }
  }

  // Arcs the probe never capped still exist for other designs.  Give each
  // one the most negative capacity multiplier its columns force, and zero
  // when the certificate never pushes flow onto it; that keeps the folded
  // inequality valid no matter which arcs another design activates.
  for (int a = 0; a < na; ++a) {
    auto [u, v] = arc_nodes(n, a);
    if (!has_t[a]) {
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        if (i == v || inst.O[i] <= 0.0) continue;
        double pi = (i == u ? hubout[u] : balance(i, u)) - balance(i, v);
        worst = std::max(worst, pi);
      }
      sig[a] = -worst;
    }
    if (!has_h1[a] && inst.O[u] > 0.0) tau1[a] = -std::max(0.0, access[u] - balance(u, v));
    if (!has_h2[a]) {
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        if (i == v || inst.O[i] <= 0.0) continue;
        double pi = (i == u ? hubout[u] : balance(i, u)) + deliver(i, v);
        worst = std::max(worst, pi);
      }
      tau2[a] = -worst;
    }
  }

  // Fold the certificate over the right-hand sides.  Supply rows carry
  // O_i(1-z_i) or O_i z_i, deliveries w_ij(1-z_j), hub balances -w_ik z_k,
  // and the capacity rows the master flow variables themselves.
  double c0 = 0.0;
  std::vector<double> az(n, 0.0);
  for (int i = 0; i < n; ++i) {
    c0 += access[i] * inst.O[i];
    az[i] += (hubout[i] - access[i]) * inst.O[i];
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      c0 += deliver(i, j) * inst.w(i, j);
      az[j] -= (deliver(i, j) + balance(i, j)) * inst.w(i, j);
    }

  const double tiny = 1e-12;
  VarMap vm{n};
  CutRow cut;
  cut.family = RowFamily::Feasibility;
  cut.rhs = c0;
  for (int k = 0; k < n; ++k)
    if (std::fabs(az[k]) > tiny) cut.coef.push_back({vm.z(k), -az[k]});
  for (int a = 0; a < na; ++a) {
    auto [u, v] = arc_nodes(n, a);
    if (std::fabs(sig[a]) > tiny) cut.coef.push_back({vm.t(u, v), -sig[a]});
    if (std::fabs(tau1[a]) > tiny) cut.coef.push_back({vm.h1(u, v), -tau1[a]});
    if (std::fabs(tau2[a]) > tiny) cut.coef.push_back({vm.h2(u, v), -tau2[a]});
  }

  double viol = c0;
  for (int k = 0; k < n; ++k)
    if (sbar.z[k]) viol += az[k];
  for (int a = 0; a < na; ++a) {
    auto [u, v] = arc_nodes(n, a);
    viol += sig[a] * fbar.t_at(u, v) + tau1[a] * fbar.h1_at(u, v) + tau2[a] * fbar.h2_at(u, v);
  }
  if (viol <= kViol) return std::nullopt;
  return cut;
}

PathCatalog build_path_catalog(const Instance& inst) {
  const int n = inst.n;
  PathCatalog cat;
  cat.n = n;
  for (int o = 0; o < n; ++o) {
    for (int d = 0; d < n; ++d) {
      if (d == o || inst.w(o, d) <= 0.0) continue;
      PathCatalog::Commodity com;
      com.o = o;
      com.d = d;
      com.w = inst.w(o, d);
      // entering at the origin itself or leaving at the destination itself
      // rides a fictitious zero-cost leg
      auto leg_in = [&](int k) { return k == o ? 0.0 : inst.gamma * inst.c(o, k); };
      auto leg_out = [&](int k) { return k == d ? 0.0 : inst.theta * inst.c(k, d); };
      com.ckk.resize(n);
      com.one.reserve(n);
      for (int k = 0; k < n; ++k) {
        double cost = leg_in(k) + leg_out(k);
        com.ckk[k] = cost;
        com.one.push_back({k, cost});
      }
      std::sort(com.one.begin(), com.one.end(), [](const auto& a, const auto& b) {
        return a.cost != b.cost ? a.cost < b.cost : a.k < b.k;
      });
      com.two.reserve(n * (n - 1) / 2);
      for (int k = 0; k < n; ++k)
        for (int m = k + 1; m < n; ++m) {
          PathCatalog::TwoHub th;
          th.k = k;
          th.m = m;
          th.fwd = leg_in(k) + inst.alpha * inst.c(k, m) + leg_out(m);
          th.rev = leg_in(m) + inst.alpha * inst.c(m, k) + leg_out(k);
          th.best = std::min(th.fwd, th.rev);
          com.two.push_back(th);
        }
      std::sort(com.two.begin(), com.two.end(), [](const auto& a, const auto& b) {
        if (a.best != b.best) return a.best < b.best;
        return a.k != b.k ? a.k < b.k : a.m < b.m;
      });
      cat.com.push_back(std::move(com));
    }
  }
  return cat;
}

RPathIndexSets compute_index_sets(const PathCatalog& cat, const Design& sbar,
                                  const RFlowResult& rflow) {
  if (!rflow.feasible) throw std::invalid_argument("index sets need a fully routed design");
  if (rflow.paths.size() != cat.com.size())
    throw std::invalid_argument("catalog and routing disagree on the commodity list");

  RPathIndexSets sets;
  sets.n = cat.n;
  sets.com.reserve(cat.com.size());
  for (size_t r = 0; r < cat.com.size(); ++r) {
    const PathCatalog::Commodity& cc = cat.com[r];
    const RPath& p = rflow.paths[r];
    if (p.o != cc.o || p.d != cc.d)
      throw std::invalid_argument("catalog and routing disagree on the commodity list");

    RPathIndexSets::Commodity com;
    com.o = cc.o;
    com.d = cc.d;
    com.w = cc.w;
    com.cbar = p.cost;
    com.hub_in = sbar.hub(p.o) ? p.o : p.nodes[1];
    com.hub_out = sbar.hub(p.d) ? p.d : p.nodes[p.nodes.size() - 2];
    for (size_t t = 0; t + 1 < p.nodes.size(); ++t)
      if (sbar.hub(p.nodes[t]) && sbar.hub(p.nodes[t + 1])) ++com.interhub_arcs;
    com.excluded = com.interhub_arcs >= 2;

    com.in_z.assign(cat.n, 0);
    for (const auto& oh : cc.one) {
      if (!(oh.cost < com.cbar)) break;
      com.zset.push_back(oh.k);
      com.in_z[oh.k] = 1;
    }
    for (const auto& th : cc.two) {
      if (!(th.best < com.cbar)) break;
      double thr = std::min({com.cbar, cc.ckk[th.k], cc.ckk[th.m]});
      bool fwd = th.fwd < thr;
      bool rev = th.rev < thr;
      if (fwd || rev) com.yset.push_back({th.k, th.m, fwd, rev});
    }
    sets.com.push_back(std::move(com));
  }
  return sets;
}

std::vector<CutRow> make_optimality_cuts(const Instance& inst, const Design& sbar,
                                         const RFlowResult& rflow, const RPathIndexSets& sets) {
  if (inst.kind != ModelKind::HMedian)
    throw InstanceError("optimality rows assume rearranging the backbone is free; "
                        "only the hub-setup-only objective qualifies");
  if (!rflow.feasible) throw std::invalid_argument("optimality rows need a fully routed design");
  const int n = inst.n;
  if (sets.n != n || sets.com.size() != rflow.paths.size())
    throw std::invalid_argument("index sets do not match the routing");

  VarMap vm{n};
  const int na = n * (n - 1);

  // Kept commodities bucketed by the arcs their routed path uses.
  std::vector<std::vector<int>> by_arc(na), by_access(na), by_dist(na);
  for (int r = 0; r < (int)sets.com.size(); ++r) {
    const auto& c = sets.com[r];
    if (c.excluded) continue;
    if (c.interhub_arcs == 1) by_arc[arc_index(n, c.hub_in, c.hub_out)].push_back(r);
    if (c.o != c.hub_in) by_access[arc_index(n, c.o, c.hub_in)].push_back(r);
    if (c.d != c.hub_out) by_dist[arc_index(n, c.hub_out, c.d)].push_back(r);
  }

  std::vector<double> acc(vm.nvars(), 0.0);
  std::vector<CutRow> cuts;
  auto flush = [&](double rhs) {
    CutRow cut;
    cut.family = RowFamily::Optimality;
    cut.rhs = rhs;
    for (int col = 0; col < vm.nvars(); ++col) {
      if (std::fabs(acc[col]) > 1e-12) cut.coef.push_back({col, acc[col]});
      acc[col] = 0.0;
    }
    cuts.push_back(std::move(cut));
  };

  // Escape terms: every strictly cheaper service the adversary design could
  // open absorbs the demand this row would otherwise pin down.  A reroute
  // through several cheaper hubs must not collapse the compensation below
  // one, so the overlap discount is a star of edges anchored at the
  // cheapest such hub rather than all pairs.  Orientations whose first
  // (keep_in) or second (keep_out) hub coincides with the arc being pinned
  // do not leave that arc and are no escape.
  auto compensate = [&](const RPathIndexSets::Commodity& c, int keep_in, int keep_out) {
    for (int k : c.zset) acc[vm.z(k)] += c.w;
    for (size_t idx = 1; idx < c.zset.size(); ++idx)
      acc[vm.y(c.zset[0], c.zset[idx])] -= c.w;
    for (const auto& e : c.yset) {
      if (c.in_z[e.k] || c.in_z[e.m]) continue;
      bool escapes = (e.fwd && e.k != keep_in && e.m != keep_out) ||
                     (e.rev && e.m != keep_in && e.k != keep_out);
      if (escapes) acc[vm.y(e.k, e.m)] += c.w;
    }
  };

  const bool sa = inst.policy == Policy::SA;

  // One row per used interhub direction of every open edge.
  for (int e = 0; e < vm.edges(); ++e) {
    if (!sbar.y[e]) continue;
    auto [i, j] = edge_nodes(n, e);
    for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
      const auto& lst = by_arc[arc_index(n, a, b)];
      if (lst.empty()) continue;
      acc[vm.t(a, b)] += 1.0;
      double shipped = 0.0, slack = 0.0;
      for (int r : lst) {
        const auto& c = sets.com[r];
        shipped += c.w;
        if (sa) {
          // single allocation reroutes only by re-allocating an endpoint
          if (c.o != a) {
            acc[vm.x1(c.o, a)] -= c.w;
            slack += c.w;
          }
          if (c.d != b) {
            acc[vm.x2(b, c.d)] -= c.w;
            slack += c.w;
          }
        } else {
          compensate(c, -1, -1);
        }
      }
      acc[vm.y(i, j)] -= shipped;
      flush(-slack);
    }
  }

  // Under single allocation the access and distribution rows are implied by
  // the allocation equalities, so only multiple allocation emits them.
  if (!sa) {
    for (int a = 0; a < na; ++a) {
      if (!by_access[a].empty()) {
        auto [o, hi] = arc_nodes(n, a);
        acc[vm.h1(o, hi)] += 1.0;
        for (int r : by_access[a]) {
          const auto& c = sets.com[r];
          compensate(c, hi, -1);
          if (c.interhub_arcs == 0)
            acc[vm.z(hi)] -= c.w;
          else
            acc[vm.y(hi, c.hub_out)] -= c.w;
        }
        flush(0.0);
      }
      if (!by_dist[a].empty()) {
        auto [hj, d] = arc_nodes(n, a);
        acc[vm.h2(hj, d)] += 1.0;
        for (int r : by_dist[a]) {
          const auto& c = sets.com[r];
          compensate(c, -1, hj);
          if (c.interhub_arcs == 0)
            acc[vm.z(hj)] -= c.w;
          else
            acc[vm.y(c.hub_in, hj)] -= c.w;
        }
        flush(0.0);
      }
    }
  }
  return cuts;
}

}  // namespace hubnet
