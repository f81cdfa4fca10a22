#include "hubnet/subproblem.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hubnet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SupportGraph support_graph(const Instance& inst, const Design& s) {
  std::string why;
  if (!design_ok(inst, s, &why))
    throw std::invalid_argument("support_graph: " + why);

  SupportGraph sg;
  sg.n = inst.n;
  sg.hub.assign(inst.n, 0);
  for (int k = 0; k < inst.n; ++k) sg.hub[k] = s.hub(k) ? 1 : 0;
  sg.out.assign(inst.n, {});
  sg.in.assign(inst.n, {});

  auto add = [&](int from, int to, ArcKind kind, double cost) {
    int id = static_cast<int>(sg.arcs.size());
    sg.arcs.push_back(SupportArc{from, to, kind, cost});
    sg.out[from].push_back(id);
    sg.in[to].push_back(id);
  };

  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j) {
      if (i == j) continue;
      if (s.access(i, j)) add(i, j, ArcKind::Access, inst.gamma * inst.c(i, j));
      if (s.dist(i, j)) add(i, j, ArcKind::Distribution, inst.theta * inst.c(i, j));
    }
  for (int k = 0; k < inst.n; ++k)
    for (int m = k + 1; m < inst.n; ++m)
      if (s.link(k, m)) {
        add(k, m, ArcKind::Interhub, inst.alpha * inst.c(k, m));
        add(m, k, ArcKind::Interhub, inst.alpha * inst.c(m, k));
      }
  return sg;
}

RFlowResult r_flow(const Instance& inst, const Design& s) {
  SupportGraph sg = support_graph(inst, s);
  const int n = inst.n;

  RFlowResult res;
  res.flow = Flows::zeros(n);

  std::vector<double> dist(n);
  std::vector<int> narc(n), pred(n);
  std::vector<char> done(n);

  for (int o = 0; o < n; ++o) {
    bool ships = false;
    for (int d = 0; d < n && !ships; ++d) ships = d != o && inst.w(o, d) > 0;
    if (!ships) continue;

    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(narc.begin(), narc.end(), 0);
    std::fill(pred.begin(), pred.end(), -1);
    std::fill(done.begin(), done.end(), 0);

    // Exact cost ties fall to fewer arcs, then the smaller predecessor, so
    // equal-cost routings always resolve the same way.  Fewer-arcs also keeps
    // a commodity aimed at its own entry hub on the direct access arc.
    auto improves = [&](int v, double d2, int n2, int p2) {
      if (d2 < dist[v]) return true;
      if (d2 > dist[v]) return false;
      if (n2 != narc[v]) return n2 < narc[v];
      return p2 < pred[v];
    };
    auto relax = [&](int v, double d2, int n2, int p2) {
      if (!improves(v, d2, n2, p2)) return;
      dist[v] = d2;
      narc[v] = n2;
      pred[v] = p2;
    };

    if (sg.hub[o]) {
      dist[o] = 0.0;
      pred[o] = o;
    } else {
      for (int a : sg.out[o])
        if (sg.arcs[a].kind == ArcKind::Access)
          relax(sg.arcs[a].to, sg.arcs[a].cost, 1, o);
    }

    // Dense Dijkstra over the hub nodes; small n makes the linear scan the
    // simplest fully deterministic choice.
    for (;;) {
      int u = -1;
      for (int v = 0; v < n; ++v) {
        if (done[v] || !sg.hub[v] || dist[v] == kInf) continue;
        if (u == -1 || dist[v] < dist[u] ||
            (dist[v] == dist[u] &&
             (narc[v] < narc[u] || (narc[v] == narc[u] && v < u))))
          u = v;
      }
      if (u == -1) break;
      done[u] = 1;
      for (int a : sg.out[u])
        if (sg.arcs[a].kind == ArcKind::Interhub && !done[sg.arcs[a].to])
          relax(sg.arcs[a].to, dist[u] + sg.arcs[a].cost, narc[u] + 1, u);
    }

    for (int d = 0; d < n; ++d) {
      if (d == o) continue;
      const double wod = inst.w(o, d);
      if (wod <= 0) continue;

      int exit = -1;
      double total = kInf;
      if (sg.hub[d]) {
        if (dist[d] < kInf) {
          exit = d;
          total = dist[d];
        }
      } else {
        int bestn = 0;
        for (int a : sg.in[d]) {
          if (sg.arcs[a].kind != ArcKind::Distribution) continue;
          const int k = sg.arcs[a].from;
          if (dist[k] == kInf) continue;
          const double c2 = dist[k] + sg.arcs[a].cost;
          const int n2 = narc[k] + 1;
          if (exit == -1 || c2 < total ||
              (c2 == total && (n2 < bestn || (n2 == bestn && k < exit)))) {
            exit = k;
            total = c2;
            bestn = n2;
          }
        }
      }
      if (exit == -1) {
        res = RFlowResult{};
        res.feasible = false;
        res.bad_o = o;
        res.bad_d = d;
        res.flow = Flows::zeros(n);
        return res;
      }

      std::vector<int> nodes;
      for (int v = exit;; v = pred[v]) {
        nodes.push_back(v);
        if (sg.hub[o] ? v == o : pred[v] == o) break;
      }
      if (!sg.hub[o]) nodes.push_back(o);
      std::reverse(nodes.begin(), nodes.end());
      if (!sg.hub[d]) nodes.push_back(d);

      size_t a = 0, b = nodes.size() - 1;
      if (!sg.hub[o]) {
        res.flow.h1[arc_index(n, nodes[0], nodes[1])] += wod;
        a = 1;
      }
      if (!sg.hub[d]) {
        res.flow.h2[arc_index(n, nodes[b - 1], nodes[b])] += wod;
        b -= 1;
      }
      for (size_t i = a; i < b; ++i)
        res.flow.t[arc_index(n, nodes[i], nodes[i + 1])] += wod;

      res.v_rout += wod * total;
      res.paths.push_back(RPath{o, d, wod, total, std::move(nodes)});
    }
  }
  return res;
}

AuxLp build_aux_lp(const Instance& inst, const Design& s, const Flows* caps,
                   bool with_floors) {
  SupportGraph sg = support_graph(inst, s);
  const int n = inst.n;
  const int na = static_cast<int>(sg.arcs.size());

  AuxLp aux;
  lp::Problem& p = aux.prob;

  auto infeasible = [&](int o, int d) {
    aux.trivially_infeasible = true;
    if (aux.bad_o == -1) {
      aux.bad_o = o;
      aux.bad_d = d;
    }
  };

  // Columns, all [0, inf): the balance rows cap everything that needs
  // capping, and keeping bounds trivial means an infeasibility certificate
  // lives entirely on rows.  Origins without supply ship nothing and get no
  // columns at all.
  std::vector<int> gcol(na, -1);
  std::vector<int> tcol(static_cast<size_t>(n) * na, -1);
  std::vector<int> hcol(static_cast<size_t>(n) * na, -1);

  for (int a = 0; a < na; ++a) {
    const SupportArc& arc = sg.arcs[a];
    if (arc.kind != ArcKind::Access || inst.O[arc.from] <= 0) continue;
    gcol[a] = p.add_col(arc.cost, 0.0, lp::kInf);
    aux.cols.push_back(AuxCol{AuxColKind::G, arc.from, arc.from, arc.to});
  }
  for (int i = 0; i < n; ++i) {
    if (inst.O[i] <= 0) continue;
    for (int a = 0; a < na; ++a) {
      const SupportArc& arc = sg.arcs[a];
      if (arc.kind != ArcKind::Interhub || arc.to == i) continue;
      tcol[static_cast<size_t>(i) * na + a] = p.add_col(arc.cost, 0.0, lp::kInf);
      aux.cols.push_back(AuxCol{AuxColKind::T, i, arc.from, arc.to});
    }
    for (int a = 0; a < na; ++a) {
      const SupportArc& arc = sg.arcs[a];
      if (arc.kind != ArcKind::Distribution || arc.to == i) continue;
      if (inst.w(i, arc.to) <= 0) continue;
      hcol[static_cast<size_t>(i) * na + a] = p.add_col(arc.cost, 0.0, lp::kInf);
      aux.cols.push_back(AuxCol{AuxColKind::H, i, arc.from, arc.to});
    }
  }

  auto t_at = [&](int i, int a) { return tcol[static_cast<size_t>(i) * na + a]; };
  auto h_at = [&](int i, int a) { return hcol[static_cast<size_t>(i) * na + a]; };

  auto add_row = [&](std::vector<std::pair<int, double>> coef, double lo,
                     double hi, AuxRow tag) {
    p.add_row(std::move(coef), lo, hi);
    aux.rows.push_back(tag);
  };

  // Every origin's supply leaves home: over access arcs for a spoke origin,
  // over the backbone and direct distribution for a hub origin.
  for (int i = 0; i < n; ++i) {
    if (inst.O[i] <= 0) continue;
    std::vector<std::pair<int, double>> coef;
    if (!sg.hub[i]) {
      for (int a : sg.out[i])
        if (gcol[a] >= 0) coef.emplace_back(gcol[a], 1.0);
      if (coef.empty()) {
        infeasible(i, -1);
        continue;
      }
      add_row(std::move(coef), inst.O[i], inst.O[i],
              AuxRow{AuxRowKind::Access, i, -1, -1});
    } else {
      for (int a : sg.out[i]) {
        if (t_at(i, a) >= 0) coef.emplace_back(t_at(i, a), 1.0);
        if (h_at(i, a) >= 0) coef.emplace_back(h_at(i, a), 1.0);
      }
      if (coef.empty()) {
        infeasible(i, -1);
        continue;
      }
      add_row(std::move(coef), inst.O[i], inst.O[i],
              AuxRow{AuxRowKind::HubOut, i, -1, -1});
    }
  }

  // Deliveries into spoke destinations.
  for (int i = 0; i < n; ++i) {
    if (inst.O[i] <= 0) continue;
    for (int j = 0; j < n; ++j) {
      if (j == i || sg.hub[j] || inst.w(i, j) <= 0) continue;
      std::vector<std::pair<int, double>> coef;
      for (int a : sg.in[j])
        if (sg.arcs[a].kind == ArcKind::Distribution && h_at(i, a) >= 0)
          coef.emplace_back(h_at(i, a), 1.0);
      if (coef.empty()) {
        infeasible(i, j);
        continue;
      }
      add_row(std::move(coef), inst.w(i, j), inst.w(i, j),
              AuxRow{AuxRowKind::Deliver, i, -1, j});
    }
  }

  // Conservation of each origin's flow at every other hub; demand aimed at
  // the hub itself is absorbed there.
  for (int i = 0; i < n; ++i) {
    if (inst.O[i] <= 0) continue;
    for (int k = 0; k < n; ++k) {
      if (k == i || !sg.hub[k]) continue;
      std::vector<std::pair<int, double>> coef;
      for (int a : sg.out[k]) {
        if (t_at(i, a) >= 0) coef.emplace_back(t_at(i, a), 1.0);
        if (h_at(i, a) >= 0) coef.emplace_back(h_at(i, a), 1.0);
      }
      for (int a : sg.in[k]) {
        const SupportArc& arc = sg.arcs[a];
        if (arc.kind == ArcKind::Access && arc.from == i && gcol[a] >= 0)
          coef.emplace_back(gcol[a], -1.0);
        if (arc.kind == ArcKind::Interhub && t_at(i, a) >= 0)
          coef.emplace_back(t_at(i, a), -1.0);
      }
      const double rhs = -inst.w(i, k);
      if (coef.empty()) {
        if (rhs != 0) infeasible(i, k);
        continue;
      }
      add_row(std::move(coef), rhs, rhs, AuxRow{AuxRowKind::Balance, i, k, -1});
    }
  }

  if (caps != nullptr) {
    // Feasibility-probe mode: the trial flow caps every arc.
    for (int a = 0; a < na; ++a) {
      const SupportArc& arc = sg.arcs[a];
      std::vector<std::pair<int, double>> coef;
      switch (arc.kind) {
        case ArcKind::Access:
          if (gcol[a] >= 0) coef.emplace_back(gcol[a], 1.0);
          if (!coef.empty())
            add_row(std::move(coef), -lp::kInf, caps->h1_at(arc.from, arc.to),
                    AuxRow{AuxRowKind::CapH1, arc.from, arc.from, arc.to});
          break;
        case ArcKind::Interhub:
          for (int i = 0; i < n; ++i)
            if (t_at(i, a) >= 0) coef.emplace_back(t_at(i, a), 1.0);
          if (!coef.empty())
            add_row(std::move(coef), -lp::kInf, caps->t_at(arc.from, arc.to),
                    AuxRow{AuxRowKind::CapT, -1, arc.from, arc.to});
          break;
        case ArcKind::Distribution:
          for (int i = 0; i < n; ++i)
            if (h_at(i, a) >= 0) coef.emplace_back(h_at(i, a), 1.0);
          if (!coef.empty())
            add_row(std::move(coef), -lp::kInf, caps->h2_at(arc.from, arc.to),
                    AuxRow{AuxRowKind::CapH2, -1, arc.from, arc.to});
          break;
        case ArcKind::Fictitious:
          break;
      }
    }
  } else {
    // Routing mode: an origin's flow crosses an edge at most once in some
    // direction on any path decomposition, so its two directed totals share
    // the O_i budget.  This also keeps every edge total within total demand.
    for (int a = 0; a < na; ++a) {
      const SupportArc& arc = sg.arcs[a];
      if (arc.kind != ArcKind::Interhub || arc.from > arc.to) continue;
      const int rev = [&] {
        for (int b : sg.in[arc.from])
          if (sg.arcs[b].kind == ArcKind::Interhub && sg.arcs[b].from == arc.to)
            return b;
        return -1;
      }();
      for (int i = 0; i < n; ++i) {
        std::vector<std::pair<int, double>> coef;
        if (t_at(i, a) >= 0) coef.emplace_back(t_at(i, a), 1.0);
        if (rev >= 0 && t_at(i, rev) >= 0) coef.emplace_back(t_at(i, rev), 1.0);
        if (coef.empty()) continue;
        add_row(std::move(coef), -lp::kInf, inst.O[i],
                AuxRow{AuxRowKind::EdgeCap, i, arc.from, arc.to});
      }
    }
  }

  if (with_floors) {
    if (inst.ell.empty())
      throw InstanceError("build_aux_lp: flow floors requested but ell is missing");
    for (int a = 0; a < na; ++a) {
      const SupportArc& arc = sg.arcs[a];
      if (arc.kind != ArcKind::Interhub || arc.from > arc.to) continue;
      const double floor = inst.ell(arc.from, arc.to);
      if (floor <= 0) continue;
      std::vector<std::pair<int, double>> coef;
      for (int b = 0; b < na; ++b) {
        const SupportArc& other = sg.arcs[b];
        if (other.kind != ArcKind::Interhub) continue;
        if (!((other.from == arc.from && other.to == arc.to) ||
              (other.from == arc.to && other.to == arc.from)))
          continue;
        for (int i = 0; i < n; ++i)
          if (t_at(i, b) >= 0) coef.emplace_back(t_at(i, b), 1.0);
      }
      if (coef.empty()) {
        infeasible(arc.from, arc.to);
        continue;
      }
      add_row(std::move(coef), floor, lp::kInf,
              AuxRow{AuxRowKind::Floor, -1, arc.from, arc.to});
    }
  }

  return aux;
}

FlowLpResult flow_lp(const Instance& inst, const Design& s) {
  AuxLp aux = build_aux_lp(inst, s, nullptr,
                           inst.kind == ModelKind::GFlowBounded);

  FlowLpResult res;
  res.flow = Flows::zeros(inst.n);
  if (aux.trivially_infeasible) {
    res.feasible = false;
    return res;
  }

  lp::Solver solver;
  lp::Outcome out = solver.solve(aux.prob);
  if (out.status == lp::Status::Infeasible) {
    res.feasible = false;
    return res;
  }
  if (out.status != lp::Status::Optimal)
    throw lp::SolverFault("flow_lp: routing LP neither optimal nor infeasible");

  for (size_t j = 0; j < aux.cols.size(); ++j) {
    const double v = out.x[j];
    if (v <= 0) continue;
    const AuxCol& col = aux.cols[j];
    const int a = arc_index(inst.n, col.from, col.to);
    switch (col.kind) {
      case AuxColKind::G: res.flow.h1[a] += v; break;
      case AuxColKind::T: res.flow.t[a] += v; break;
      case AuxColKind::H: res.flow.h2[a] += v; break;
    }
  }
  res.cost = out.obj;
  return res;
}

FeasVerdict feas_check(const Flows& trial, const RFlowResult& ref, double tol) {
  FeasVerdict v;
  const int n = ref.flow.n;
  auto fail = [&](bool& flag, int i, int j) {
    flag = false;
    if (v.bad_from == -1) {
      v.bad_from = i;
      v.bad_to = j;
    }
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int a = arc_index(n, i, j);
      const double slack = tol * (1.0 + ref.flow.t[a]);
      if (trial.t[a] < ref.flow.t[a] - slack) fail(v.t_ok, i, j);
      if (trial.h1[a] < ref.flow.h1[a] - tol * (1.0 + ref.flow.h1[a]))
        fail(v.h1_ok, i, j);
      if (trial.h2[a] < ref.flow.h2[a] - tol * (1.0 + ref.flow.h2[a]))
        fail(v.h2_ok, i, j);
    }
  return v;
}

}  // namespace hubnet
