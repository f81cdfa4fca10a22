#include "hubnet/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hubnet/lp.hpp"

namespace hubnet {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double row_activity(const CutRow& c, const std::vector<double>& x) {
  double a = 0.0;
  for (auto [j, v] : c.coef) a += v * x[j];
  return a;
}

// Event bookkeeping wants the design as a short string; the same string
// doubles as the revisit guard in the tests.
std::string pattern_of(const Instance& inst, const Design& s) {
  std::string p;
  p.reserve(s.z.size() + s.y.size() + s.x1.size() + 2);
  for (char b : s.z) p += char('0' + b);
  p += '/';
  for (char b : s.y) p += char('0' + b);
  if (inst.policy == Policy::SA) {
    p += '/';
    for (char b : s.x1) p += char('0' + b);
  }
  return p;
}

// The best design sharing the node design's excluded pattern: extra backbone
// edges are free under the hub-setup-only objective, and extra access arcs
// are always free under multiple allocation.  Both can only shorten routes,
// so evaluating the widened twin never overstates the pattern's value.
Design widened_twin(const Instance& inst, const Design& s) {
  Design t = s;
  if (inst.kind == ModelKind::HMedian) {
    for (int k = 0; k < inst.n; ++k)
      for (int m = k + 1; m < inst.n; ++m)
        if (t.z[k] && t.z[m]) t.y[edge_index(inst.n, k, m)] = 1;
  }
  if (inst.policy == Policy::MA) maximalize_access(inst, t);
  return t;
}

struct NodeState {
  std::vector<lp::BoundOverride> fixes;
  double bound = -std::numeric_limits<double>::infinity();
  int depth = 0;
  long id = 0;
  long parent = -1;
};

// Open nodes ordered by the active selection rule; the bound multiset keeps
// the global lower bound cheap under both rules.
class NodeQueue {
 public:
  explicit NodeQueue(NodeRule rule) : rule_(rule) {}

  void push(NodeState nd) {
    bounds_.insert(nd.bound);
    open_.emplace(key_of(nd), std::move(nd));
  }
  bool empty() const { return open_.empty(); }
  size_t size() const { return open_.size(); }
  NodeState pop() {
    auto it = open_.begin();
    NodeState nd = std::move(it->second);
    open_.erase(it);
    bounds_.erase(bounds_.find(nd.bound));
    return nd;
  }
  double min_bound() const {
    return bounds_.empty() ? std::numeric_limits<double>::infinity() : *bounds_.begin();
  }

 private:
  std::tuple<double, double, long> key_of(const NodeState& nd) const {
    if (rule_ == NodeRule::BestBound) return {nd.bound, double(nd.depth), nd.id};
    // depth first: deepest, then most recently created
    return {double(-nd.depth), double(-nd.id), nd.id};
  }

  NodeRule rule_;
  std::map<std::tuple<double, double, long>, NodeState> open_;
  std::multiset<double> bounds_;
};

}  // namespace

std::optional<HeuristicStart> rounding_heuristic(const Instance& inst, const VarMap& vm,
                                                 const std::vector<double>& xbar, double eps,
                                                 double* sp_seconds) {
  const int n = inst.n;
  Design s = Design::zeros(n);
  for (int k = 0; k < n; ++k) s.z[k] = xbar[vm.z(k)] >= eps;
  for (int e = 0; e < vm.edges(); ++e) s.y[e] = xbar[n + e] >= eps;
  for (int a = 0; a < vm.arcs(); ++a) {
    s.x1[a] = xbar[n + vm.edges() + a] >= eps;
    s.x2[a] = xbar[n + vm.edges() + vm.arcs() + a] >= eps;
  }

  // repair: a non-hub must keep one access and one distribution arc; take
  // the arc with the largest LP value, smallest head on ties
  for (int i = 0; i < n; ++i) {
    if (s.z[i]) continue;
    bool has1 = false, has2 = false;
    for (int j = 0; j < n && !(has1 && has2); ++j) {
      if (j == i) continue;
      has1 = has1 || s.access(i, j);
      has2 = has2 || s.dist(j, i);
    }
    if (!has1) {
      int best = -1;
      double bv = -1.0;
      for (int j = 0; j < n; ++j)
        if (j != i && xbar[vm.x1(i, j)] > bv) {
          bv = xbar[vm.x1(i, j)];
          best = j;
        }
      s.x1[arc_index(n, i, best)] = 1;
    }
    if (!has2) {
      int best = -1;
      double bv = -1.0;
      for (int j = 0; j < n; ++j)
        if (j != i && xbar[vm.x2(j, i)] > bv) {
          bv = xbar[vm.x2(j, i)];
          best = j;
        }
      s.x2[arc_index(n, best, i)] = 1;
    }
  }

  if (!design_ok(inst, s)) return std::nullopt;

  auto t0 = Clock::now();
  HeuristicStart hs;
  hs.s = s;
  if (inst.kind == ModelKind::GFlowBounded) {
    FlowLpResult fl = flow_lp(inst, s);
    if (sp_seconds) *sp_seconds += seconds_since(t0);
    if (!fl.feasible) return std::nullopt;
    hs.f = fl.flow;
    hs.value = activation_cost(inst, s) + fl.cost;
  } else {
    RFlowResult rf = r_flow(inst, s);
    if (sp_seconds) *sp_seconds += seconds_since(t0);
    if (!rf.feasible) return std::nullopt;
    hs.f = rf.flow;
    hs.value = activation_cost(inst, s) + rf.v_rout;
  }
  return hs;
}

int pick_branch_var(const VarMap& vm, const std::vector<double>& xbar, double tol) {
  const int stops[4] = {0, vm.n, vm.n + vm.edges(), vm.nbin()};
  for (int c = 0; c < 3; ++c) {
    int best = -1;
    double best_score = tol;  // a variable is fractional when min(v, 1-v) > tol
    for (int j = stops[c]; j < stops[c + 1]; ++j) {
      double v = std::clamp(xbar[j], 0.0, 1.0);
      double score = std::min(v, 1.0 - v);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best >= 0) return best;
  }
  return -1;
}

CutRow nogood_row(const Instance& inst, const VarMap& vm, const Design& s) {
  CutRow row;
  row.family = RowFamily::Nogood;
  int ones = 0;
  auto put = [&](int col, char bit) {
    if (bit) {
      row.coef.emplace_back(col, -1.0);
      ++ones;
    } else {
      row.coef.emplace_back(col, 1.0);
    }
  };
  for (int k = 0; k < inst.n; ++k) put(vm.z(k), s.z[k]);
  for (int e = 0; e < vm.edges(); ++e) put(vm.n + e, s.y[e]);
  if (inst.policy == Policy::SA)
    for (int a = 0; a < vm.arcs(); ++a) put(vm.n + vm.edges() + a, s.x1[a]);
  row.rhs = 1.0 - ones;
  return row;
}

SolveReport solve(const Instance& inst) { return solve(inst, SolveConfig{}); }

SolveReport solve(const Instance& inst, const SolveConfig& cfg) {
  if (!(cfg.round_eps > 0.0 && cfg.round_eps <= 1.0))
    throw std::invalid_argument("rounding threshold must lie in (0, 1]");
  if (!(cfg.time_limit > 0.0)) throw std::invalid_argument("time limit must be positive");
  if (cfg.variant == Variant::BSO && inst.kind != ModelKind::HMedian)
    throw std::invalid_argument(
        "optimality rows need the hub-setup-only objective; run BS or BSF instead");
  if (cfg.demand_mode.kind == DemandSepMode::Exact && inst.n > 20)
    throw std::invalid_argument(
        "exact demand separation enumerates every node subset; it stops at n = 20");

  const auto t_start = Clock::now();
  const double inf = std::numeric_limits<double>::infinity();

  SolveReport rep;
  Model m(inst);
  const VarMap& vm = m.vars();

  auto timed_out = [&] { return seconds_since(t_start) >= cfg.time_limit; };
  auto note = [&](long id, long parent, double lp, std::string action) {
    if (cfg.log_events) rep.events.push_back(NodeEvent{id, parent, lp, std::move(action)});
  };
  auto pool = [&](const CutRow& c) {
    if (!m.add_cut(c)) return false;
    ++rep.cuts_added[static_cast<int>(c.family)];
    if (cfg.keep_cuts) rep.kept_cuts.push_back(c);
    return true;
  };
  auto take_incumbent = [&](const Design& s, const Flows& f, double value) {
    if (rep.found && value >= rep.value) return;
    rep.found = true;
    rep.incumbent = s;
    rep.incumbent_flow = f;
    rep.value = value;
  };

  // ---- root: alternate LP and separation until both families are clean ----
  lp::Outcome out;
  while (true) {
    out = m.solve_lp();
    if (out.status == lp::Status::Infeasible) {
      rep.found = false;
      rep.value = inf;
      rep.lower_bound = inf;
      rep.root_lb = inf;
      rep.gap = 0.0;
      rep.root_time = rep.wall_time = seconds_since(t_start);
      note(0, -1, inf, "root infeasible");
      return rep;
    }
    if (out.status != lp::Status::Optimal)
      throw lp::SolverFault("the root relaxation came back unbounded");

    int fresh = 0;
    std::vector<double> zbar(inst.n), ybar(vm.edges());
    for (int k = 0; k < inst.n; ++k) zbar[k] = out.x[vm.z(k)];
    for (int e = 0; e < vm.edges(); ++e) ybar[e] = out.x[inst.n + e];
    for (const CutRow& c : separate_connectivity(inst, zbar, ybar))
      if (pool(c)) ++fresh;

    Flows fbar = extract_flows(vm, out.x);
    for (const auto& S : separate_demand(inst, fbar, cfg.demand_mode))
      if (pool(make_demand_row(inst, S))) ++fresh;

    if (fresh == 0 || timed_out()) break;
  }
  rep.root_lb = out.obj;

  if (auto hs = rounding_heuristic(inst, vm, out.x, cfg.round_eps, &rep.subproblem_time))
    take_incumbent(hs->s, hs->f, hs->value);
  rep.root_time = seconds_since(t_start);

  // ---- tree ----
  NodeQueue queue(cfg.node_rule);
  long next_id = 0;
  std::optional<PathCatalog> catalog;

  // Finishes a node whose LP is solved: branch on a fractional design, or
  // run the integer sequence (lazy demand cut, exact routing, incumbent,
  // nogood, variant cuts) and requeue the node so the rest of its region
  // stays reachable once the nogood row excludes the processed pattern.
  auto handle_solved = [&](const NodeState& nd, const lp::Outcome& sol) {
    int col = pick_branch_var(vm, sol.x, cfg.int_tol);
    if (col >= 0) {
      for (double b : {0.0, 1.0}) {
        NodeState child;
        child.fixes = nd.fixes;
        child.fixes.push_back({col, b, b});
        child.bound = sol.obj;
        child.depth = nd.depth + 1;
        child.id = ++next_id;
        child.parent = nd.id;
        queue.push(std::move(child));
      }
      note(nd.id, nd.parent, sol.obj, "branch " + vm.name(col));
      return;
    }

    Design sbar = extract_design(vm, sol.x);
    Flows fbar = extract_flows(vm, sol.x);

    for (const auto& S : separate_demand(inst, fbar, cfg.demand_mode)) {
      pool(make_demand_row(inst, S));
      break;  // one lazy cut per node
    }

    auto t_sp = Clock::now();
    RFlowResult ref = r_flow(inst, sbar);
    ++rep.subproblem_calls;
    bool ok = false;
    double value = inf;
    Flows flow;
    if (inst.kind == ModelKind::GFlowBounded) {
      FlowLpResult fl = flow_lp(inst, sbar);
      ++rep.subproblem_calls;
      if (fl.feasible) {
        ok = true;
        value = activation_cost(inst, sbar) + fl.cost;
        flow = fl.flow;
      }
    } else if (ref.feasible) {
      ok = true;
      value = activation_cost(inst, sbar) + ref.v_rout;
      flow = ref.flow;
    }
    Design best_s = sbar;
    Design twin = widened_twin(inst, sbar);
    if (!(twin == sbar)) {
      if (inst.kind == ModelKind::GFlowBounded) {
        FlowLpResult fl = flow_lp(inst, twin);
        ++rep.subproblem_calls;
        if (fl.feasible) {
          double tv = activation_cost(inst, twin) + fl.cost;
          if (!ok || tv < value) {
            ok = true;
            value = tv;
            flow = fl.flow;
            best_s = twin;
          }
        }
      } else {
        RFlowResult rf = r_flow(inst, twin);
        ++rep.subproblem_calls;
        if (rf.feasible) {
          double tv = activation_cost(inst, twin) + rf.v_rout;
          if (!ok || tv < value) {
            ok = true;
            value = tv;
            flow = rf.flow;
            best_s = twin;
          }
        }
      }
    }
    rep.subproblem_time += seconds_since(t_sp);
    if (ok) take_incumbent(best_s, flow, value);

    if (!pool(nogood_row(inst, vm, sbar)))
      throw lp::SolverFault("a design pattern came back despite its nogood row");

    if (cfg.variant != Variant::BS) {
      bool screened = ref.feasible && feas_check(fbar, ref).clearly_feasible();
      if (!screened)
        if (auto cut = separate_feasibility(inst, sbar, fbar)) pool(*cut);
    }
    if (cfg.variant == Variant::BSO && ref.feasible) {
      if (!catalog) catalog = build_path_catalog(inst);
      RPathIndexSets sets = compute_index_sets(*catalog, sbar, ref);
      for (const CutRow& c : make_optimality_cuts(inst, sbar, ref, sets))
        if (c.rhs - row_activity(c, sol.x) > cfg.cut_tol) pool(c);
    }

    NodeState again;
    again.fixes = nd.fixes;
    again.bound = sol.obj;
    again.depth = nd.depth;
    again.id = ++next_id;
    again.parent = nd.id;
    queue.push(std::move(again));
    note(nd.id, nd.parent, sol.obj,
         "integer " + pattern_of(inst, sbar) + (ok ? " v=" + std::to_string(value) : " unroutable"));
  };

  rep.nodes = 1;  // the root
  handle_solved(NodeState{{}, out.obj, 0, 0, -1}, out);

  while (!queue.empty()) {
    if (timed_out()) {
      rep.status = SolveStatus::TimeLimit;
      break;
    }
    NodeState nd = queue.pop();
    if (rep.found && nd.bound >= rep.value - cfg.prune_tol) {
      note(nd.id, nd.parent, nd.bound, "pruned unexplored");
      continue;
    }
    lp::Outcome sol = m.solve_lp(nd.fixes);
    ++rep.nodes;
    if (sol.status == lp::Status::Infeasible) {
      note(nd.id, nd.parent, nd.bound, "infeasible");
      continue;
    }
    if (sol.status != lp::Status::Optimal)
      throw lp::SolverFault("a node relaxation came back unbounded");
    if (rep.found && sol.obj >= rep.value - cfg.prune_tol) {
      note(nd.id, nd.parent, sol.obj, "pruned");
      continue;
    }
    handle_solved(nd, sol);
  }

  if (rep.status == SolveStatus::Optimal) {
    rep.lower_bound = rep.found ? rep.value : inf;
    rep.gap = 0.0;
  } else {
    rep.lower_bound = std::min(queue.min_bound(), rep.value);
    rep.gap = rep.found ? std::max(0.0, (rep.value - rep.lower_bound) /
                                            std::max(std::abs(rep.value), 1e-12))
                        : inf;
  }
  rep.wall_time = seconds_since(t_start);
  return rep;
}

}  // namespace hubnet
