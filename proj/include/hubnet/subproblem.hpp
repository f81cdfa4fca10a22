#pragma once

#include "hubnet/instance.hpp"
#include "hubnet/lp.hpp"
#include "hubnet/model.hpp"

#include <vector>

namespace hubnet {

// Routing machinery for integral designs: the support graph an origin may
// travel on, shortest-path routing with deterministic tie-breaking, the
// lower-bounded flow LP used by the flow-bounded model, and the cheap
// componentwise feasibility screen that lets the driver skip a Benders call.

enum class ArcKind { Access, Interhub, Distribution, Fictitious };

struct SupportArc {
  int from = 0;
  int to = 0;
  ArcKind kind = ArcKind::Access;
  double cost = 0.0;  // gamma*c, alpha*c or theta*c depending on kind
};

// Arcs a routing path may use under a given integral design.  Interhub edges
// appear as two opposite arcs.  Fictitious legs (origin or destination already
// a hub) are not stored; they only show up implicitly in path costs.
struct SupportGraph {
  int n = 0;
  std::vector<char> hub;
  std::vector<SupportArc> arcs;
  std::vector<std::vector<int>> out;  // arc ids leaving each node
  std::vector<std::vector<int>> in;   // arc ids entering each node
};

// Throws std::invalid_argument when the design is not a valid member of the
// design domain (no hubs, uncovered node, access arc out of a hub, ...).
SupportGraph support_graph(const Instance& inst, const Design& s);

// One commodity's routing: the node sequence from origin to destination.
// nodes starts with o and ends with d; every interior node is a hub, and o/d
// appear once even when they are hubs themselves.
struct RPath {
  int o = 0;
  int d = 0;
  double demand = 0.0;
  double cost = 0.0;  // unit cost of the path
  std::vector<int> nodes;
};

struct RFlowResult {
  bool feasible = true;
  int bad_o = -1, bad_d = -1;  // witness commodity when infeasible
  Flows flow;
  std::vector<RPath> paths;
  double v_rout = 0.0;
};

// Cheapest routing of every commodity over the support graph, one Dijkstra
// run per origin.  Ties on exact cost are broken toward fewer arcs, then the
// smaller predecessor node, so the flows are deterministic.  A disconnected
// commodity yields feasible = false with the offending pair as witness.
RFlowResult r_flow(const Instance& inst, const Design& s);

struct FlowLpResult {
  bool feasible = true;
  Flows flow;
  double cost = 0.0;
};

// Minimum-cost routing as an LP on the support of s: per-origin flow balance,
// per-origin edge caps t^i_km + t^i_mk <= O_i (any path-decomposable routing
// obeys them, and they keep edge totals within total demand), and, for the
// flow-bounded model, the activated-edge floors ell_km <= sum_i (t^i_km +
// t^i_mk).  Works for every model kind, which makes it an independent check
// against r_flow when the floors are absent.
FlowLpResult flow_lp(const Instance& inst, const Design& s);

// The shared three-index LP skeleton.  flow_lp solves it with structural caps
// and optional floors; the Benders separator rebuilds it with trial-flow
// capacity rows instead and reads cut coefficients off the tagged rows.
enum class AuxColKind { G, T, H };
struct AuxCol {
  AuxColKind kind = AuxColKind::G;
  int origin = 0;  // commodity origin i
  int from = 0;    // arc tail (equals origin for G columns)
  int to = 0;      // arc head
};

enum class AuxRowKind {
  Access,    // origin i leaves home: sum_k g_ik = O_i            (non-hub i)
  HubOut,    // hub origin i ships out: sum t^i + sum h^i = O_i   (hub i)
  Deliver,   // commodity (i,j) reaches j: sum_k h^i_kj = w_ij    (non-hub j)
  Balance,   // conservation of origin-i flow at hub k != i
  CapT,      // sum_i t^i_km <= tbar_km          (trial-flow mode)
  CapH1,     // g_ik <= h1bar_ik                 (trial-flow mode)
  CapH2,     // sum_i h^i_kj <= h2bar_kj         (trial-flow mode)
  EdgeCap,   // t^i_km + t^i_mk <= O_i           (routing mode)
  Floor      // sum_i (t^i_km + t^i_mk) >= ell_km
};
struct AuxRow {
  AuxRowKind kind = AuxRowKind::Access;
  int origin = -1;  // i where applicable, else -1
  int from = -1;    // arc/edge tail or hub node, -1 when unused
  int to = -1;      // arc/edge head or delivery node, -1 when unused
};

struct AuxLp {
  lp::Problem prob;
  std::vector<AuxCol> cols;
  std::vector<AuxRow> rows;
  // A demand row with no columns to serve it: the design cannot route the
  // witness commodity at all and no LP call is needed.
  bool trivially_infeasible = false;
  int bad_o = -1, bad_d = -1;
};

// caps == nullptr builds the routing LP (structural edge caps, floors when
// with_floors); caps != nullptr builds the feasibility probe against a trial
// flow, with the verbatim capacity rows and nothing structural.
AuxLp build_aux_lp(const Instance& inst, const Design& s, const Flows* caps,
                   bool with_floors);

// Componentwise screen of a trial flow against a reference routing: the
// trial is clearly feasible when it dominates the reference on every arc.
// Advisory only; a failure is inconclusive when shortest paths are not
// unique.
struct FeasVerdict {
  bool t_ok = true, h1_ok = true, h2_ok = true;
  int bad_from = -1, bad_to = -1;  // first failing arc
  bool clearly_feasible() const { return t_ok && h1_ok && h2_ok; }
};
FeasVerdict feas_check(const Flows& trial, const RFlowResult& ref,
                       double tol = 1e-7);

}  // namespace hubnet
