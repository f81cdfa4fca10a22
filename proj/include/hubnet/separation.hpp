#pragma once

#include <optional>
#include <vector>

#include "hubnet/instance.hpp"
#include "hubnet/model.hpp"
#include "hubnet/subproblem.hpp"

namespace hubnet {

// How violated aggregated demand sets are searched for.  Heuristic builds a
// min-cut tree over the clipped arc surpluses and re-checks candidate sides
// against the directed flow.  Exact enumerates every node subset, so it is
// limited to small n.  Components collects the connected components of a
// support graph inferred from the flow; an edge counts when the design
// values implied by the variable upper bounds add up to at least eps.
struct DemandSepMode {
  enum Kind { Heuristic, Exact, Components };
  Kind kind = Heuristic;
  double eps = 0.5;  // Components only

  static DemandSepMode heuristic() { return {Heuristic, 0.0}; }
  static DemandSepMode exact() { return {Exact, 0.0}; }
  static DemandSepMode components(double eps) { return {Components, eps}; }
};

// Returns node sets S whose crossing flow t+h1+h2 over delta+(S) falls short
// of the crossing demand W(S:S^c) by more than 1e-6.  Heuristic and Exact
// return at most one set (the most violated one they see); Components may
// return one set per split component.  An empty answer from Heuristic or
// Components proves nothing; from Exact it certifies that no violated set
// exists.
std::vector<std::vector<int>> separate_demand(const Instance& inst, const Flows& fbar,
                                              DemandSepMode mode);

// The aggregated demand row for S: crossing flows on the left, crossing
// demand W(S:S^c) on the right.  Under single allocation the demand a
// cross-allocated origin drags over the cut moves left as -w terms on x1.
CutRow make_demand_row(const Instance& inst, const std::vector<int>& S);

// Backbone connectivity row Y(delta(S)) >= z_i + z_j - 1, i in S, j outside.
CutRow make_connectivity_row(const Instance& inst, const std::vector<int>& S, int i, int j);

// Separates connectivity rows for a fractional design: a min-cut tree on the
// y support, each tree split certified by the largest-z node on either side.
// Returns every distinct violated row (tolerance 1e-6).
std::vector<CutRow> separate_connectivity(const Instance& inst, const std::vector<double>& zbar,
                                          const std::vector<double>& ybar);

// Decides whether fbar can be split into per-origin flows within its own
// aggregate arc capacities.  If not, the infeasibility certificate of that
// disaggregation LP is folded into a cut over (z, t, h1, h2) violated by
// (sbar, fbar) by at least 1e-6.  Arcs outside the support of sbar receive
// the padding coefficients needed to keep the cut valid for designs that do
// use them.  Returns nothing when fbar disaggregates, when the violation
// would drown in numerical noise, or when sbar cannot route some commodity
// at all (callers are expected to have run r_flow first in that case).
std::optional<CutRow> separate_feasibility(const Instance& inst, const Design& sbar,
                                           const Flows& fbar);

// Every way to serve one commodity with at most one interhub arc, costed
// once up front.  oneHub holds the single-hub services o-k-d, twoHub the
// hub pairs k < m with both traversal directions.  Lists are sorted
// ascending by cost; on equal cost the single-hub service is preferred,
// matching the routing tie rule (fewer arcs win).
struct PathCatalog {
  struct OneHub {
    int k = -1;
    double cost = 0.0;
  };
  struct TwoHub {
    int k = -1, m = -1;  // k < m
    double fwd = 0.0;    // o-k-m-d
    double rev = 0.0;    // o-m-k-d
    double best = 0.0;   // min(fwd, rev)
  };
  struct Commodity {
    int o = -1, d = -1;
    double w = 0.0;
    std::vector<OneHub> one;  // sorted by (cost, k)
    std::vector<TwoHub> two;  // sorted by (best, k, m)
    std::vector<double> ckk;  // single-hub cost by hub, same data as `one`
  };
  int n = 0;
  std::vector<Commodity> com;  // ordered like the r_flow path list
};

PathCatalog build_path_catalog(const Instance& inst);

// Where each routed path sits relative to the catalog: the hubs and hub
// pairs that would serve the commodity strictly cheaper than its current
// path, and how that path enters and leaves the backbone.  Commodities
// whose path crosses two or more interhub arcs are excluded outright; the
// one-arc catalog cannot price their reroutes.
struct RPathIndexSets {
  struct YEdge {
    int k = -1, m = -1;  // k < m
    bool fwd = false;    // o-k-m-d beats the threshold
    bool rev = false;    // o-m-k-d does
  };
  struct Commodity {
    int o = -1, d = -1;
    double w = 0.0;
    double cbar = 0.0;  // routed path cost under sbar
    int hub_in = -1, hub_out = -1;
    int interhub_arcs = 0;
    bool excluded = false;  // two or more interhub arcs
    std::vector<int> zset;  // ordered by single-hub cost, cheapest first
    std::vector<char> in_z;
    std::vector<YEdge> yset;
  };
  int n = 0;
  std::vector<Commodity> com;
};

RPathIndexSets compute_index_sets(const PathCatalog& cat, const Design& sbar,
                                  const RFlowResult& rflow);

// Rows that pin the master flows to what the routed solution actually ships
// unless the design opens a strictly cheaper service: one row per used
// interhub direction, and (multiple allocation) per used access and
// distribution arc.  Escape terms charge the hubs and hub pairs from the
// index sets; overlapping single-hub escapes are discounted through a star
// of edges anchored at the cheapest one, which never over-counts no matter
// how many of them open together.  Only meaningful for the hub-setup-only
// objective, where reshaping the backbone is free.
std::vector<CutRow> make_optimality_cuts(const Instance& inst, const Design& sbar,
                                         const RFlowResult& rflow, const RPathIndexSets& sets);

}  // namespace hubnet
