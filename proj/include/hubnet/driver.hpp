#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hubnet/instance.hpp"
#include "hubnet/model.hpp"
#include "hubnet/separation.hpp"
#include "hubnet/subproblem.hpp"

namespace hubnet {

// Branch & Solve over the aggregated relaxation.  Nodes whose LP design is
// integral are finished by the exact routing subproblem and excluded with a
// nogood row; the node re-enters the queue so the rest of its region is not
// lost.  BSF adds disaggregation (Benders feasibility) cuts at such nodes,
// BSO additionally the arc-pinning optimality rows.
enum class Variant { BS, BSF, BSO };

enum class NodeRule { BestBound, DepthFirst };

struct SolveConfig {
  Variant variant = Variant::BS;
  double time_limit = 7200.0;  // wall-clock seconds
  double round_eps = 0.6;      // threshold of the root rounding heuristic
  double int_tol = 1e-6;       // integrality tolerance on design variables
  double prune_tol = 1e-6;     // close nodes whose bound reaches v* - prune_tol
  double cut_tol = 1e-6;       // minimum violation before a separated row is added
  DemandSepMode demand_mode = DemandSepMode::heuristic();
  NodeRule node_rule = NodeRule::BestBound;
  bool keep_cuts = false;  // copy every row added during the run into the report
  bool log_events = true;  // record one event per queue entry
};

enum class SolveStatus { Optimal, TimeLimit };

// One queue entry's fate, for replay-style checks: id and parent number the
// entries in creation order, lp is the bound known when the entry was popped
// (the parent LP value until its own LP is solved).
struct NodeEvent {
  long id = 0;
  long parent = -1;
  double lp = 0.0;
  std::string action;
};

struct SolveReport {
  SolveStatus status = SolveStatus::Optimal;
  bool found = false;  // false means no feasible design was met (or root LP infeasible)
  Design incumbent;
  Flows incumbent_flow;
  double value = std::numeric_limits<double>::infinity();
  double lower_bound = -std::numeric_limits<double>::infinity();
  double gap = 0.0;  // (value - lower_bound) / value, clamped at 0
  long nodes = 0;    // queue entries whose LP was actually solved (#Exp)
  long subproblem_calls = 0;
  std::array<int, 6> cuts_added{};  // indexed by RowFamily
  double root_lb = -std::numeric_limits<double>::infinity();
  double root_time = 0.0;        // seconds spent in the root loop + heuristic
  double subproblem_time = 0.0;  // seconds inside r_flow / flow_lp
  double wall_time = 0.0;
  std::vector<NodeEvent> events;
  std::vector<CutRow> kept_cuts;

  int added(RowFamily f) const { return cuts_added[static_cast<int>(f)]; }
};

SolveReport solve(const Instance& inst, const SolveConfig& cfg);
SolveReport solve(const Instance& inst);

// The root rounding heuristic: every design component at or above eps rounds
// to 1, the rest to 0; a non-hub left without an access (distribution) arc
// gets its largest-LP-value arc activated.  The result is kept only when it
// lies in the design domain and routes every commodity (with the flow LP
// when edge floors are in force).  sp_seconds, when given, accumulates the
// routing time so the caller can report the subproblem share.
struct HeuristicStart {
  Design s;
  Flows f;
  double value = 0.0;
};
std::optional<HeuristicStart> rounding_heuristic(const Instance& inst, const VarMap& vm,
                                                 const std::vector<double>& xbar, double eps,
                                                 double* sp_seconds = nullptr);

// Branching column: class order z, then y, then access/distribution arcs;
// most fractional within the class, smallest column index on ties.  Returns
// -1 when every design variable is within tol of a bit.
int pick_branch_var(const VarMap& vm, const std::vector<double>& xbar, double tol);

// The row excluding exactly this design's pattern from future LP solutions:
// hub and backbone bits always, allocation bits as well under single
// allocation, where distinct designs can share (z, y).
CutRow nogood_row(const Instance& inst, const VarMap& vm, const Design& s);

}  // namespace hubnet
