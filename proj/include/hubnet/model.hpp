#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hubnet/instance.hpp"
#include "hubnet/lp.hpp"

namespace hubnet {

// Dense ids shared by LP columns and design/flow vectors.  Arcs are the
// ordered pairs (i,j), i != j; edges the unordered pairs, listed k < m.
int arc_index(int n, int i, int j);
int edge_index(int n, int k, int m);
std::pair<int, int> arc_nodes(int n, int a);
std::pair<int, int> edge_nodes(int n, int e);

// Column layout: z block, y block, then x1, x2 (binary), then t, h1, h2
// (continuous), each indexed by arc id.  Binaries come first so branching
// code can scan a prefix.
struct VarMap {
  int n = 0;

  int arcs() const { return n * (n - 1); }
  int edges() const { return n * (n - 1) / 2; }
  int nvars() const { return n + edges() + 5 * arcs(); }
  int nbin() const { return n + edges() + 2 * arcs(); }
  bool is_binary(int col) const { return col < nbin(); }

  int z(int k) const { return k; }
  int y(int k, int m) const { return n + edge_index(n, k, m); }
  int x1(int i, int j) const { return n + edges() + arc_index(n, i, j); }
  int x2(int i, int j) const { return n + edges() + arcs() + arc_index(n, i, j); }
  int t(int i, int j) const { return nbin() + arc_index(n, i, j); }
  int h1(int i, int j) const { return nbin() + arcs() + arc_index(n, i, j); }
  int h2(int i, int j) const { return nbin() + 2 * arcs() + arc_index(n, i, j); }

  std::string name(int col) const;
};

// A 0/1 network design: open hubs, interhub edges (by edge id) and
// access/distribution arcs (by arc id).
struct Design {
  int n = 0;
  std::vector<char> z;   // n
  std::vector<char> y;   // n(n-1)/2
  std::vector<char> x1;  // n(n-1)
  std::vector<char> x2;  // n(n-1)

  static Design zeros(int n);

  bool hub(int k) const { return z[k] != 0; }
  bool link(int k, int m) const { return y[edge_index(n, k, m)] != 0; }
  bool access(int i, int j) const { return x1[arc_index(n, i, j)] != 0; }
  bool dist(int i, int j) const { return x2[arc_index(n, i, j)] != 0; }

  bool operator==(const Design&) const = default;
};

// Aggregated arc flows, indexed by arc id like the x blocks.
struct Flows {
  int n = 0;
  std::vector<double> t, h1, h2;  // n(n-1) each

  static Flows zeros(int n);

  double t_at(int i, int j) const { return t[arc_index(n, i, j)]; }
  double h1_at(int i, int j) const { return h1[arc_index(n, i, j)]; }
  double h2_at(int i, int j) const { return h2[arc_index(n, i, j)]; }
};

bool design_integral(const VarMap& vm, const std::vector<double>& x, double tol = 1e-6);
Design extract_design(const VarMap& vm, const std::vector<double>& x);
Flows extract_flows(const VarMap& vm, const std::vector<double>& x);

// Assembles the full LP point of an integer solution (for cut screening and
// re-evaluation).
std::vector<double> pack_point(const VarMap& vm, const Design& s, const Flows& f);

// Bound overrides pinning every design variable to the given 0/1 values.
std::vector<lp::BoundOverride> fix_design(const VarMap& vm, const Design& s);

// Exact membership test for the design polytope, including the single
// allocation tightenings when the instance runs that policy.  On failure a
// short reason is written to *why when provided.
bool design_ok(const Instance& inst, const Design& s, std::string* why = nullptr);

// Multiple allocation only: opens every access and distribution arc the
// hub set admits (x1_ij = 1 iff i non-hub, j hub; x2 mirrored).  z and y
// are left untouched.
void maximalize_access(const Instance& inst, Design& s);

double activation_cost(const Instance& inst, const Design& s);
double routing_cost(const Instance& inst, const Flows& f);
double evaluate(const Instance& inst, const Design& s, const Flows& f);

enum class RowFamily { Static, Demand, Connectivity, Feasibility, Optimality, Nogood };

// A dynamically separated row; the sense is always >=.
struct CutRow {
  RowFamily family = RowFamily::Demand;
  std::vector<std::pair<int, double>> coef;
  double rhs = 0.0;
};

// The relaxation, shared by a whole enumeration tree: static design and flow
// rows are built once, branching enters through per-solve bound overrides,
// and cut pools only ever grow.  The embedded solver keeps its basis between
// calls, so re-solves after a branch or a few new cuts are cheap.
class Model {
 public:
  // The instance must outlive the model.  seed_cuts controls the initial
  // singleton aggregated-demand rows (one per node) and pairwise backbone
  // connectivity rows; turning it off leaves only the static rows, which a
  // few diagnostics need.
  explicit Model(const Instance& inst, bool seed_cuts = true);

  const Instance& inst() const { return *inst_; }
  const VarMap& vars() const { return vm_; }
  const lp::Problem& problem() const { return prob_; }

  // Appends the row unless an identical pattern (same sorted coefficients
  // and right-hand side) is already pooled.  Returns whether it was added.
  bool add_cut(const CutRow& cut);

  int rows_in(RowFamily f) const;
  const std::vector<CutRow>& cuts() const { return cuts_; }

  // Aggregated demand row for a proper nonempty node subset S: flow leaving
  // S must cover the demand crossing S, with the single-allocation transit
  // strengthening when that policy is active.
  CutRow demand_row(const std::vector<int>& S) const;

  // Backbone connectivity row certified by hubs i in S, j outside S; the
  // pair must have positive demand for the row to be valid.
  CutRow connectivity_row(const std::vector<int>& S, int i, int j) const;

  lp::Outcome solve_lp(const std::vector<lp::BoundOverride>& bounds = {});

  // Text dump in the usual LP file syntax, for debugging.
  void write_lp(std::ostream& out) const;

 private:
  void build_columns();
  void build_static_rows();
  void seed_initial_cuts();

  const Instance* inst_;
  VarMap vm_;
  lp::Problem prob_;
  lp::Solver solver_;
  std::vector<CutRow> cuts_;
  std::unordered_map<std::string, int> fingerprints_;
  int static_rows_ = 0;
  int family_rows_[6] = {0, 0, 0, 0, 0, 0};
  double last_unrestricted_obj_;
};

}  // namespace hubnet
