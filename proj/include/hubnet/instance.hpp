#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hubnet/dense.hpp"

namespace hubnet {

enum class Policy { SA, MA };
enum class ModelKind { HMedian, GMedian, GFlowBounded };

// Standard:    edge setup G_km = Wbar * c_km / n^2
// FlowBounded: ell_km = 25 * (w_km + w_mk) and F_k <- F_k / 10
enum class SetupCostMode { Standard, FlowBounded };

struct InstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Instance {
  int n = 0;
  Mat c;  // unit routing costs, zero diagonal
  Mat w;  // demands, zero diagonal
  double alpha = 1.0, gamma = 1.0, theta = 1.0;
  Policy policy = Policy::MA;
  ModelKind kind = ModelKind::HMedian;
  std::vector<double> F;  // hub setup costs
  Mat G;                  // edge setup costs (empty until derived/needed)
  Mat ell;                // interhub flow lower bounds (empty unless G-FB)
  std::string name;

  // derived by finalize()
  std::vector<double> O, D;  // row/column demand sums
  double Wbar = 0.0;

  int arcs() const { return n * (n - 1); }
  int edges() const { return n * (n - 1) / 2; }
};

// Validates the instance and computes O, D and Wbar.  Throws InstanceError
// on malformed data (negative/NaN entries, nonzero diagonals, missing F,
// a disconnected commodity support graph, ...).
void finalize(Instance& inst);

// Self-describing text format:
//   n alpha gamma theta {sa|ma} {h|g|gfb}
//   n*n cost block, n*n demand block, n hub costs, [n*n ell block, gfb only]
Instance parse_canonical(std::istream& in);
void write_canonical(std::ostream& out, const Instance& inst);

// Raw benchmark layouts.  CAB: node count, demand block, cost block.
// AP: node count, coordinate pairs, demand block (costs are the plane
// distances).  Both are sliced to their first n nodes.
Instance parse_cab(std::istream& in, int n, double alpha, double gamma, double theta,
                   Policy policy, ModelKind kind);
Instance parse_ap(std::istream& in, int n, double alpha, double gamma, double theta,
                  Policy policy, ModelKind kind);

void derive_setup_costs(Instance& inst, SetupCostMode mode);

// Total demand crossing an s-side node set: sum_{i in S, j not in S} w_ij.
// S must be a proper nonempty subset of the nodes.
double cut_demand(const Instance& inst, const std::vector<int>& S);

// Ordered pairs with positive demand.
std::vector<std::pair<int, int>> commodities(const Instance& inst);

// Whitespace-separated doubles, e.g. for --hub-costs files.
std::vector<double> parse_value_list(std::istream& in);

}  // namespace hubnet
