#pragma once

#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hubnet::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status { Optimal, Infeasible, Unbounded };

// One linear row lo <= a'x <= hi.  Equalities use lo == hi, one-sided rows
// use +-inf on the free side.  Every row must have at least one finite side.
struct Row {
  std::vector<std::pair<int, double>> coef;  // (column, value), column unique
  double lo = -kInf;
  double hi = kInf;
};

// A growing LP: columns and rows are only ever appended.  Row bounds are
// fixed at creation; variable bounds can be overridden per solve, which is
// how branching fixes binaries without copying the problem.
struct Problem {
  std::vector<double> obj, lb, ub;
  std::vector<Row> rows;

  int ncols() const { return static_cast<int>(obj.size()); }
  int nrows() const { return static_cast<int>(rows.size()); }

  int add_col(double c, double l, double u) {
    obj.push_back(c);
    lb.push_back(l);
    ub.push_back(u);
    return ncols() - 1;
  }
  int add_row(std::vector<std::pair<int, double>> coef, double lo, double hi) {
    rows.push_back(Row{std::move(coef), lo, hi});
    return nrows() - 1;
  }
  double activity(int r, const std::vector<double>& x) const {
    double a = 0.0;
    for (auto [j, v] : rows[r].coef) a += v * x[j];
    return a;
  }
};

struct BoundOverride {
  int col;
  double lo, hi;
};

struct Outcome {
  Status status = Status::Optimal;
  double obj = 0.0;
  std::vector<double> x;  // primal values, ncols
  // Row duals for the minimization problem: y[i] >= 0 when row i is binding
  // at its lower bound, y[i] <= 0 at its upper bound, 0 when slack or when
  // the row never entered the working set.
  std::vector<double> y;
  // Infeasibility certificate over rows.  With f := farkas,
  //   sum_i f_i * (f_i > 0 ? lo_i : hi_i)  >  max_{lb<=x<=ub} (f'A) x,
  // which proves no x satisfies bounds and rows simultaneously.  Empty
  // unless status == Infeasible (and the conflict is not a pure bound
  // contradiction, see bound_conflict_col).
  std::vector<double> farkas;
  int bound_conflict_col = -1;  // lb > ub detected on this column
  long iterations = 0;
};

// The backend could not produce a trustworthy answer (singular bases that
// cannot be repaired, certificate that fails verification, ...).  Distinct
// from Infeasible on purpose.
struct SolverFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bounded-variable primal simplex over a growing Problem.  The solver keeps
// the basis and the set of activated rows between calls, so re-solves after
// a bound flip or a handful of new rows are cheap.  Rows start dormant and
// are activated only when the current point violates them; dormant rows
// always report dual 0.
class Solver {
public:
  struct Config {
    double tol_feas = 1e-7;   // scaled primal feasibility
    double tol_dual = 1e-9;   // reduced-cost threshold, scaled by cost norm
    double tol_pivot = 1e-9;  // smallest acceptable pivot magnitude
    int refactor_every = 96;
    bool lazy_rows = true;  // false: activate every row up front
  };

  Solver();
  explicit Solver(Config cfg);
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;

  // `p` must be the same problem across calls (appends allowed).
  Outcome solve(const Problem& p, const std::vector<BoundOverride>& bounds = {});

  // Forget warm-start state (basis and activated rows).
  void reset();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper.
Outcome solve_once(const Problem& p, const std::vector<BoundOverride>& bounds = {});

}  // namespace hubnet::lp
