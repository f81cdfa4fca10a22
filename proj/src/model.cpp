#include "hubnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hubnet/separation.hpp"

namespace hubnet {

int arc_index(int n, int i, int j) {
  return i * (n - 1) + (j > i ? j - 1 : j);
}

std::pair<int, int> arc_nodes(int n, int a) {
  int i = a / (n - 1);
  int r = a % (n - 1);
  return {i, r >= i ? r + 1 : r};
}

int edge_index(int n, int k, int m) {
  if (k > m) std::swap(k, m);
  return k * n - k * (k + 1) / 2 + (m - k - 1);
}

std::pair<int, int> edge_nodes(int n, int e) {
  int k = 0;
  while (e >= n - 1 - k) {
    e -= n - 1 - k;
    ++k;
  }
  return {k, k + 1 + e};
}

std::string VarMap::name(int col) const {
  int nE = edges(), nA = arcs();
  auto arcname = [&](const char* tag, int a) {
    auto [i, j] = arc_nodes(n, a);
    return std::string(tag) + std::to_string(i) + "_" + std::to_string(j);
  };
  if (col < n) return "z" + std::to_string(col);
  col -= n;
  if (col < nE) {
    auto [k, m] = edge_nodes(n, col);
    return "y" + std::to_string(k) + "_" + std::to_string(m);
  }
  col -= nE;
  if (col < nA) return arcname("x1_", col);
  col -= nA;
  if (col < nA) return arcname("x2_", col);
  col -= nA;
  if (col < nA) return arcname("t", col);
  col -= nA;
  if (col < nA) return arcname("h1_", col);
  col -= nA;
  return arcname("h2_", col);
}

Design Design::zeros(int n) {
  Design s;
  s.n = n;
  s.z.assign(n, 0);
  s.y.assign(n * (n - 1) / 2, 0);
  s.x1.assign(n * (n - 1), 0);
  s.x2.assign(n * (n - 1), 0);
  return s;
}

Flows Flows::zeros(int n) {
  Flows f;
  f.n = n;
  f.t.assign(n * (n - 1), 0.0);
  f.h1.assign(n * (n - 1), 0.0);
  f.h2.assign(n * (n - 1), 0.0);
  return f;
}

bool design_integral(const VarMap& vm, const std::vector<double>& x, double tol) {
  for (int col = 0; col < vm.nbin(); ++col) {
    double v = x[col];
    if (std::min(v, 1.0 - v) > tol) return false;
  }
  return true;
}

Design extract_design(const VarMap& vm, const std::vector<double>& x) {
  Design s = Design::zeros(vm.n);
  for (int k = 0; k < vm.n; ++k) s.z[k] = x[vm.z(k)] > 0.5;
  for (int e = 0; e < vm.edges(); ++e) s.y[e] = x[vm.n + e] > 0.5;
  for (int a = 0; a < vm.arcs(); ++a) {
    s.x1[a] = x[vm.n + vm.edges() + a] > 0.5;
    s.x2[a] = x[vm.n + vm.edges() + vm.arcs() + a] > 0.5;
  }
  return s;
}

Flows extract_flows(const VarMap& vm, const std::vector<double>& x) {
  Flows f = Flows::zeros(vm.n);
  for (int a = 0; a < vm.arcs(); ++a) {
    f.t[a] = x[vm.nbin() + a];
    f.h1[a] = x[vm.nbin() + vm.arcs() + a];
    f.h2[a] = x[vm.nbin() + 2 * vm.arcs() + a];
  }
  return f;
}

std::vector<double> pack_point(const VarMap& vm, const Design& s, const Flows& f) {
  std::vector<double> x(vm.nvars(), 0.0);
  for (int k = 0; k < vm.n; ++k) x[vm.z(k)] = s.z[k];
  for (int e = 0; e < vm.edges(); ++e) x[vm.n + e] = s.y[e];
  for (int a = 0; a < vm.arcs(); ++a) {
    x[vm.n + vm.edges() + a] = s.x1[a];
    x[vm.n + vm.edges() + vm.arcs() + a] = s.x2[a];
    x[vm.nbin() + a] = f.t[a];
    x[vm.nbin() + vm.arcs() + a] = f.h1[a];
    x[vm.nbin() + 2 * vm.arcs() + a] = f.h2[a];
  }
  return x;
}

std::vector<lp::BoundOverride> fix_design(const VarMap& vm, const Design& s) {
  std::vector<lp::BoundOverride> ov;
  ov.reserve(vm.nbin());
  auto pin = [&](int col, bool v) {
    double b = v ? 1.0 : 0.0;
    ov.push_back({col, b, b});
  };
  for (int k = 0; k < vm.n; ++k) pin(vm.z(k), s.z[k]);
  for (int e = 0; e < vm.edges(); ++e) pin(vm.n + e, s.y[e]);
  for (int a = 0; a < vm.arcs(); ++a) {
    pin(vm.n + vm.edges() + a, s.x1[a]);
    pin(vm.n + vm.edges() + vm.arcs() + a, s.x2[a]);
  }
  return ov;
}

bool design_ok(const Instance& inst, const Design& s, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  int n = inst.n;
  if (s.n != n || (int)s.z.size() != n || (int)s.y.size() != inst.edges() ||
      (int)s.x1.size() != inst.arcs() || (int)s.x2.size() != inst.arcs())
    return fail("design dimensions do not match the instance");
  auto id = [&](int i, int j) { return std::to_string(i) + "-" + std::to_string(j); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int ye = s.link(i, j);
      int a1 = s.access(i, j), a2 = s.access(j, i);
      int b1 = s.dist(i, j), b2 = s.dist(j, i);
      if (a1 + b1 + ye > 1 || a2 + b2 + ye > 1)
        return fail("edge " + id(i, j) + " activated in more than one class");
      if (a1 + ye > s.z[j] || a2 + ye > s.z[i])
        return fail("access head or edge end at " + id(i, j) + " is not a hub");
      if (b1 + ye > s.z[i] || b2 + ye > s.z[j])
        return fail("distribution tail or edge end at " + id(i, j) + " is not a hub");
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (s.access(i, j) && s.hub(i)) return fail("access arc " + id(i, j) + " leaves a hub");
      if (s.dist(i, j) && s.hub(j)) return fail("distribution arc " + id(i, j) + " enters a hub");
    }
  for (int i = 0; i < n; ++i) {
    int out = 0, in = 0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      out += s.access(i, j);
      in += s.dist(j, i);
    }
    if (out + s.z[i] < 1) return fail("node " + std::to_string(i) + " has no access arc");
    if (in + s.z[i] < 1) return fail("node " + std::to_string(i) + " has no distribution arc");
    if (inst.policy == Policy::SA && out + s.z[i] != 1)
      return fail("node " + std::to_string(i) + " is multiply allocated");
  }
  if (inst.policy == Policy::SA) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && s.dist(i, j) != s.access(j, i))
          return fail("distribution arcs are not mirrored at " + id(i, j));
  }
  return true;
}

void maximalize_access(const Instance& inst, Design& s) {
  if (inst.policy != Policy::MA)
    throw std::logic_error("access maximalization only applies to multiple allocation");
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j) {
      if (i == j) continue;
      int a = arc_index(inst.n, i, j);
      s.x1[a] = !s.hub(i) && s.hub(j);
      s.x2[a] = s.hub(i) && !s.hub(j);
    }
}

double activation_cost(const Instance& inst, const Design& s) {
  double v = 0.0;
  for (int k = 0; k < inst.n; ++k)
    if (s.z[k]) v += inst.F[k];
  if (inst.kind != ModelKind::HMedian) {
    if (inst.G.empty()) throw InstanceError("edge setup costs are not derived");
    for (int k = 0; k < inst.n; ++k)
      for (int m = k + 1; m < inst.n; ++m)
        if (s.link(k, m)) v += inst.G(k, m);
  }
  return v;
}

double routing_cost(const Instance& inst, const Flows& f) {
  double v = 0.0;
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j) {
      if (i == j) continue;
      int a = arc_index(inst.n, i, j);
      v += inst.c(i, j) *
           (inst.gamma * f.h1[a] + inst.alpha * f.t[a] + inst.theta * f.h2[a]);
    }
  return v;
}

double evaluate(const Instance& inst, const Design& s, const Flows& f) {
  return activation_cost(inst, s) + routing_cost(inst, f);
}

Model::Model(const Instance& inst, bool seed_cuts)
    : inst_(&inst), last_unrestricted_obj_(-lp::kInf) {
  if (inst.n < 3) throw InstanceError("model needs at least three nodes");
  if (inst.kind != ModelKind::HMedian && inst.G.empty())
    throw InstanceError("edge setup costs are not derived");
  if (inst.kind == ModelKind::GFlowBounded && inst.ell.empty())
    throw InstanceError("flow lower bounds are not derived");
  vm_.n = inst.n;
  build_columns();
  build_static_rows();
  if (seed_cuts) seed_initial_cuts();
}

void Model::build_columns() {
  const Instance& in = *inst_;
  int n = in.n;
  for (int k = 0; k < n; ++k) prob_.add_col(in.F[k], 0.0, 1.0);
  for (int e = 0; e < vm_.edges(); ++e) {
    auto [k, m] = edge_nodes(n, e);
    double g = in.kind == ModelKind::HMedian ? 0.0 : in.G(k, m);
    prob_.add_col(g, 0.0, 1.0);
  }
  for (int a = 0; a < 2 * vm_.arcs(); ++a) prob_.add_col(0.0, 0.0, 1.0);
  for (int a = 0; a < vm_.arcs(); ++a) {
    auto [i, j] = arc_nodes(n, a);
    prob_.add_col(in.alpha * in.c(i, j), 0.0, in.Wbar);
  }
  for (int a = 0; a < vm_.arcs(); ++a) {
    auto [i, j] = arc_nodes(n, a);
    prob_.add_col(in.gamma * in.c(i, j), 0.0, in.O[i]);
  }
  for (int a = 0; a < vm_.arcs(); ++a) {
    auto [i, j] = arc_nodes(n, a);
    prob_.add_col(in.theta * in.c(i, j), 0.0, in.D[j]);
  }
}

void Model::build_static_rows() {
  const Instance& in = *inst_;
  const VarMap& v = vm_;
  int n = in.n;
  bool sa = in.policy == Policy::SA;
  auto add = [&](std::vector<std::pair<int, double>> coef, double lo, double hi) {
    prob_.add_row(std::move(coef), lo, hi);
    ++static_rows_;
  };

  // each edge and its two arcs can host at most one activated class, and
  // edge/arc endpoints must be hubs on the right side; under single
  // allocation the mirrored orientation rows are implied and skipped
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int ye = v.y(i, j);
      add({{v.x1(i, j), 1}, {v.x2(i, j), 1}, {ye, 1}}, -lp::kInf, 1.0);
      if (!sa) add({{v.x1(j, i), 1}, {v.x2(j, i), 1}, {ye, 1}}, -lp::kInf, 1.0);
      add({{v.x1(i, j), 1}, {ye, 1}, {v.z(j), -1}}, -lp::kInf, 0.0);
      if (!sa) add({{v.x1(j, i), 1}, {ye, 1}, {v.z(i), -1}}, -lp::kInf, 0.0);
      add({{v.x2(i, j), 1}, {ye, 1}, {v.z(i), -1}}, -lp::kInf, 0.0);
      if (!sa) add({{v.x2(j, i), 1}, {ye, 1}, {v.z(j), -1}}, -lp::kInf, 0.0);
    }

  if (sa) {
    // distribution arcs mirror access arcs
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) add({{v.x2(i, j), 1}, {v.x1(j, i), -1}}, 0.0, 0.0);
  } else {
    // an access or distribution arc has exactly one hub endpoint
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        add({{v.x1(i, j), 1}, {v.z(i), 1}}, -lp::kInf, 1.0);
        add({{v.x2(i, j), 1}, {v.z(j), 1}}, -lp::kInf, 1.0);
      }
  }

  // every non-hub node is allocated somewhere; exactly once under SA
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> out{{v.z(i), 1}};
    for (int j = 0; j < n; ++j)
      if (j != i) out.push_back({v.x1(i, j), 1});
    add(std::move(out), 1.0, sa ? 1.0 : lp::kInf);
    if (!sa) {
      std::vector<std::pair<int, double>> inn{{v.z(i), 1}};
      for (int j = 0; j < n; ++j)
        if (j != i) inn.push_back({v.x2(j, i), 1});
      add(std::move(inn), 1.0, lp::kInf);
    }
  }

  // demand leaves non-hub origins on access arcs and reaches non-hub
  // destinations on distribution arcs; hubs balance everything else
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> r1{{v.z(i), in.O[i]}};
    std::vector<std::pair<int, double>> r2{{v.z(i), in.D[i]}};
    std::vector<std::pair<int, double>> r3{{v.z(i), in.O[i] - in.D[i]}};
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      r1.push_back({v.h1(i, j), 1});
      r2.push_back({v.h2(j, i), 1});
      r3.push_back({v.h1(j, i), 1});
      r3.push_back({v.t(j, i), 1});
      r3.push_back({v.h2(i, j), -1});
      r3.push_back({v.t(i, j), -1});
    }
    add(std::move(r1), in.O[i], in.O[i]);
    add(std::move(r2), in.D[i], in.D[i]);
    add(std::move(r3), 0.0, 0.0);
  }

  // arc flows live only on activated arcs, within demand-derived bounds;
  // single allocation pins them exactly
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (sa) {
        add({{v.h1(i, j), 1}, {v.x1(i, j), -in.O[i]}}, 0.0, 0.0);
        add({{v.h2(i, j), 1}, {v.x2(i, j), -in.D[j]}}, 0.0, 0.0);
      } else {
        add({{v.h1(i, j), 1}, {v.x1(i, j), -in.O[i]}}, -lp::kInf, 0.0);
        add({{v.h2(i, j), 1}, {v.x2(i, j), -in.D[j]}}, -lp::kInf, 0.0);
        if (in.w(i, j) > 0.0) {
          add({{v.h1(i, j), 1}, {v.x1(i, j), -in.w(i, j)}}, 0.0, lp::kInf);
          add({{v.h2(i, j), 1}, {v.x2(i, j), -in.w(i, j)}}, 0.0, lp::kInf);
        }
      }
    }

  // interhub flow needs its edge open, and an open edge carries at least
  // the demand between its endpoints (or the imposed lower bound)
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double lo = in.kind == ModelKind::GFlowBounded ? in.ell(i, j)
                                                     : in.w(i, j) + in.w(j, i);
      add({{v.t(i, j), 1}, {v.t(j, i), 1}, {v.y(i, j), -in.Wbar}}, -lp::kInf, 0.0);
      if (lo > 0.0)
        add({{v.t(i, j), 1}, {v.t(j, i), 1}, {v.y(i, j), -lo}}, 0.0, lp::kInf);
    }
}

void Model::seed_initial_cuts() {
  const Instance& in = *inst_;
  for (int i = 0; i < in.n; ++i)
    if (in.O[i] > 0.0) add_cut(demand_row({i}));
  for (int i = 0; i < in.n; ++i)
    for (int j = 0; j < in.n; ++j)
      if (i != j && in.w(i, j) + in.w(j, i) > 0.0)
        add_cut(connectivity_row({i}, i, j));
}

CutRow Model::demand_row(const std::vector<int>& S) const {
  return make_demand_row(*inst_, S);
}

CutRow Model::connectivity_row(const std::vector<int>& S, int i, int j) const {
  return make_connectivity_row(*inst_, S, i, j);
}

bool Model::add_cut(const CutRow& cut) {
  std::map<int, double> merged;
  for (auto [col, val] : cut.coef) {
    if (col < 0 || col >= prob_.ncols())
      throw std::invalid_argument("cut references an unknown column");
    merged[col] += val;
  }
  std::vector<std::pair<int, double>> coef;
  coef.reserve(merged.size());
  for (auto [col, val] : merged)
    if (val != 0.0) coef.push_back({col, val});

  std::string key;
  key.reserve(coef.size() * 12 + 8);
  auto put = [&key](const void* p, size_t len) {
    key.append(static_cast<const char*>(p), len);
  };
  for (auto& [col, val] : coef) {
    put(&col, sizeof col);
    put(&val, sizeof val);
  }
  put(&cut.rhs, sizeof cut.rhs);

  auto [it, fresh] = fingerprints_.try_emplace(std::move(key), prob_.nrows());
  if (!fresh) return false;
  prob_.add_row(coef, cut.rhs, lp::kInf);
  CutRow stored;
  stored.family = cut.family;
  stored.coef = std::move(coef);
  stored.rhs = cut.rhs;
  cuts_.push_back(std::move(stored));
  ++family_rows_[static_cast<int>(cut.family)];
  return true;
}

int Model::rows_in(RowFamily f) const {
  if (f == RowFamily::Static) return static_rows_;
  return family_rows_[static_cast<int>(f)];
}

lp::Outcome Model::solve_lp(const std::vector<lp::BoundOverride>& bounds) {
  lp::Outcome out = solver_.solve(prob_, bounds);
  if (out.status == lp::Status::Optimal && bounds.empty()) {
    // the pool only grows, so the unrestricted relaxation cannot weaken
    double slack = 1e-6 * (1.0 + std::abs(last_unrestricted_obj_));
    if (out.obj < last_unrestricted_obj_ - slack)
      throw lp::SolverFault("relaxation value regressed after adding rows");
    last_unrestricted_obj_ = std::max(last_unrestricted_obj_, out.obj);
  }
  return out;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_terms(std::ostream& out, const VarMap& vm,
                 const std::vector<std::pair<int, double>>& coef) {
  int on_line = 0;
  bool first = true;
  for (auto [col, val] : coef) {
    if (val == 0.0) continue;
    if (on_line == 6) {
      out << "\n   ";
      on_line = 0;
    }
    double mag = std::abs(val);
    out << (val < 0 ? " - " : first ? " " : " + ");
    if (mag != 1.0) out << num(mag) << " ";
    out << vm.name(col);
    first = false;
    ++on_line;
  }
  if (first) out << " 0 " << vm.name(0);
}

}  // namespace

void Model::write_lp(std::ostream& out) const {
  const lp::Problem& p = prob_;
  out << "\\ " << (inst_->name.empty() ? "unnamed" : inst_->name) << ", "
      << p.ncols() << " columns, " << p.nrows() << " rows\n";
  out << "Minimize\n obj:";
  std::vector<std::pair<int, double>> obj;
  for (int j = 0; j < p.ncols(); ++j)
    if (p.obj[j] != 0.0) obj.push_back({j, p.obj[j]});
  write_terms(out, vm_, obj);
  out << "\nSubject To\n";
  for (int r = 0; r < p.nrows(); ++r) {
    const lp::Row& row = p.rows[r];
    out << " r" << r << ":";
    write_terms(out, vm_, row.coef);
    if (row.lo == row.hi)
      out << " = " << num(row.lo);
    else if (row.hi < lp::kInf)
      out << " <= " << num(row.hi);
    else
      out << " >= " << num(row.lo);
    out << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < p.ncols(); ++j)
    out << " " << num(p.lb[j]) << " <= " << vm_.name(j) << " <= " << num(p.ub[j])
        << "\n";
  out << "Binaries\n";
  for (int j = 0; j < vm_.nbin(); ++j)
    out << (j % 8 == 0 ? " " : " ") << vm_.name(j) << (j % 8 == 7 ? "\n" : "");
  if (vm_.nbin() % 8 != 0) out << "\n";
  out << "End\n";
}

}  // namespace hubnet
