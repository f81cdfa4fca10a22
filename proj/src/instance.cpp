#include "hubnet/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace hubnet {

namespace {

struct Tokens {
  std::istream& in;
  long count = 0;

  std::string next(const char* what) {
    std::string t;
    if (!(in >> t))
      throw InstanceError(std::string("unexpected end of input, expected ") + what);
    ++count;
    return t;
  }
  double num(const char* what) {
    std::string t = next(what);
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0' || std::isnan(v))
      throw InstanceError("bad numeric token '" + t + "' for " + what);
    return v;
  }
  int integer(const char* what) {
    double v = num(what);
    if (v != std::floor(v) || std::abs(v) > 1e9)
      throw InstanceError(std::string("expected integer for ") + what);
    return static_cast<int>(v);
  }
};

Mat read_block(Tokens& tk, int n, const char* what) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = tk.num(what);
  return m;
}

// Slices the top-left nxn corner out of an NxN token block, consuming all
// N*N tokens so following blocks stay aligned.
Mat read_block_sliced(Tokens& tk, int N, int n, const char* what) {
  Mat m(n, n);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double v = tk.num(what);
      if (i < n && j < n) m(i, j) = v;
    }
  return m;
}

void check_matrix(const Mat& m, int n, const char* what, bool zero_diag) {
  if (m.rows() != n || m.cols() != n)
    throw InstanceError(std::string(what) + " block has the wrong shape");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = m(i, j);
      if (!std::isfinite(v)) throw InstanceError(std::string(what) + " has a non-finite entry");
      if (v < 0.0) throw InstanceError(std::string(what) + " has a negative entry");
      if (zero_diag && i == j && v != 0.0)
        throw InstanceError(std::string(what) + " has a nonzero diagonal entry");
    }
}

}  // namespace

void finalize(Instance& inst) {
  if (inst.n < 3) throw InstanceError("need at least 3 nodes");
  int n = inst.n;
  check_matrix(inst.c, n, "cost", true);
  check_matrix(inst.w, n, "demand", true);
  if (!(inst.alpha > 0.0) || !(inst.gamma > 0.0) || !(inst.theta > 0.0))
    throw InstanceError("discount factors must be positive");
  if ((int)inst.F.size() != n) throw InstanceError("hub cost vector has the wrong length");
  for (double f : inst.F)
    if (!std::isfinite(f) || f < 0.0) throw InstanceError("bad hub setup cost");
  if (!inst.G.empty()) check_matrix(inst.G, n, "edge setup", true);
  if (inst.kind == ModelKind::GFlowBounded) {
    if (inst.ell.empty()) throw InstanceError("flow-bounded instance without ell block");
    check_matrix(inst.ell, n, "flow lower bound", true);
  } else if (!inst.ell.empty()) {
    check_matrix(inst.ell, n, "flow lower bound", true);
  }

  inst.O.assign(n, 0.0);
  inst.D.assign(n, 0.0);
  inst.Wbar = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      inst.O[i] += inst.w(i, j);
      inst.D[j] += inst.w(i, j);
      inst.Wbar += inst.w(i, j);
    }
  if (inst.Wbar <= 0.0) throw InstanceError("instance has no demand");

  // The flow formulation needs every node reachable through the commodity
  // support graph, otherwise cut rows on a separating set are vacuous and
  // the routing subproblem is ill-posed.
  std::vector<int> comp(n, -1);
  std::vector<int> stack{0};
  comp[0] = 0;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v) {
      if (comp[v] < 0 && (inst.w(u, v) > 0.0 || inst.w(v, u) > 0.0)) {
        comp[v] = 0;
        stack.push_back(v);
      }
    }
  }
  for (int v = 0; v < n; ++v)
    if (comp[v] < 0) throw InstanceError("commodity support graph is not connected");
}

Instance parse_canonical(std::istream& in) {
  Tokens tk{in};
  Instance inst;
  inst.n = tk.integer("node count");
  inst.alpha = tk.num("alpha");
  inst.gamma = tk.num("gamma");
  inst.theta = tk.num("theta");
  std::string pol = tk.next("policy");
  if (pol == "sa")
    inst.policy = Policy::SA;
  else if (pol == "ma")
    inst.policy = Policy::MA;
  else
    throw InstanceError("unknown policy '" + pol + "'");
  std::string kind = tk.next("model kind");
  if (kind == "h")
    inst.kind = ModelKind::HMedian;
  else if (kind == "g")
    inst.kind = ModelKind::GMedian;
  else if (kind == "gfb")
    inst.kind = ModelKind::GFlowBounded;
  else
    throw InstanceError("unknown model kind '" + kind + "'");
  inst.c = read_block(tk, inst.n, "cost");
  inst.w = read_block(tk, inst.n, "demand");
  inst.F.resize(inst.n);
  for (int i = 0; i < inst.n; ++i) inst.F[i] = tk.num("hub cost");
  if (inst.kind == ModelKind::GFlowBounded) inst.ell = read_block(tk, inst.n, "ell");
  finalize(inst);
  if (inst.kind != ModelKind::HMedian) {
    // edge setup costs are always the demand-scaled distances
    inst.G = Mat(inst.n, inst.n);
    for (int i = 0; i < inst.n; ++i)
      for (int j = 0; j < inst.n; ++j)
        if (i != j) inst.G(i, j) = inst.Wbar * inst.c(i, j) / (inst.n * inst.n);
  }
  return inst;
}

void write_canonical(std::ostream& out, const Instance& inst) {
  auto block = [&](const Mat& m) {
    for (int i = 0; i < inst.n; ++i) {
      for (int j = 0; j < inst.n; ++j) {
        if (j) out << ' ';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
        out << buf;
      }
      out << '\n';
    }
  };
  const char* pol = inst.policy == Policy::SA ? "sa" : "ma";
  const char* kind = inst.kind == ModelKind::HMedian  ? "h"
                     : inst.kind == ModelKind::GMedian ? "g"
                                                       : "gfb";
  char head[128];
  std::snprintf(head, sizeof head, "%d %.17g %.17g %.17g %s %s\n", inst.n, inst.alpha,
                inst.gamma, inst.theta, pol, kind);
  out << head;
  block(inst.c);
  block(inst.w);
  for (int i = 0; i < inst.n; ++i) {
    if (i) out << ' ';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", inst.F[i]);
    out << buf;
  }
  out << '\n';
  if (inst.kind == ModelKind::GFlowBounded) block(inst.ell);
}

Instance parse_cab(std::istream& in, int n, double alpha, double gamma, double theta,
                   Policy policy, ModelKind kind) {
  Tokens tk{in};
  int N = tk.integer("node count");
  if (n > N) throw InstanceError("slice larger than the raw data");
  Instance inst;
  inst.n = n;
  inst.alpha = alpha;
  inst.gamma = gamma;
  inst.theta = theta;
  inst.policy = policy;
  inst.kind = kind;
  inst.w = read_block_sliced(tk, N, n, "demand");
  inst.c = read_block_sliced(tk, N, n, "cost");
  for (int i = 0; i < n; ++i) inst.w(i, i) = 0.0;
  inst.F.assign(n, 0.0);
  if (kind == ModelKind::GFlowBounded) {
    inst.ell = Mat(n, n);  // filled by derive_setup_costs(FlowBounded)
  }
  finalize(inst);
  return inst;
}

Instance parse_ap(std::istream& in, int n, double alpha, double gamma, double theta,
                  Policy policy, ModelKind kind) {
  Tokens tk{in};
  int N = tk.integer("node count");
  if (n > N) throw InstanceError("slice larger than the raw data");
  std::vector<double> px(N), py(N);
  for (int i = 0; i < N; ++i) {
    px[i] = tk.num("x coordinate");
    py[i] = tk.num("y coordinate");
  }
  Instance inst;
  inst.n = n;
  inst.alpha = alpha;
  inst.gamma = gamma;
  inst.theta = theta;
  inst.policy = policy;
  inst.kind = kind;
  inst.w = read_block_sliced(tk, N, n, "demand");
  for (int i = 0; i < n; ++i) inst.w(i, i) = 0.0;
  inst.c = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) inst.c(i, j) = std::hypot(px[i] - px[j], py[i] - py[j]);
  inst.F.assign(n, 0.0);
  if (kind == ModelKind::GFlowBounded) inst.ell = Mat(n, n);
  finalize(inst);
  return inst;
}

void derive_setup_costs(Instance& inst, SetupCostMode mode) {
  if (inst.O.empty()) finalize(inst);
  int n = inst.n;
  if (mode == SetupCostMode::Standard) {
    inst.G = Mat(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) inst.G(i, j) = inst.Wbar * inst.c(i, j) / (n * n);
  } else {
    inst.ell = Mat(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) inst.ell(i, j) = 25.0 * (inst.w(i, j) + inst.w(j, i));
    for (double& f : inst.F) f /= 10.0;
  }
}

double cut_demand(const Instance& inst, const std::vector<int>& S) {
  std::vector<char> in_s(inst.n, 0);
  int cnt = 0;
  for (int v : S) {
    if (v < 0 || v >= inst.n) throw InstanceError("cut set contains a bad node id");
    if (!in_s[v]) {
      in_s[v] = 1;
      ++cnt;
    }
  }
  if (cnt == 0 || cnt == inst.n)
    throw InstanceError("cut set must be a proper nonempty subset");
  double W = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    if (!in_s[i]) continue;
    for (int j = 0; j < inst.n; ++j)
      if (!in_s[j]) W += inst.w(i, j);
  }
  return W;
}

std::vector<std::pair<int, int>> commodities(const Instance& inst) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.n; ++j)
      if (i != j && inst.w(i, j) > 0.0) out.push_back({i, j});
  return out;
}

std::vector<double> parse_value_list(std::istream& in) {
  std::vector<double> vals;
  std::string t;
  while (in >> t) {
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0' || std::isnan(v))
      throw InstanceError("bad numeric token '" + t + "' in value list");
    vals.push_back(v);
  }
  return vals;
}

}  // namespace hubnet
