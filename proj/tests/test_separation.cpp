#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "hubnet/model.hpp"
#include "hubnet/separation.hpp"
#include "hubnet/subproblem.hpp"
#include "testutil.hpp"

using namespace hubnet;

namespace {

Instance load_cab(int n, double alpha, Policy pol = Policy::MA,
                  ModelKind kind = ModelKind::HMedian) {
  std::ifstream in(std::string(HUBNET_DATA_DIR) + "/cab10.txt");
  REQUIRE(in.good());
  Instance inst = parse_cab(in, n, alpha, 1.0, 1.0, pol, kind);
  if (kind != ModelKind::HMedian) derive_setup_costs(inst, SetupCostMode::Standard);
  if (kind == ModelKind::GFlowBounded)
    derive_setup_costs(inst, SetupCostMode::FlowBounded);
  return inst;
}

double activity(const CutRow& cut, const std::vector<double>& x) {
  double a = 0.0;
  for (auto [col, v] : cut.coef) a += v * x[col];
  return a;
}

// rhs minus activity: positive means the >= row is violated at x.
double shortfall(const CutRow& cut, const std::vector<double>& x) {
  return cut.rhs - activity(cut, x);
}

std::map<int, double> coef_map(const CutRow& cut) {
  std::map<int, double> m;
  for (auto [col, v] : cut.coef) m[col] += v;
  return m;
}

double surplus(const Instance& inst, const Flows& f, const std::vector<int>& S) {
  std::vector<char> in_s(inst.n, 0);
  for (int v : S) in_s[v] = 1;
  double val = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    if (!in_s[i]) continue;
    for (int j = 0; j < inst.n; ++j) {
      if (j == i || in_s[j]) continue;
      val += f.t_at(i, j) + f.h1_at(i, j) + f.h2_at(i, j) - inst.w(i, j);
    }
  }
  return val;
}

// Two hubs 3 and 4 on cab10, every spoke served entirely by the hub on its
// own side of the continental split, transit pinned to the interhub floor.
// Feasible without the aggregated demand rows and far below them.
struct SplitFixture {
  Design s;
  Flows f;
  std::vector<int> S{2, 4, 5, 6, 7, 9};
};

SplitFixture split_fixture(const Instance& inst) {
  const int n = inst.n;
  SplitFixture fx;
  fx.s = Design::zeros(n);
  fx.s.z[3] = fx.s.z[4] = 1;
  fx.s.y[edge_index(n, 3, 4)] = 1;
  fx.f = Flows::zeros(n);
  std::set<int> side4(fx.S.begin(), fx.S.end());
  for (int a = 0; a < n; ++a) {
    if (a == 3 || a == 4) continue;
    const int h = side4.count(a) ? 4 : 3;
    fx.s.x1[arc_index(n, a, h)] = 1;
    fx.s.x2[arc_index(n, h, a)] = 1;
    fx.f.h1[arc_index(n, a, h)] = inst.O[a];
    fx.f.h2[arc_index(n, h, a)] = inst.D[a];
  }
  // the sides generate exactly what they consume, so conservation needs no
  // net transit; the interhub floor w34 + w43 = 904 splits evenly
  fx.f.t[arc_index(n, 3, 4)] = fx.f.t[arc_index(n, 4, 3)] = 452.0;
  return fx;
}

Design narrowed_two_hub_design(const Instance& inst) {
  Design s = Design::zeros(inst.n);
  s.z[4] = s.z[8] = 1;
  s.y[edge_index(inst.n, 4, 8)] = 1;
  for (int i = 0; i < inst.n; ++i) {
    if (s.hub(i)) continue;
    const bool only4 = (i == 6 || i == 9);
    const bool only8 = (i == 1 || i == 3);
    s.x1[arc_index(inst.n, i, 4)] = 1;
    if (!only4) s.x1[arc_index(inst.n, i, 8)] = 1;
    s.x2[arc_index(inst.n, 8, i)] = 1;
    if (!only8) s.x2[arc_index(inst.n, 4, i)] = 1;
  }
  return s;
}

// Hub set as a bitmask, full backbone among the hubs, every access and
// distribution arc open.  The cheapest solution for a given hub set always
// has this shape when edges are free, so these designs are the adversaries
// the optimality rows must never cut.
Design completed_maximal(const Instance& inst, unsigned mask) {
  Design s = Design::zeros(inst.n);
  std::vector<int> hubs;
  for (int k = 0; k < inst.n; ++k)
    if (mask & (1u << k)) {
      s.z[k] = 1;
      hubs.push_back(k);
    }
  for (size_t a = 0; a < hubs.size(); ++a)
    for (size_t b = a + 1; b < hubs.size(); ++b) s.y[edge_index(inst.n, hubs[a], hubs[b])] = 1;
  maximalize_access(inst, s);
  return s;
}

// Every member of the single allocation design domain: hub set, any backbone
// over it, one hub per spoke (x2 mirrors x1).
std::vector<Design> all_sa_designs(const Instance& inst) {
  const int n = inst.n;
  std::vector<Design> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> hubs, spokes;
    for (int k = 0; k < n; ++k) (mask & (1u << k) ? hubs : spokes).push_back(k);
    const int ne = static_cast<int>(hubs.size() * (hubs.size() - 1) / 2);
    unsigned long long nalloc = 1;
    for (size_t i = 0; i < spokes.size(); ++i) nalloc *= hubs.size();
    for (unsigned long long eb = 0; eb < (1ull << ne); ++eb) {
      for (unsigned long long ab = 0; ab < nalloc; ++ab) {
        Design s = Design::zeros(n);
        for (int k : hubs) s.z[k] = 1;
        int ei = 0;
        for (size_t a = 0; a < hubs.size(); ++a)
          for (size_t b = a + 1; b < hubs.size(); ++b, ++ei)
            if (eb & (1ull << ei)) s.y[edge_index(n, hubs[a], hubs[b])] = 1;
        unsigned long long rem = ab;
        for (int i : spokes) {
          const int k = hubs[rem % hubs.size()];
          rem /= hubs.size();
          s.x1[arc_index(n, i, k)] = 1;
          s.x2[arc_index(n, k, i)] = 1;
        }
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

// Four points on a line plus one off it; only node 2 ships anything.  Small
// enough to check the emitted optimality rows coefficient by coefficient.
Instance corner_instance() {
  const double px[4] = {0.0, 10.0, 14.0, 10.0};
  const double py[4] = {0.0, 0.0, 0.0, 4.0};
  Instance inst;
  inst.n = 4;
  inst.c = Mat(4, 4);
  inst.w = Mat(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) inst.c(i, j) = std::hypot(px[i] - px[j], py[i] - py[j]);
  inst.w(2, 0) = 5.0;
  inst.w(2, 1) = 3.0;
  inst.w(2, 3) = 2.0;
  inst.alpha = 0.2;
  inst.gamma = 1.0;
  inst.theta = 1.0;
  inst.policy = Policy::MA;
  inst.kind = ModelKind::HMedian;
  inst.F.assign(4, 1.0);
  finalize(inst);
  return inst;
}

}  // namespace

TEST_SUITE("separation") {
  TEST_CASE("split fixture: routing slips far under the crossing demand") {
    Instance inst = load_cab(10, 0.8);
    SplitFixture fx = split_fixture(inst);
    REQUIRE(design_ok(inst, fx.s));

    // feasible for every static row (the aggregated demand family is what
    // the fixture evades, and those rows are not seeded here)
    Model m(inst, false);
    std::string why;
    CHECK(testutil::point_feasible(m.problem(), pack_point(m.vars(), fx.s, fx.f), 1e-6, &why));
    INFO(why);

    CHECK(cut_demand(inst, fx.S) == 10586.0);
    CHECK(surplus(inst, fx.f, fx.S) == 452.0 - 10586.0);

    CutRow row = make_demand_row(inst, fx.S);
    CHECK(row.rhs == 10586.0);
    CHECK(activity(row, pack_point(VarMap{10}, fx.s, fx.f)) == 452.0);
  }

  TEST_CASE("split fixture: all three search modes find the bad set") {
    Instance inst = load_cab(10, 0.8);
    SplitFixture fx = split_fixture(inst);
    const double gap = 10586.0 - 452.0;

    auto exact = separate_demand(inst, fx.f, DemandSepMode::exact());
    REQUIRE(exact.size() == 1);
    CHECK(surplus(inst, fx.f, exact[0]) <= -gap + 1e-9);

    auto heur = separate_demand(inst, fx.f, DemandSepMode::heuristic());
    REQUIRE(heur.size() == 1);
    CHECK(surplus(inst, fx.f, heur[0]) < -1e-6);

    auto comp = separate_demand(inst, fx.f, DemandSepMode::components(0.5));
    REQUIRE(comp.size() == 2);
    CHECK(comp[0] == std::vector<int>{0, 1, 3, 8});
    CHECK(comp[1] == fx.S);
    for (const auto& S : comp) CHECK(surplus(inst, fx.f, S) < -1e-6);
  }

  TEST_CASE("singleton demand row matches the origin bound") {
    Instance inst = load_cab(8, 0.5);
    VarMap vm{8};
    for (int i = 0; i < 8; ++i) {
      CutRow row = make_demand_row(inst, {i});
      CHECK(row.rhs == inst.O[i]);
      CHECK(row.coef.size() == 3u * 7u);
      for (auto [col, v] : row.coef) {
        CHECK(v == 1.0);
        CHECK(col >= vm.t(0, 1));
      }
    }
  }

  TEST_CASE("demand rows hold on routed solutions under both policies") {
    std::mt19937 rng(4207);
    for (Policy pol : {Policy::MA, Policy::SA}) {
      Instance inst = testutil::random_instance(rng, 5, pol, ModelKind::HMedian);
      VarMap vm{5};
      int tested = 0;
      for (int trial = 0; trial < 60 && tested < 20; ++trial) {
        Design s = testutil::random_design(rng, inst);
        RFlowResult res = r_flow(inst, s);
        if (!res.feasible) continue;
        ++tested;
        auto x = pack_point(vm, s, res.flow);
        for (unsigned mask = 1; mask + 1 < (1u << 5); ++mask) {
          std::vector<int> S;
          for (int v = 0; v < 5; ++v)
            if (mask & (1u << v)) S.push_back(v);
          CutRow row = make_demand_row(inst, S);
          CHECK(shortfall(row, x) <= 1e-6 * (1.0 + std::fabs(row.rhs)));
        }
      }
      CHECK(tested == 20);
    }
  }

  TEST_CASE("exact demand search agrees with subset brute force") {
    std::mt19937 rng(911);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int n : {6, 8}) {
      Instance inst = testutil::random_instance(rng, n, Policy::MA, ModelKind::HMedian);
      for (int trial = 0; trial < 8; ++trial) {
        Flows f = Flows::zeros(n);
        for (int a = 0; a < n * (n - 1); ++a) {
          f.t[a] = 30.0 * U(rng);
          f.h1[a] = 30.0 * U(rng);
          f.h2[a] = 30.0 * U(rng);
        }
        double best = 0.0;
        for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
          std::vector<int> S;
          for (int v = 0; v < n; ++v)
            if (mask & (1u << v)) S.push_back(v);
          best = std::min(best, surplus(inst, f, S));
        }
        auto found = separate_demand(inst, f, DemandSepMode::exact());
        if (best < -1e-6) {
          REQUIRE(found.size() == 1);
          CHECK(surplus(inst, f, found[0]) == doctest::Approx(best).epsilon(1e-12));
        } else {
          CHECK(found.empty());
        }
        auto heur = separate_demand(inst, f, DemandSepMode::heuristic());
        for (const auto& S : heur) CHECK(surplus(inst, f, S) < -1e-6);
      }
    }
  }

  TEST_CASE("saturated direct flows separate nothing") {
    Instance inst = load_cab(6, 0.8);
    Flows f = Flows::zeros(6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (j != i) f.h1[arc_index(6, i, j)] = inst.w(i, j);
    CHECK(separate_demand(inst, f, DemandSepMode::heuristic()).empty());
    CHECK(separate_demand(inst, f, DemandSepMode::exact()).empty());
    CHECK(separate_demand(inst, f, DemandSepMode::components(0.5)).empty());
  }

  TEST_CASE("demand separation rejects bad arguments") {
    Instance inst = load_cab(6, 0.8);
    Flows f = Flows::zeros(6);
    CHECK_THROWS_AS(separate_demand(inst, f, DemandSepMode::components(0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(separate_demand(inst, f, DemandSepMode::components(1.5)),
                    std::invalid_argument);
    f.t[0] = std::nan("");
    CHECK_THROWS_AS(separate_demand(inst, f, DemandSepMode::heuristic()), std::invalid_argument);

    std::mt19937 rng(5);
    Instance big = testutil::random_instance(rng, 21, Policy::MA, ModelKind::HMedian);
    CHECK_THROWS_AS(separate_demand(big, Flows::zeros(21), DemandSepMode::exact()),
                    std::invalid_argument);
  }

  TEST_CASE("connectivity separation on hand-built fractions") {
    Instance inst = load_cab(4, 0.8);
    VarMap vm{4};

    SUBCASE("two open hubs with no backbone get split") {
      std::vector<double> zbar{1.0, 1.0, 0.0, 0.0};
      std::vector<double> ybar(vm.edges(), 0.0);
      auto cuts = separate_connectivity(inst, zbar, ybar);
      REQUIRE(!cuts.empty());
      std::vector<double> x(vm.nvars(), 0.0);
      for (int k = 0; k < 4; ++k) x[vm.z(k)] = zbar[k];
      for (const auto& cut : cuts) {
        CHECK(cut.family == RowFamily::Connectivity);
        CHECK(shortfall(cut, x) > 1e-6);
      }
    }

    SUBCASE("a single hub needs no backbone") {
      std::vector<double> zbar{1.0, 0.0, 0.0, 0.0};
      std::vector<double> ybar(vm.edges(), 0.0);
      CHECK(separate_connectivity(inst, zbar, ybar).empty());
    }

    SUBCASE("argument validation") {
      std::vector<double> zbar{1.0, 0.0, 0.0};
      std::vector<double> ybar(vm.edges(), 0.0);
      CHECK_THROWS_AS(separate_connectivity(inst, zbar, ybar), std::invalid_argument);
      zbar = {1.0, 0.0, 0.0, 2.0};
      CHECK_THROWS_AS(separate_connectivity(inst, zbar, ybar), std::invalid_argument);
    }
  }

  TEST_CASE("connectivity separation cuts a weak bridge exactly once") {
    Instance inst = load_cab(6, 0.8);
    VarMap vm{6};
    std::vector<double> zbar(6, 1.0);
    std::vector<double> ybar(vm.edges(), 0.0);
    for (int a : {0, 1, 2})
      for (int b : {0, 1, 2})
        if (a < b) ybar[edge_index(6, a, b)] = 1.0;
    for (int a : {3, 4, 5})
      for (int b : {3, 4, 5})
        if (a < b) ybar[edge_index(6, a, b)] = 1.0;
    ybar[edge_index(6, 2, 3)] = 0.3;

    auto cuts = separate_connectivity(inst, zbar, ybar);
    REQUIRE(cuts.size() == 1);
    auto m = coef_map(cuts[0]);
    CHECK(m[vm.z(0)] == -1.0);
    CHECK(m[vm.z(3)] == -1.0);
    CHECK(cuts[0].rhs == -1.0);
    double ycount = 0.0;
    for (int a : {0, 1, 2})
      for (int b : {3, 4, 5}) {
        CHECK(m[vm.y(a, b)] == 1.0);
        ycount += 1.0;
      }
    CHECK(ycount == 9.0);
    CHECK(m.size() == 11u);

    std::vector<double> x(vm.nvars(), 0.0);
    for (int k = 0; k < 6; ++k) x[vm.z(k)] = 1.0;
    for (int e = 0; e < vm.edges(); ++e) x[vm.y(edge_nodes(6, e).first, edge_nodes(6, e).second)] = ybar[e];
    CHECK(shortfall(cuts[0], x) == doctest::Approx(0.7).epsilon(1e-9));
  }

  TEST_CASE("connectivity sweep finds a violation whenever one exists") {
    Instance inst = load_cab(5, 0.8);
    VarMap vm{5};
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<double> zbar(5), ybar(vm.edges());
      for (double& v : zbar) v = U(rng);
      for (double& v : ybar) v = U(rng) < 0.4 ? 0.0 : U(rng);

      bool exists = false;
      for (unsigned mask = 1; mask + 1 < (1u << 5) && !exists; ++mask) {
        double za = -1.0, zb = -1.0, cross = 0.0;
        for (int v = 0; v < 5; ++v)
          (mask & (1u << v) ? za : zb) = std::max(mask & (1u << v) ? za : zb, zbar[v]);
        for (int a = 0; a < 5; ++a)
          for (int b = a + 1; b < 5; ++b)
            if (((mask >> a) & 1u) != ((mask >> b) & 1u)) cross += ybar[edge_index(5, a, b)];
        if (cross < za + zb - 1.0 - 1e-6) exists = true;
      }

      auto cuts = separate_connectivity(inst, zbar, ybar);
      CHECK(cuts.empty() == !exists);
      std::vector<double> x(vm.nvars(), 0.0);
      for (int k = 0; k < 5; ++k) x[vm.z(k)] = zbar[k];
      for (int e = 0; e < vm.edges(); ++e) {
        auto [a, b] = edge_nodes(5, e);
        x[vm.y(a, b)] = ybar[e];
      }
      for (const auto& cut : cuts) CHECK(shortfall(cut, x) > 1e-6);
    }
  }

  TEST_CASE("disaggregation probe: routed flows pass, starved transit is cut") {
    Instance inst = load_cab(10, 0.8);
    Design s = narrowed_two_hub_design(inst);
    RFlowResult ref = r_flow(inst, s);
    REQUIRE(ref.feasible);

    CHECK(!separate_feasibility(inst, s, ref.flow).has_value());

    Flows starved = ref.flow;
    starved.t[arc_index(10, 4, 8)] = 8051.0;
    auto cut = separate_feasibility(inst, s, starved);
    REQUIRE(cut.has_value());
    CHECK(cut->family == RowFamily::Feasibility);

    VarMap vm{10};
    for (auto [col, v] : cut->coef)
      if (col >= vm.t(0, 1)) CHECK(v >= 0.0);

    CHECK(shortfall(*cut, pack_point(vm, s, starved)) > 1e-6);
    CHECK(shortfall(*cut, pack_point(vm, s, ref.flow)) <= 1e-6);
  }

  TEST_CASE("disaggregation cuts are valid across the design domain") {
    std::mt19937 rng(1444);
    Instance inst = testutil::random_instance(rng, 5, Policy::MA, ModelKind::HMedian);
    VarMap vm{5};

    std::vector<CutRow> cuts;
    int produced = 0;
    for (int trial = 0; trial < 40 && produced < 8; ++trial) {
      Design s = testutil::random_design(rng, inst);
      RFlowResult ref = r_flow(inst, s);
      if (!ref.feasible) continue;

      int heavy = -1;
      for (int a = 0; a < vm.arcs(); ++a)
        if (ref.flow.t[a] > 1.0 && (heavy < 0 || ref.flow.t[a] > ref.flow.t[heavy])) heavy = a;
      if (heavy < 0) continue;
      Flows starved = ref.flow;
      starved.t[heavy] *= 0.9;

      auto cut = separate_feasibility(inst, s, starved);
      if (!cut) continue;
      ++produced;
      CHECK(shortfall(*cut, pack_point(vm, s, starved)) > 1e-6);
      CHECK(shortfall(*cut, pack_point(vm, s, ref.flow)) <= 1e-6);
      cuts.push_back(*cut);
    }
    REQUIRE(produced >= 3);

    // every splittable solution must satisfy every collected cut: all full
    // backbones with full access, plus random partial designs
    int checked = 0;
    for (unsigned mask = 1; mask < (1u << 5); ++mask) {
      Design s = completed_maximal(inst, mask);
      RFlowResult res = r_flow(inst, s);
      REQUIRE(res.feasible);
      auto x = pack_point(vm, s, res.flow);
      for (const auto& cut : cuts) CHECK(shortfall(cut, x) <= 1e-6);
      ++checked;
    }
    for (int trial = 0; trial < 50; ++trial) {
      Design s = testutil::random_design(rng, inst);
      RFlowResult res = r_flow(inst, s);
      if (!res.feasible) continue;
      auto x = pack_point(vm, s, res.flow);
      for (const auto& cut : cuts) CHECK(shortfall(cut, x) <= 1e-6);
      ++checked;
    }
    CHECK(checked > 31);
  }

  TEST_CASE("path catalog prices and orders every one-arc service") {
    Instance cab = load_cab(10, 0.8);
    PathCatalog cat = build_path_catalog(cab);
    REQUIRE(cat.com.size() == commodities(cab).size());

    SUBCASE("self hubs ride fictitious legs") {
      const auto& com = cat.com[0];
      REQUIRE(com.o == 0);
      REQUIRE(com.d == 1);
      CHECK(com.ckk[0] == cab.theta * cab.c(0, 1));
      CHECK(com.ckk[1] == cab.gamma * cab.c(0, 1));
      int argmin = 0;
      for (int k = 1; k < 10; ++k)
        if (com.ckk[k] < com.ckk[argmin]) argmin = k;
      CHECK(com.one.front().k == argmin);
      CHECK(com.one.front().cost == com.ckk[argmin]);
      for (size_t i = 1; i < com.one.size(); ++i)
        CHECK(com.one[i - 1].cost <= com.one[i].cost);
      for (size_t i = 1; i < com.two.size(); ++i)
        CHECK(com.two[i - 1].best <= com.two[i].best);
    }

    SUBCASE("catalog zips with the routing commodity list") {
      Design s = testutil::single_hub_design(cab, 3);
      RFlowResult res = r_flow(cab, s);
      REQUIRE(res.feasible);
      REQUIRE(res.paths.size() == cat.com.size());
      for (size_t r = 0; r < cat.com.size(); ++r) {
        CHECK(res.paths[r].o == cat.com[r].o);
        CHECK(res.paths[r].d == cat.com[r].d);
      }
    }
  }

  TEST_CASE("path catalog on a uniform metric") {
    Instance inst;
    inst.n = 5;
    inst.c = Mat(5, 5);
    inst.w = Mat(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (i != j) {
          inst.c(i, j) = 1.0;
          inst.w(i, j) = 1.0;
        }
    inst.alpha = 0.5;
    inst.policy = Policy::MA;
    inst.kind = ModelKind::HMedian;
    inst.F.assign(5, 1.0);
    finalize(inst);

    PathCatalog cat = build_path_catalog(inst);
    for (const auto& com : cat.com) {
      CHECK(com.one.front().cost == 1.0);  // enter or leave at an endpoint
      CHECK(com.one.back().cost == 2.0);
      const auto& head = com.two.front();
      CHECK(head.k == std::min(com.o, com.d));
      CHECK(head.m == std::max(com.o, com.d));
      CHECK(head.best == 0.5);  // both endpoints hubbed, discounted middle
      int between = 0, disjoint = 0;
      for (const auto& th : com.two) {
        if (th.best == 1.5) ++between;
        if (th.best == 2.5) ++disjoint;
      }
      CHECK(between == 2 * 3);
      CHECK(disjoint == 3);
    }
  }

  TEST_CASE("index sets match a direct recomputation") {
    std::mt19937 rng(808);
    for (int trial = 0; trial < 6; ++trial) {
      Instance inst = testutil::random_instance(rng, 6, Policy::MA, ModelKind::HMedian);
      PathCatalog cat = build_path_catalog(inst);
      unsigned mask = 1 + rng() % ((1u << 6) - 1);
      Design s = completed_maximal(inst, mask);
      RFlowResult res = r_flow(inst, s);
      REQUIRE(res.feasible);
      RPathIndexSets sets = compute_index_sets(cat, s, res);
      REQUIRE(sets.com.size() == res.paths.size());

      for (size_t r = 0; r < sets.com.size(); ++r) {
        const auto& com = sets.com[r];
        const auto& p = res.paths[r];
        auto leg_in = [&](int k) { return k == p.o ? 0.0 : inst.gamma * inst.c(p.o, k); };
        auto leg_out = [&](int k) { return k == p.d ? 0.0 : inst.theta * inst.c(k, p.d); };

        std::vector<std::pair<double, int>> zs;
        for (int k = 0; k < 6; ++k) {
          double ckk = leg_in(k) + leg_out(k);
          if (ckk < p.cost) zs.push_back({ckk, k});
        }
        std::sort(zs.begin(), zs.end());
        REQUIRE(com.zset.size() == zs.size());
        for (size_t i = 0; i < zs.size(); ++i) CHECK(com.zset[i] == zs[i].second);
        // open hubs cannot price below the routed optimum
        for (int k : com.zset) CHECK(!s.hub(k));

        std::set<std::pair<int, int>> yseen;
        for (const auto& e : com.yset) yseen.insert({e.k, e.m});
        for (int k = 0; k < 6; ++k)
          for (int m = k + 1; m < 6; ++m) {
            double fwd = leg_in(k) + inst.alpha * inst.c(k, m) + leg_out(m);
            double rev = leg_in(m) + inst.alpha * inst.c(m, k) + leg_out(k);
            double thr = std::min({p.cost, leg_in(k) + leg_out(k), leg_in(m) + leg_out(m)});
            bool expect = std::min(fwd, rev) < thr;
            CHECK(yseen.count({k, m}) == (expect ? 1u : 0u));
            if (expect) CHECK(!(s.hub(k) && s.hub(m) && s.link(k, m)));
          }
      }
    }
  }

  TEST_CASE("index sets on the corner instance") {
    Instance inst = corner_instance();
    Design s = Design::zeros(4);
    s.z[0] = s.z[1] = 1;
    s.y[edge_index(4, 0, 1)] = 1;
    maximalize_access(inst, s);
    REQUIRE(design_ok(inst, s));

    RFlowResult res = r_flow(inst, s);
    REQUIRE(res.feasible);
    REQUIRE(res.paths.size() == 3);
    CHECK(res.paths[0].cost == doctest::Approx(6.0));   // around the corner
    CHECK(res.paths[1].cost == doctest::Approx(4.0));   // straight in
    CHECK(res.paths[2].cost == doctest::Approx(8.0));   // in and back out

    PathCatalog cat = build_path_catalog(inst);
    RPathIndexSets sets = compute_index_sets(cat, s, res);

    const auto& r1 = sets.com[0];
    CHECK(r1.hub_in == 1);
    CHECK(r1.hub_out == 0);
    CHECK(r1.interhub_arcs == 1);
    CHECK(r1.zset.empty());
    REQUIRE(r1.yset.size() == 1);
    CHECK(r1.yset[0].k == 0);
    CHECK(r1.yset[0].m == 2);
    CHECK(!r1.yset[0].fwd);
    CHECK(r1.yset[0].rev);

    const auto& r2 = sets.com[1];
    CHECK(r2.hub_in == 1);
    CHECK(r2.hub_out == 1);
    CHECK(r2.interhub_arcs == 0);
    CHECK(r2.zset.empty());
    REQUIRE(r2.yset.size() == 1);
    CHECK(r2.yset[0].k == 1);
    CHECK(r2.yset[0].m == 2);
    CHECK(!r2.yset[0].fwd);
    CHECK(r2.yset[0].rev);

    const auto& r3 = sets.com[2];
    CHECK(r3.hub_in == 1);
    CHECK(r3.hub_out == 1);
    CHECK(r3.interhub_arcs == 0);
    CHECK(r3.zset == std::vector<int>{2, 3});
    REQUIRE(r3.yset.size() == 3);
    CHECK(r3.yset[0].k == 2);
    CHECK(r3.yset[0].m == 3);
    CHECK(r3.yset[0].fwd);
    CHECK(!r3.yset[0].rev);
  }

  TEST_CASE("optimality rows on the corner instance, coefficient by coefficient") {
    Instance inst = corner_instance();
    Design s = Design::zeros(4);
    s.z[0] = s.z[1] = 1;
    s.y[edge_index(4, 0, 1)] = 1;
    maximalize_access(inst, s);
    RFlowResult res = r_flow(inst, s);
    PathCatalog cat = build_path_catalog(inst);
    RPathIndexSets sets = compute_index_sets(cat, s, res);

    auto cuts = make_optimality_cuts(inst, s, res, sets);
    REQUIRE(cuts.size() == 3);
    VarMap vm{4};

    auto find_pinned = [&](int col) -> const CutRow* {
      for (const auto& cut : cuts) {
        auto m = coef_map(cut);
        auto it = m.find(col);
        if (it != m.end() && it->second == 1.0) return &cut;
      }
      return nullptr;
    };
    for (const auto& cut : cuts) CHECK(coef_map(cut).count(vm.t(0, 1)) == 0u);

    const CutRow* transit = find_pinned(vm.t(1, 0));
    REQUIRE(transit);
    std::map<int, double> want{{vm.t(1, 0), 1.0}, {vm.y(0, 2), 5.0}, {vm.y(0, 1), -5.0}};
    CHECK(coef_map(*transit) == want);
    CHECK(transit->rhs == 0.0);

    const CutRow* access = find_pinned(vm.h1(2, 1));
    REQUIRE(access);
    want = {{vm.h1(2, 1), 1.0}, {vm.y(0, 2), 5.0},  {vm.y(1, 2), 3.0},
            {vm.z(2), 2.0},     {vm.z(3), 2.0},     {vm.y(2, 3), -2.0},
            {vm.y(0, 1), -5.0}, {vm.z(1), -5.0}};
    CHECK(coef_map(*access) == want);
    CHECK(access->rhs == 0.0);

    const CutRow* deliver = find_pinned(vm.h2(1, 3));
    REQUIRE(deliver);
    want = {{vm.h2(1, 3), 1.0}, {vm.z(2), 2.0}, {vm.z(3), 2.0},
            {vm.y(2, 3), -2.0}, {vm.z(1), -2.0}};
    CHECK(coef_map(*deliver) == want);
    CHECK(deliver->rhs == 0.0);

    for (const auto& cut : cuts) CHECK(cut.family == RowFamily::Optimality);
  }

  TEST_CASE("optimality rows never cut a full-backbone design") {
    std::mt19937 rng(6021);
    for (int n : {4, 5}) {
      for (int rep = 0; rep < (n == 4 ? 3 : 2); ++rep) {
        Instance inst = testutil::random_instance(rng, n, Policy::MA, ModelKind::HMedian);
        PathCatalog cat = build_path_catalog(inst);
        VarMap vm{n};

        // adversaries: best routing for every hub set, and the best of them
        std::vector<std::pair<Design, RFlowResult>> adversaries;
        unsigned best_mask = 0;
        double best_val = 0.0;
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
          Design s = completed_maximal(inst, mask);
          RFlowResult res = r_flow(inst, s);
          REQUIRE(res.feasible);
          double val = evaluate(inst, s, res.flow);
          if (!best_mask || val < best_val) {
            best_mask = mask;
            best_val = val;
          }
          adversaries.push_back({std::move(s), std::move(res)});
        }

        std::vector<CutRow> cuts;
        auto generate = [&](const Design& s) {
          RFlowResult res = r_flow(inst, s);
          if (!res.feasible) return false;
          RPathIndexSets sets = compute_index_sets(cat, s, res);
          auto rows = make_optimality_cuts(inst, s, res, sets);
          cuts.insert(cuts.end(), rows.begin(), rows.end());
          return true;
        };
        int gens = 0;
        for (int trial = 0; trial < 60 && gens < 12; ++trial)
          if (generate(testutil::random_design(rng, inst))) ++gens;
        REQUIRE(gens == 12);
        REQUIRE(generate(completed_maximal(inst, best_mask)));
        REQUIRE(!cuts.empty());

        for (const auto& [s, res] : adversaries) {
          auto x = pack_point(vm, s, res.flow);
          for (const auto& cut : cuts) {
            double scale = 1.0 + std::fabs(cut.rhs);
            CHECK(shortfall(cut, x) <= 1e-6 * scale);
          }
        }
      }
    }
  }

  TEST_CASE("single allocation optimality rows hold across the whole domain") {
    std::mt19937 rng(31415);
    Instance inst = testutil::random_instance(rng, 5, Policy::SA, ModelKind::HMedian);
    PathCatalog cat = build_path_catalog(inst);
    VarMap vm{5};

    std::vector<CutRow> cuts;
    int gens = 0;
    for (int trial = 0; trial < 80 && gens < 10; ++trial) {
      Design s = testutil::random_design(rng, inst);
      RFlowResult res = r_flow(inst, s);
      if (!res.feasible) continue;
      ++gens;
      RPathIndexSets sets = compute_index_sets(cat, s, res);
      auto rows = make_optimality_cuts(inst, s, res, sets);
      for (const auto& row : rows) {
        // transit pins only; allocation compensation stays within the row
        bool has_t = false;
        for (auto [col, v] : row.coef)
          if (col >= vm.t(0, 1) && col < vm.h1(0, 1) && v == 1.0) has_t = true;
        CHECK(has_t);
        cuts.push_back(row);
      }
    }
    REQUIRE(gens == 10);
    REQUIRE(!cuts.empty());

    auto domain = all_sa_designs(inst);
    CHECK(domain.size() == 3189u);
    int feasible = 0;
    for (const auto& s : domain) {
      RFlowResult res = r_flow(inst, s);
      if (!res.feasible) continue;
      ++feasible;
      auto x = pack_point(vm, s, res.flow);
      for (const auto& cut : cuts) {
        double scale = 1.0 + std::fabs(cut.rhs);
        CHECK(shortfall(cut, x) <= 1e-6 * scale);
      }
    }
    CHECK(feasible > 500);
  }

  TEST_CASE("optimality rows refuse paid edges and broken inputs") {
    std::mt19937 rng(12);
    Instance inst = testutil::random_instance(rng, 4, Policy::MA, ModelKind::GMedian);
    PathCatalog cat = build_path_catalog(inst);
    Design s = completed_maximal(inst, 0b11);
    RFlowResult res = r_flow(inst, s);
    REQUIRE(res.feasible);
    RPathIndexSets sets = compute_index_sets(cat, s, res);
    CHECK_THROWS_AS(make_optimality_cuts(inst, s, res, sets), InstanceError);

    Instance hm = testutil::random_instance(rng, 4, Policy::MA, ModelKind::HMedian);
    PathCatalog hcat = build_path_catalog(hm);
    RFlowResult broken;
    broken.feasible = false;
    CHECK_THROWS_AS(compute_index_sets(hcat, s, broken), std::invalid_argument);
  }
}
