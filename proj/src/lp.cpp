#include "hubnet/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>

namespace hubnet::lp {

namespace {

constexpr uint8_t NB_LO = 0;
constexpr uint8_t NB_UP = 1;
constexpr uint8_t BASIC = 2;
constexpr uint8_t DORMANT = 3;

bool finite(double v) { return std::isfinite(v); }

}  // namespace

struct Solver::Impl {
  Config cfg;

  int ncols = -1;  // fixed at first solve
  int npool = 0;   // pool rows seen so far

  // column index over pool rows, grown as rows arrive
  std::vector<std::vector<std::pair<int, double>>> colidx;

  std::vector<double> elb, eub;  // effective structural bounds (with overrides)

  std::vector<int> act;   // active pool rows, activation order
  std::vector<int> apos;  // pool row -> position in act, or -1

  std::vector<uint8_t> vstat;  // var id -> status
  std::vector<double> xval;    // var id -> current value
  std::vector<int> basic;      // active position -> var id

  std::vector<double> Binv;  // m*m row-major
  bool need_refactor = true;
  int pivots_since_refactor = 0;

  long iters_this_solve = 0;

  // Degeneracy escape: when the iteration stalls on zero-length pivots, every
  // non-fixed bound is relaxed outward by a per-variable deterministic amount
  // below the feasibility tolerance.  Ties in the ratio test then resolve to
  // distinct positive steps, the walk leaves the degenerate vertex, and the
  // shifts are removed again before optimality is declared (relaxation only
  // lowers the optimum, so an infeasibility verdict under shifts stands).
  std::vector<double> shlo, shhi;
  bool shifted = false;
  int shift_round = 0;

  // whether the last Infeasible verdict carries a margin-verified dual row
  bool cert_ok = false;

  // scratch
  std::vector<double> alpha, yrow, rwork;

  int slack_id(int poolrow) const { return ncols + poolrow; }
  bool is_slack(int v) const { return v >= ncols; }

  double vlb(const Problem& p, int v) const {
    double b = is_slack(v) ? p.rows[v - ncols].lo : elb[v];
    if (shifted && finite(b)) b -= shlo[v];
    return b;
  }
  double vub(const Problem& p, int v) const {
    double b = is_slack(v) ? p.rows[v - ncols].hi : eub[v];
    if (shifted && finite(b)) b += shhi[v];
    return b;
  }

  void apply_shift(const Problem& p, int round) {
    int total = ncols + npool;
    shlo.assign(total, 0.0);
    shhi.assign(total, 0.0);
    auto mag = [&](int v, int salt, double bound) {
      uint32_t h = (uint32_t)v * 2654435761u ^ (uint32_t)(round * 40503 + salt);
      double xi = 1.0 + double(h % 1024u) / 1024.0;
      return xi * 1e-9 * (1.0 + std::abs(bound));
    };
    for (int v = 0; v < total; ++v) {
      double lo = is_slack(v) ? p.rows[v - ncols].lo : elb[v];
      double hi = is_slack(v) ? p.rows[v - ncols].hi : eub[v];
      if (!is_slack(v) && elb[v] == eub[v]) continue;  // keep overrides frozen
      if (finite(lo)) shlo[v] = mag(v, 17, lo);
      if (finite(hi)) shhi[v] = mag(v, 291, hi);
    }
    shifted = true;
  }

  void drop_shift(const Problem& p) {
    shifted = false;
    snap_nonbasics(p);
    need_refactor = true;
  }
  double vcost(const Problem& p, int v) const {
    return is_slack(v) ? 0.0 : p.obj[v];
  }

  void sync(const Problem& p) {
    if (ncols < 0) {
      ncols = p.ncols();
      colidx.assign(ncols, {});
      vstat.assign(ncols, NB_LO);
      xval.assign(ncols, 0.0);
    }
    if (p.ncols() != ncols)
      throw SolverFault("column count changed between solves");
    for (int r = npool; r < p.nrows(); ++r) {
      const Row& row = p.rows[r];
      if (!finite(row.lo) && !finite(row.hi))
        throw SolverFault("row with no finite side");
      if (row.lo > row.hi) throw SolverFault("row with lo > hi");
      for (auto [j, v] : row.coef) colidx[j].push_back({r, v});
      apos.push_back(-1);
      vstat.push_back(DORMANT);
      xval.push_back(0.0);
    }
    npool = p.nrows();
  }

  // Returns conflicting column or -1.
  int apply_bounds(const Problem& p, const std::vector<BoundOverride>& ov) {
    elb = p.lb;
    eub = p.ub;
    for (const auto& o : ov) {
      elb[o.col] = std::max(elb[o.col], o.lo);
      eub[o.col] = std::min(eub[o.col], o.hi);
    }
    for (int j = 0; j < ncols; ++j)
      if (elb[j] > eub[j] + 1e-12) return j;
    return -1;
  }

  void snap_nonbasics(const Problem& p) {
    auto snap = [&](int v) {
      if (vstat[v] == BASIC || vstat[v] == DORMANT) return;
      double lo = vlb(p, v), hi = vub(p, v);
      if (vstat[v] == NB_LO) {
        if (finite(lo)) {
          xval[v] = lo;
        } else if (finite(hi)) {
          vstat[v] = NB_UP;
          xval[v] = hi;
        } else {
          xval[v] = 0.0;  // free nonbasic
        }
      } else {
        if (finite(hi)) {
          xval[v] = hi;
        } else if (finite(lo)) {
          vstat[v] = NB_LO;
          xval[v] = lo;
        } else {
          xval[v] = 0.0;
        }
      }
    };
    for (int j = 0; j < ncols; ++j) snap(j);
    for (int r : act) snap(slack_id(r));
  }

  void reset_basis_to_slacks(const Problem& p) {
    for (int k = 0; k < (int)basic.size(); ++k) {
      int v = basic[k];
      if (is_slack(v) && apos[v - ncols] < 0) continue;
      // push old basic out to its nearest finite bound
      double lo = vlb(p, v), hi = vub(p, v);
      if (finite(lo) && (!finite(hi) || std::abs(xval[v] - lo) <= std::abs(hi - xval[v]))) {
        vstat[v] = NB_LO;
        xval[v] = lo;
      } else if (finite(hi)) {
        vstat[v] = NB_UP;
        xval[v] = hi;
      } else {
        vstat[v] = NB_LO;
        xval[v] = 0.0;
      }
    }
    basic.resize(act.size());
    for (int k = 0; k < (int)act.size(); ++k) {
      basic[k] = slack_id(act[k]);
      vstat[basic[k]] = BASIC;
    }
  }

  // Rebuild Binv from the basic list; on singularity fall back to the
  // all-slack basis (always invertible: B = -I).
  void refactor(const Problem& p) {
    int m = (int)act.size();
    if ((int)basic.size() != m) throw SolverFault("basis size mismatch");
    for (int attempt = 0; attempt < 2; ++attempt) {
      std::vector<double> B((size_t)m * m, 0.0);
      for (int k = 0; k < m; ++k) {
        int v = basic[k];
        if (is_slack(v)) {
          B[(size_t)apos[v - ncols] * m + k] = -1.0;
        } else {
          for (auto [r, c] : colidx[v]) {
            int pos = apos[r];
            if (pos >= 0) B[(size_t)pos * m + k] = c;
          }
        }
      }
      Binv.assign((size_t)m * m, 0.0);
      for (int i = 0; i < m; ++i) Binv[(size_t)i * m + i] = 1.0;
      bool singular = false;
      for (int col = 0; col < m && !singular; ++col) {
        int piv = -1;
        double best = 1e-11;
        for (int i = col; i < m; ++i) {
          double a = std::abs(B[(size_t)i * m + col]);
          if (a > best) {
            best = a;
            piv = i;
          }
        }
        if (piv < 0) {
          singular = true;
          break;
        }
        if (piv != col) {
          for (int j = 0; j < m; ++j) {
            std::swap(B[(size_t)piv * m + j], B[(size_t)col * m + j]);
            std::swap(Binv[(size_t)piv * m + j], Binv[(size_t)col * m + j]);
          }
        }
        double d = B[(size_t)col * m + col];
        for (int j = 0; j < m; ++j) {
          B[(size_t)col * m + j] /= d;
          Binv[(size_t)col * m + j] /= d;
        }
        for (int i = 0; i < m; ++i) {
          if (i == col) continue;
          double f = B[(size_t)i * m + col];
          if (f == 0.0) continue;
          for (int j = 0; j < m; ++j) {
            B[(size_t)i * m + j] -= f * B[(size_t)col * m + j];
            Binv[(size_t)i * m + j] -= f * Binv[(size_t)col * m + j];
          }
        }
      }
      if (!singular) break;
      if (attempt == 1) throw SolverFault("basis repair failed");
      reset_basis_to_slacks(p);
    }
    recompute_basics(p);
    need_refactor = false;
    pivots_since_refactor = 0;
  }

  // Basic values from scratch: B x_B = -(N x_N).
  void recompute_basics(const Problem& p) {
    int m = (int)act.size();
    rwork.assign(m, 0.0);
    for (int pos = 0; pos < m; ++pos) {
      const Row& row = p.rows[act[pos]];
      double acc = 0.0;
      for (auto [j, c] : row.coef)
        if (vstat[j] != BASIC) acc += c * xval[j];
      int sv = slack_id(act[pos]);
      if (vstat[sv] != BASIC) acc -= xval[sv];
      rwork[pos] = acc;
    }
    for (int k = 0; k < m; ++k) {
      double v = 0.0;
      const double* rowk = &Binv[(size_t)k * m];
      for (int i = 0; i < m; ++i) v += rowk[i] * rwork[i];
      xval[basic[k]] = -v;
    }
  }

  // y = cB' * Binv  (cB given per basic position)
  void btran(const std::vector<double>& cB) {
    int m = (int)act.size();
    yrow.assign(m, 0.0);
    for (int k = 0; k < m; ++k) {
      double c = cB[k];
      if (c == 0.0) continue;
      const double* rowk = &Binv[(size_t)k * m];
      for (int i = 0; i < m; ++i) yrow[i] += c * rowk[i];
    }
  }

  double y_dot_col(int v) const {
    if (is_slack(v)) {
      int pos = apos[v - ncols];
      return pos >= 0 ? -yrow[pos] : 0.0;
    }
    double acc = 0.0;
    for (auto [r, c] : colidx[v]) {
      int pos = apos[r];
      if (pos >= 0) acc += yrow[pos] * c;
    }
    return acc;
  }

  // alpha = Binv * A_v
  void ftran(int v) {
    int m = (int)act.size();
    alpha.assign(m, 0.0);
    if (is_slack(v)) {
      int pos = apos[v - ncols];
      for (int i = 0; i < m; ++i) alpha[i] = -Binv[(size_t)i * m + pos];
    } else {
      for (auto [r, c] : colidx[v]) {
        int pos = apos[r];
        if (pos < 0) continue;
        for (int i = 0; i < m; ++i) alpha[i] += Binv[(size_t)i * m + pos] * c;
      }
    }
  }

  double feas_tol(double bound) const {
    return cfg.tol_feas * (1.0 + std::abs(bound));
  }

  double infeasibility(const Problem& p) const {
    double f = 0.0;
    for (int v : basic) {
      double lo = vlb(p, v), hi = vub(p, v);
      if (xval[v] > hi + feas_tol(hi))
        f += xval[v] - hi;
      else if (xval[v] < lo - feas_tol(lo))
        f += lo - xval[v];
    }
    return f;
  }

  struct PriceResult {
    int v = -1;
    double d = 0.0;
    int dir = 0;  // +1 increase, -1 decrease
  };

  PriceResult price(const Problem& p, bool phase1, bool bland, double dtol) {
    PriceResult best;
    double bestScore = dtol;
    auto consider = [&](int v) {
      uint8_t st = vstat[v];
      if (st == BASIC || st == DORMANT) return false;
      double lo = vlb(p, v), hi = vub(p, v);
      if (lo == hi) return false;  // frozen by an override; a zero-length
                                   // move only feeds status flip-flop
      double c = phase1 ? 0.0 : vcost(p, v);
      double d = c - y_dot_col(v);
      bool freevar = !finite(lo) && !finite(hi);
      int dir = 0;
      if (freevar) {
        if (d < -dtol)
          dir = +1;
        else if (d > dtol)
          dir = -1;
      } else if (st == NB_LO && d < -dtol) {
        dir = +1;
      } else if (st == NB_UP && d > dtol) {
        dir = -1;
      }
      if (dir == 0) return false;
      if (bland) {
        best = {v, d, dir};
        return true;  // first eligible in id order
      }
      if (std::abs(d) > bestScore) {
        bestScore = std::abs(d);
        best = {v, d, dir};
      }
      return false;
    };
    for (int j = 0; j < ncols; ++j)
      if (consider(j)) return best;
    // slacks in id order, not activation order: Bland's rule needs the
    // smallest eligible index to be the one returned
    for (int r = 0; r < npool; ++r)
      if (apos[r] >= 0 && consider(slack_id(r))) return best;
    return best;
  }

  struct RatioResult {
    double theta = kInf;
    int leave_pos = -1;   // basic position, or -1 for a bound flip
    int leave_side = 0;   // 0 -> lower, 1 -> upper (bound the leaver lands on)
  };

  // Two-pass ratio test: find the minimum ratio, then among candidates tied
  // within a small window take the largest pivot element.  Tiny pivots scale
  // the eta update by their reciprocal, so preferring magnitude keeps the
  // maintained inverse from rotting on degenerate faces.  Under Bland's rule
  // the window collapses to an exact tie broken by smallest variable id,
  // which the anti-cycling argument requires.
  RatioResult ratio_test(const Problem& p, int q, int dir, bool bland = false) {
    RatioResult res;
    int m = (int)act.size();
    double span = kInf;
    {
      double lo = vlb(p, q), hi = vub(p, q);
      if (finite(hi - lo)) span = hi - lo;
    }
    auto candidate = [&](int k, double& t, int& side, double& delta) {
      double a = alpha[k];
      delta = -dir * a;  // d(x_Bk)/d theta
      if (std::abs(delta) <= cfg.tol_pivot) return false;
      int v = basic[k];
      double lo = vlb(p, v), hi = vub(p, v);
      double x = xval[v];
      t = kInf;
      side = 0;
      if (x > hi + feas_tol(hi)) {  // infeasible above
        if (delta < 0.0) {
          t = (x - hi) / (-delta);
          side = 1;
        }
      } else if (x < lo - feas_tol(lo)) {  // infeasible below
        if (delta > 0.0) {
          t = (lo - x) / delta;
          side = 0;
        }
      } else if (delta > 0.0) {
        if (finite(hi)) {
          t = (hi - x) / delta;
          side = 1;
        }
      } else {
        if (finite(lo)) {
          t = (x - lo) / (-delta);
          side = 0;
        }
      }
      if (t == kInf) return false;
      if (t < 0.0) t = 0.0;
      return true;
    };

    double tmin = span;
    for (int k = 0; k < m; ++k) {
      double t, delta;
      int side;
      if (candidate(k, t, side, delta)) tmin = std::min(tmin, t);
    }
    if (tmin == kInf) return res;  // unbounded direction

    const double window = bland ? 0.0 : 1e-9 * (1.0 + tmin);
    double best_mag = -1.0;
    int best_id = std::numeric_limits<int>::max();
    for (int k = 0; k < m; ++k) {
      double t, delta;
      int side;
      if (!candidate(k, t, side, delta)) continue;
      if (t > tmin + window) continue;
      int v = basic[k];
      bool take;
      if (bland) {
        take = v < best_id;
      } else {
        take = std::abs(delta) > best_mag + 1e-15 ||
               (std::abs(delta) > best_mag - 1e-15 && v < best_id);
      }
      if (take) {
        best_mag = std::abs(delta);
        best_id = v;
        res.theta = t;
        res.leave_pos = k;
        res.leave_side = side;
      }
    }
    if (res.leave_pos < 0 || (bland && span <= tmin && q < best_id) ||
        (!bland && span < res.theta)) {
      if (!finite(span)) return res;  // no flip possible either
      res.theta = span;
      res.leave_pos = -1;
      res.leave_side = dir > 0 ? 1 : 0;
    }
    return res;
  }

  void pivot(const Problem& p, int q, int dir, const RatioResult& rr) {
    int m = (int)act.size();
    double theta = rr.theta;
    // move values
    xval[q] += dir * theta;
    for (int k = 0; k < m; ++k) xval[basic[k]] += -dir * alpha[k] * theta;
    if (rr.leave_pos < 0) {
      // bound flip
      vstat[q] = vstat[q] == NB_LO ? NB_UP : NB_LO;
      double b = vstat[q] == NB_LO ? vlb(p, q) : vub(p, q);
      if (finite(b)) xval[q] = b;
      return;
    }
    int k = rr.leave_pos;
    int lv = basic[k];
    vstat[lv] = rr.leave_side == 0 ? NB_LO : NB_UP;
    double b = rr.leave_side == 0 ? vlb(p, lv) : vub(p, lv);
    if (finite(b)) xval[lv] = b;
    basic[k] = q;
    vstat[q] = BASIC;
    // Binv <- E * Binv with E the eta matrix of alpha at position k
    double piv = alpha[k];
    double* rowk = &Binv[(size_t)k * m];
    for (int j = 0; j < m; ++j) rowk[j] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == k) continue;
      double f = alpha[i];
      if (f == 0.0) continue;
      double* rowi = &Binv[(size_t)i * m];
      for (int j = 0; j < m; ++j) rowi[j] -= f * rowk[j];
    }
    ++pivots_since_refactor;
  }

  // Verify the certificate documented on Outcome::farkas.  The terminal
  // phase-1 duals carry pricing noise up to the dual tolerance on rows whose
  // slack is nonbasic; a valid certificate never needs those, so weights at
  // noise scale are treated as absent instead of chasing the infinite bound
  // they would point at.
  bool verify_farkas(const Problem& p) const {
    double ynorm = 0.0;
    for (double v : yrow) ynorm = std::max(ynorm, std::abs(v));
    if (ynorm == 0.0) return false;
    const double ytol = 1e-8 * std::max(1.0, ynorm);
    std::vector<double> yv(yrow);
    for (double& v : yv)
      if (std::abs(v) <= ytol) v = 0.0;

    double lhs = 0.0;  // min_s y's over row bounds
    for (int pos = 0; pos < (int)act.size(); ++pos) {
      double y = yv[pos];
      if (y == 0.0) continue;
      const Row& row = p.rows[act[pos]];
      double b = y > 0.0 ? row.lo : row.hi;
      if (!finite(b)) return false;
      lhs += y * b;
    }
    double rhs = 0.0;  // max_x (y'A) x over the box
    double scale = 1.0;
    for (int j = 0; j < ncols; ++j) {
      double g = 0.0, gabs = 0.0;
      for (auto [r, c] : colidx[j]) {
        int pos = apos[r];
        if (pos < 0 || yv[pos] == 0.0) continue;
        g += yv[pos] * c;
        gabs += std::abs(yv[pos] * c);
      }
      if (std::abs(g) <= 1e-10 * gabs) continue;  // cancellation noise
      double b = g > 0.0 ? eub[j] : elb[j];
      if (!finite(b)) return false;
      rhs += g * b;
      scale += std::abs(g * b);
    }
    scale += std::abs(lhs);
    return lhs - rhs > 1e-7 * scale;
  }

  enum class RunResult { Optimal, Infeasible, Unbounded };

  RunResult run_simplex(const Problem& p, long iter_cap) {
    double cost_scale = 1.0;
    for (int j = 0; j < ncols; ++j) cost_scale = std::max(cost_scale, std::abs(p.obj[j]));
    bool bland = false;
    bool last_phase1 = true;
    int stall = 0;
    double last_metric = kInf;
    for (;;) {
      if (need_refactor || pivots_since_refactor >= cfg.refactor_every) refactor(p);
      if (++iters_this_solve > iter_cap) throw SolverFault("iteration limit exceeded");

      int m = (int)act.size();
      std::vector<double> cB(m, 0.0);
      bool phase1 = false;
      double f = 0.0;
      for (int k = 0; k < m; ++k) {
        int v = basic[k];
        double lo = vlb(p, v), hi = vub(p, v);
        if (xval[v] > hi + feas_tol(hi)) {
          cB[k] = 1.0;
          phase1 = true;
          f += xval[v] - hi;
        } else if (xval[v] < lo - feas_tol(lo)) {
          cB[k] = -1.0;
          phase1 = true;
          f += lo - xval[v];
        }
      }
      if (!phase1)
        for (int k = 0; k < m; ++k) cB[k] = vcost(p, basic[k]);

      double metric;
      if (phase1) {
        metric = f;
      } else {
        metric = 0.0;
        for (int j = 0; j < ncols; ++j) metric += p.obj[j] * xval[j];
      }
      if (phase1 != last_phase1) {
        last_phase1 = phase1;
        last_metric = kInf;
        stall = 0;
        bland = false;
      }
      if (metric < last_metric - 1e-10 * (1.0 + std::abs(metric))) {
        stall = 0;
        bland = false;
        last_metric = metric;
      } else if (++stall > 64) {
        bland = true;
      }
      if (stall > 512) {
        if (shift_round >= 8) throw SolverFault("stalled on a degenerate vertex");
        apply_shift(p, ++shift_round);
        refactor(p);
        stall = 0;
        bland = false;
        last_metric = kInf;
        continue;
      }

      btran(cB);
      double dtol = cfg.tol_dual * (phase1 ? 2.0 : (1.0 + cost_scale));
      PriceResult pr = price(p, phase1, bland, dtol);
      if (pr.v < 0) {
        if (!phase1) {
          if (shifted) {  // optimal for the relaxed bounds: restore and settle
            drop_shift(p);
            continue;
          }
          // never declare optimality off a drifted eta chain
          if (pivots_since_refactor > 0) {
            refactor(p);
            continue;
          }
          return RunResult::Optimal;
        }
        // claims infeasible; make sure the certificate really proves it
        if (verify_farkas(p)) {
          cert_ok = true;
          return RunResult::Infeasible;
        }
        if (!bland) {
          bland = true;
          continue;
        }
        refactor(p);
        PriceResult pr2 = price(p, true, true, dtol);
        if (pr2.v < 0) {
          if (verify_farkas(p)) {
            cert_ok = true;
            return RunResult::Infeasible;
          }
          // maybe the claim itself is tolerance noise: re-price with a
          // hair-trigger threshold and keep iterating if anything shows up
          PriceResult pr3 = price(p, true, true, 1e-13);
          if (pr3.v < 0) {
            // phase-1 bottomed out at a positive deficit no pivot can shrink.
            // When that deficit sits at rounding scale the program is empty
            // only on a knife edge and no dual row clears the margin test;
            // accept the verdict without a certificate rather than fault.
            double bscale = 1.0;
            for (int j = 0; j < ncols; ++j) {
              if (finite(elb[j])) bscale = std::max(bscale, std::abs(elb[j]));
              if (finite(eub[j])) bscale = std::max(bscale, std::abs(eub[j]));
            }
            for (int pos = 0; pos < (int)act.size(); ++pos) {
              const Row& row = p.rows[act[pos]];
              if (finite(row.lo)) bscale = std::max(bscale, std::abs(row.lo));
              if (finite(row.hi)) bscale = std::max(bscale, std::abs(row.hi));
            }
            if (metric <= 1e-6 * bscale) {
              cert_ok = false;
              return RunResult::Infeasible;
            }
            throw SolverFault("unverifiable infeasibility certificate");
          }
          ftran(pr3.v);
          RatioResult rr3 = ratio_test(p, pr3.v, pr3.dir, true);
          if (rr3.theta == kInf) throw SolverFault("phase-1 ray");
          pivot(p, pr3.v, pr3.dir, rr3);
          continue;
        }
        continue;
      }
      ftran(pr.v);
      RatioResult rr = ratio_test(p, pr.v, pr.dir, bland);
      if (rr.theta == kInf) {
        if (!phase1) return RunResult::Unbounded;
        throw SolverFault("phase-1 ray");
      }
      pivot(p, pr.v, pr.dir, rr);
    }
  }
};

Solver::Solver() : Solver(Config{}) {}
Solver::Solver(Config cfg) : impl_(std::make_unique<Impl>()) { impl_->cfg = cfg; }
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

void Solver::reset() {
  Config cfg = impl_->cfg;
  impl_ = std::make_unique<Impl>();
  impl_->cfg = cfg;
}

Outcome Solver::solve(const Problem& p, const std::vector<BoundOverride>& bounds) {
  Impl& im = *impl_;
  im.sync(p);
  im.iters_this_solve = 0;
  if (im.shifted) im.need_refactor = true;
  im.shifted = false;
  im.shift_round = 0;

  Outcome out;
  int conflict = im.apply_bounds(p, bounds);
  if (conflict >= 0) {
    out.status = Status::Infeasible;
    out.bound_conflict_col = conflict;
    return out;
  }
  im.snap_nonbasics(p);
  if (!im.cfg.lazy_rows) {
    bool added = false;
    for (int r = 0; r < im.npool; ++r) {
      if (im.apos[r] >= 0) continue;
      im.apos[r] = (int)im.act.size();
      im.act.push_back(r);
      int sv = im.slack_id(r);
      im.vstat[sv] = BASIC;
      im.basic.push_back(sv);
      added = true;
    }
    if (added) im.need_refactor = true;
  }
  im.need_refactor = true;

  long iter_cap = 50000 + 200L * (im.npool + im.ncols);
  for (;;) {
    Impl::RunResult rr = im.run_simplex(p, iter_cap);
    if (rr == Impl::RunResult::Unbounded) {
      out.status = Status::Unbounded;
      out.iterations = im.iters_this_solve;
      return out;
    }
    if (rr == Impl::RunResult::Infeasible) {
      out.status = Status::Infeasible;
      out.iterations = im.iters_this_solve;
      if (im.cert_ok) {
        out.farkas.assign(im.npool, 0.0);
        // export the same noise-clamped weights the verification accepted
        double nrm = 0.0;
        for (double v : im.yrow) nrm = std::max(nrm, std::abs(v));
        if (nrm == 0.0) nrm = 1.0;
        const double ytol = 1e-8 * std::max(1.0, nrm);
        for (int pos = 0; pos < (int)im.act.size(); ++pos)
          if (std::abs(im.yrow[pos]) > ytol) out.farkas[im.act[pos]] = im.yrow[pos] / nrm;
      }
      return out;
    }
    // optimal on the active set; activate any violated dormant rows
    std::vector<int> viol;
    for (int r = 0; r < im.npool; ++r) {
      if (im.apos[r] >= 0) continue;
      const Row& row = p.rows[r];
      double a = 0.0;
      for (auto [j, c] : row.coef) a += c * im.xval[j];
      if (a < row.lo - im.feas_tol(row.lo) || a > row.hi + im.feas_tol(row.hi))
        viol.push_back(r);
    }
    if (viol.empty()) break;
    for (int r : viol) {
      im.apos[r] = (int)im.act.size();
      im.act.push_back(r);
      const Row& row = p.rows[r];
      double a = 0.0;
      for (auto [j, c] : row.coef) a += c * im.xval[j];
      int sv = im.slack_id(r);
      im.vstat[sv] = BASIC;
      im.xval[sv] = a;
      im.basic.push_back(sv);
    }
    im.need_refactor = true;
  }

  out.status = Status::Optimal;
  out.iterations = im.iters_this_solve;
  out.x.assign(im.xval.begin(), im.xval.begin() + im.ncols);
  double obj = 0.0;
  for (int j = 0; j < im.ncols; ++j) obj += p.obj[j] * out.x[j];
  out.obj = obj;
  // duals with true costs
  {
    int m = (int)im.act.size();
    std::vector<double> cB(m);
    for (int k = 0; k < m; ++k) cB[k] = im.vcost(p, im.basic[k]);
    im.btran(cB);
    out.y.assign(im.npool, 0.0);
    for (int pos = 0; pos < m; ++pos) out.y[im.act[pos]] = im.yrow[pos];
  }
  return out;
}

Outcome solve_once(const Problem& p, const std::vector<BoundOverride>& bounds) {
  Solver s;
  return s.solve(p, bounds);
}

}  // namespace hubnet::lp
