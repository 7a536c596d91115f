#pragma once
// Discrete search over coefficient matrices and steering vectors. The
// steering optimizer is a deterministic lower-bounding heuristic: a coarse
// grid over power profiles (plus alignment and zero-forcing candidates)
// followed by coordinate ascent. It never returns less than the best grid
// candidate, and re-evaluating its output through rate_coop reproduces the
// reported rate exactly.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ccf/rates.hpp"

namespace ccf {

struct SearchBudget {
  long long coeff_bound = 3;
  int grid_points = 9;   // steering grid resolution per dimension
  int refine_iters = 2;  // coordinate-ascent passes
  bool all_subsets_B = false;

  // nested grids: each level's grid contains the previous one
  static SearchBudget from_level(int level) {
    if (level < 0 || level > 5) throw std::invalid_argument("SearchBudget: level in [0,5]");
    SearchBudget b;
    b.grid_points = (1 << (level + 2)) + 1;  // 5, 9, 17, ...
    b.refine_iters = 2;
    b.coeff_bound = level >= 3 ? 4 : 3;
    return b;
  }
};

// all L x M integer matrices with entries in [-bound, bound], no zero
// column, full column rank, deduplicated per-column up to sign (first
// nonzero entry of each column positive). strict_all_nonzero additionally
// requires every entry nonzero (used when each decoded combination must
// involve every transmitter).
inline std::vector<IntMat> enumerate_coefficients(int L, int M, long long bound, bool strict_all_nonzero = false) {
  if (L < 1 || M < 1 || M > L) throw std::invalid_argument("enumerate_coefficients: need 1 <= M <= L");
  if (bound < 1 || bound > 7) throw std::invalid_argument("enumerate_coefficients: bound in [1,7]");
  const long long width = 2 * bound + 1;
  double total_d = std::pow(static_cast<double>(width), L);
  if (std::pow(total_d, M) > 5e7) throw std::invalid_argument("enumerate_coefficients: search space too large");

  // candidate columns, sign-canonical
  std::vector<std::vector<long long>> cols;
  const long long ncol = static_cast<long long>(total_d);
  for (long long idx = 0; idx < ncol; ++idx) {
    std::vector<long long> c(L);
    long long rem = idx;
    bool nz = false, ok = true;
    for (int l = 0; l < L; ++l) {
      c[l] = rem % width - bound;
      rem /= width;
      nz = nz || (c[l] != 0);
      if (strict_all_nonzero && c[l] == 0) ok = false;
    }
    if (!nz || !ok) continue;
    int first = 0;
    while (c[first] == 0) ++first;
    if (c[first] < 0) continue;  // sign twin of a kept column
    cols.push_back(std::move(c));
  }

  std::vector<IntMat> out;
  std::vector<int> pick(M, 0);
  std::function<void(int)> rec = [&](int m) {
    if (m == M) {
      IntMat A(L, M);
      for (int mm = 0; mm < M; ++mm)
        for (int l = 0; l < L; ++l) A(l, mm) = cols[pick[mm]][l];
      if (int_rank(A) == M) out.push_back(std::move(A));
      return;
    }
    for (size_t i = 0; i < cols.size(); ++i) {
      // columns are unordered as receiver labels are, but each receiver
      // decodes its own combination, so keep ordered tuples of distinct
      // columns
      bool dup = false;
      for (int mm = 0; mm < m; ++mm) dup = dup || (pick[mm] == static_cast<int>(i));
      if (dup) continue;
      pick[m] = static_cast<int>(i);
      rec(m + 1);
    }
  };
  if (M == 1) {
    for (size_t i = 0; i < cols.size(); ++i) {
      IntMat A(L, 1);
      for (int l = 0; l < L; ++l) A(l, 0) = cols[i][l];
      out.push_back(std::move(A));
    }
  } else {
    rec(0);
  }
  return out;
}

// zero-forcing beam directions for every receiver, stacked as columns
inline Mat zero_forcing_vectors(const Mat& H) {
  Mat D(H.rows, H.cols);
  for (int m = 0; m < H.cols; ++m) {
    Vec d = zero_forcing_vector(H, m);
    for (int l = 0; l < H.rows; ++l) D(l, m) = d[l];
  }
  return D;
}

struct OptimizationResult {
  double best_rate = 0.0;
  IntMat A;
  SteeringConfig steering;
  RateBreakdown breakdown;
  long long evals = 0;
};

namespace detail {

inline std::vector<double> linspace01(int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = static_cast<double>(i) / (points - 1);
  return g;
}

// beams for the single-receiver case have a closed form: all residual power,
// phase-matched to the receiver
inline void fill_beam_m1(const Mat& H, const std::vector<int>& B, Mat& V) {
  const int L = H.rows;
  for (int l = 0; l < L; ++l) V(l, 1) = 0.0;
  for (int l : B) {
    double resid = std::max(1.0 - V(l, 0) * V(l, 0), 0.0);
    V(l, 1) = (H(l, 0) >= 0 ? 1.0 : -1.0) * std::sqrt(resid);
  }
}

// direction over the cooperating set only; ZF against the other receivers'
// full channels, falling back to the matched direction when degenerate
inline Vec restricted_direction(const Mat& H, const std::vector<int>& B, int m, bool zf) {
  const int L = H.rows;
  Vec d(L, 0.0);
  if (B.empty()) return d;
  if (zf && H.cols > 1) {
    // orthonormalize the other receivers' channels restricted to B
    std::vector<Vec> basis;
    for (int mp = 0; mp < H.cols; ++mp) {
      if (mp == m) continue;
      Vec q(L, 0.0);
      for (int l : B) q[l] = H(l, mp);
      for (const Vec& b : basis) {
        double c = dot(q, b);
        for (int l = 0; l < L; ++l) q[l] -= c * b[l];
      }
      double nn = std::sqrt(norm2(q));
      if (nn > 1e-12) basis.push_back(scale(q, 1.0 / nn));
    }
    for (int l : B) d[l] = H(l, m);
    for (const Vec& b : basis) {
      double c = dot(d, b);
      for (int l = 0; l < L; ++l) d[l] -= c * b[l];
    }
  } else {
    for (int l : B) d[l] = H(l, m);
  }
  double nn = std::sqrt(norm2(d));
  if (nn < 1e-9) {
    // fully degenerate; fall back to matched
    for (int l = 0; l < L; ++l) d[l] = 0.0;
    for (int l : B) d[l] = H(l, m);
    nn = std::sqrt(norm2(d));
    if (nn < 1e-12) return Vec(L, 0.0);
  }
  return scale(d, 1.0 / nn);
}

}  // namespace detail

// Deterministic steering search for a fixed coefficient matrix and
// cooperating set. Grid candidates cover constant, per-transmitter (when L
// is small) and alignment profiles for the fresh weights; beams use the
// closed form for one receiver and {zero-forcing, matched} x power-split
// grids for two. Coordinate ascent then refines every entry of V.
inline OptimizationResult optimize_steering(const Mat& H, const Mat& G, double P, const IntMat& A,
                                            const std::vector<int>& B, const SearchBudget& budget,
                                            const std::vector<SteeringConfig>* warm_starts = nullptr) {
  const int L = H.rows, M = H.cols;
  validate_coefficients(A, L, M);
  OptimizationResult best;
  best.A = A;
  best.best_rate = -1.0;

  auto consider = [&](const SteeringConfig& s) {
    RateBreakdown rb = rate_coop(H, G, P, A, s);
    ++best.evals;
    if (rb.overall > best.best_rate) {
      best.best_rate = rb.overall;
      best.steering = s;
      best.breakdown = rb;
    }
  };

  auto complete_and_consider = [&](const Vec& v0) {
    SteeringConfig s;
    s.B = B;
    s.V = Mat(L, M + 1);
    for (int l = 0; l < L; ++l) s.V(l, 0) = v0[l];
    if (B.empty() || M > 2) {
      consider(s);  // superposition only
      return;
    }
    if (M == 1) {
      detail::fill_beam_m1(H, B, s.V);
      consider(s);
      // and the pure-superposition variant of the same profile
      for (int l = 0; l < L; ++l) s.V(l, 1) = 0.0;
      consider(s);
      return;
    }
    // M == 2: direction families x power split; the mixing angle is coarse
    // by design (ascent refines it), so cap the grid to keep the candidate
    // count bounded
    const auto thetas = detail::linspace01(std::min(budget.grid_points, 9));
    for (bool zf1 : {true, false})
      for (bool zf2 : {true, false}) {
        Vec d1 = detail::restricted_direction(H, B, 0, zf1);
        Vec d2 = detail::restricted_direction(H, B, 1, zf2);
        for (double th : thetas) {
          const double mu1 = std::cos(th * 1.5707963267948966);
          const double mu2 = std::sin(th * 1.5707963267948966);
          // largest common scale meeting every cooperator's budget
          double t = kInf;
          for (int l : B) {
            double used = s.V(l, 0) * s.V(l, 0);
            double dd = mu1 * mu1 * d1[l] * d1[l] + mu2 * mu2 * d2[l] * d2[l];
            if (dd > 1e-15) t = std::min(t, std::sqrt(std::max(1.0 - used, 0.0) / dd));
          }
          if (t == kInf) t = 0.0;
          for (double frac : {1.0, 0.5}) {
            for (int l = 0; l < L; ++l) {
              s.V(l, 1) = frac * t * mu1 * d1[l];
              s.V(l, 2) = frac * t * mu2 * d2[l];
            }
            consider(s);
          }
        }
      }
    for (int l = 0; l < L; ++l) s.V(l, 1) = s.V(l, 2) = 0.0;
    consider(s);
  };

  // constant profiles first so symmetric optima win ties deterministically
  const auto grid = detail::linspace01(budget.grid_points);
  for (double c : grid) complete_and_consider(Vec(L, c));

  if (L <= 3) {
    // per-transmitter tensor grid; capped beyond the cheapest case (the
    // caps keep the grids nested across budget levels)
    const auto tgrid =
        (L == 2 && M == 1) ? grid : detail::linspace01(std::min(budget.grid_points, 9));
    const int tn = static_cast<int>(tgrid.size());
    std::vector<int> idx(L, 0);
    Vec v0(L);
    for (;;) {
      for (int l = 0; l < L; ++l) v0[l] = tgrid[idx[l]];
      complete_and_consider(v0);
      int l = 0;
      while (l < L && ++idx[l] == tn) idx[l++] = 0;
      if (l == L) break;
    }
  }

  // alignment profiles: make the effective channel proportional to a column
  for (int m = 0; m < M; ++m) {
    bool feasible = true;
    double tmax = kInf;
    Vec dir(L, 0.0);
    for (int l = 0; l < L; ++l) {
      if (A(l, m) == 0) continue;
      if (H(l, m) == 0.0) { feasible = false; break; }
      dir[l] = static_cast<double>(A(l, m)) / H(l, m);
      tmax = std::min(tmax, 1.0 / std::abs(dir[l]));
    }
    if (!feasible || tmax == kInf) continue;
    for (double frac : {0.25, 0.5, 0.75, 1.0}) {
      Vec v0(L);
      for (int l = 0; l < L; ++l) v0[l] = frac * tmax * dir[l];
      complete_and_consider(v0);
    }
  }

  if (warm_starts)
    for (const auto& s : *warm_starts)
      if (s.V.rows == L && s.V.cols == M + 1 && s.B == B) consider(s);

  // coordinate ascent on every entry of V, keeping per-transmitter power
  // feasible; accepts strict improvements only
  for (int round = 0; round < budget.refine_iters; ++round) {
    const double width = round == 0 ? 1.0 : 0.25 / round;
    for (int l = 0; l < L; ++l) {
      for (int m = 0; m <= M; ++m) {
        if (m >= 1 && std::find(B.begin(), B.end(), l) == B.end()) continue;
        double others = 0.0;
        for (int mp = 0; mp <= M; ++mp)
          if (mp != m) others += best.steering.V(l, mp) * best.steering.V(l, mp);
        const double cap = std::sqrt(std::max(1.0 - others, 0.0));
        const double center = best.steering.V(l, m);
        SteeringConfig trial = best.steering;
        for (int i = 0; i < 33; ++i) {
          double x = center + width * (static_cast<double>(i) / 16.0 - 1.0);
          x = std::clamp(x, -cap, cap);
          trial.V(l, m) = x;
          consider(trial);
        }
      }
    }
  }
  return best;
}

// best single-shot compute-and-forward rate over the coefficient search
inline OptimizationResult best_noncooperative_rate(const Mat& H, double P, const SearchBudget& budget,
                                                   bool strict_all_nonzero = false) {
  OptimizationResult best;
  best.best_rate = -1.0;
  for (const auto& A : enumerate_coefficients(H.rows, H.cols, budget.coeff_bound, strict_all_nonzero)) {
    double r = rate_nc(H, P, A);
    ++best.evals;
    if (r > best.best_rate) {
      best.best_rate = r;
      best.A = A;
    }
  }
  best.steering = superposition_only(Vec(H.rows, 1.0), H.cols);
  return best;
}

// maximize the cooperative rate over coefficients, cooperating sets and
// steering. Cooperating sets tried: empty, singletons, everyone (or all
// subsets when the budget asks). Coefficient columns whose norm violates
// the compute-and-forward ceiling are skipped; they cannot beat a kept
// candidate because only the vestigial term depends on the coefficients.
inline OptimizationResult best_cooperative_rate(const Mat& H, const Mat& G, double P, const SearchBudget& budget,
                                                bool strict_all_nonzero = false,
                                                const std::vector<SteeringConfig>* warm_starts = nullptr,
                                                const std::vector<std::vector<int>>* b_modes_override = nullptr) {
  const int L = H.rows, M = H.cols;
  std::vector<std::vector<int>> b_modes;
  if (b_modes_override) {
    b_modes = *b_modes_override;
  } else if (budget.all_subsets_B) {
    b_modes.push_back({});
    for (unsigned mask = 1; mask < (1u << L); ++mask) {
      std::vector<int> b;
      for (int l = 0; l < L; ++l)
        if (mask & (1u << l)) b.push_back(l);
      b_modes.push_back(std::move(b));
    }
  } else {
    b_modes.push_back({});
    for (int l = 0; l < L; ++l) b_modes.push_back({l});
    if (L > 1) {
      std::vector<int> all(L);
      for (int l = 0; l < L; ++l) all[l] = l;
      b_modes.push_back(std::move(all));
    }
  }

  OptimizationResult best;
  best.best_rate = -1.0;
  for (const auto& A : enumerate_coefficients(L, M, budget.coeff_bound, strict_all_nonzero)) {
    bool skip = false;
    for (int m = 0; m < M && !skip; ++m)
      skip = !strict_all_nonzero && norm2_int(A.col(m)) > 1.0 + P * norm2(H.col(m));
    if (skip) continue;
    for (const auto& B : b_modes) {
      OptimizationResult r = optimize_steering(H, G, P, A, B, budget, warm_starts);
      best.evals += r.evals;
      if (r.best_rate > best.best_rate) {
        r.evals = best.evals;
        best = r;
      }
    }
  }
  if (best.best_rate < 0) throw std::invalid_argument("best_cooperative_rate: no admissible coefficients");
  return best;
}

}  // namespace ccf
