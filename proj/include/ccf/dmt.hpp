#pragma once
// Diversity-multiplexing tradeoff curves, high-SNR outage probabilities in
// closed form, and Monte Carlo outage estimation for cross-checking them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ccf/channel.hpp"
#include "ccf/parallel.hpp"
#include "ccf/rates.hpp"
#include "ccf/rng.hpp"

namespace ccf {

namespace detail {
inline void check_dmt_args(int L, double r) {
  if (L < 2) throw std::invalid_argument("dmt: need at least two transmitters");
  if (r < 0.0 || r > 1.0) throw std::invalid_argument("dmt: multiplexing gain in [0,1]");
}
inline double pos(double x) { return x > 0.0 ? x : 0.0; }
}  // namespace detail

// no cooperation: a single direct link's diversity
inline double dmt_nc_upper(int L, double r) {
  detail::check_dmt_args(L, r);
  return detail::pos(1.0 - r);
}

// full transmitter cooperation upper bound
inline double dmt_coop_upper(int L, double r) {
  detail::check_dmt_args(L, r);
  return L * detail::pos(1.0 - r);
}

// decode-and-forward with random coding over the cooperation phase
inline double dmt_random(int L, double r) {
  detail::check_dmt_args(L, r);
  const double inner = std::min(1.0 - 2.0 * r, (L - 1) * (1.0 - 2.0 * (L - 1) * r));
  return detail::pos(L * inner);
}

// lattice-based cooperation; the inner maximization over the split exponent
// is piecewise linear, so checking kinks and endpoints is exact
inline double dmt_lattice(int L, double r) {
  detail::check_dmt_args(L, r);
  const double lm1 = static_cast<double>(L - 1);
  double d = detail::pos(1.0 - r);
  d += std::min(detail::pos(1.0 - 2.0 * r), detail::pos(lm1 * (1.0 - r * L)));
  if (L >= 3) {
    auto inner = [&](double x) {
      return std::min({detail::pos(1.0 - x - r), detail::pos(lm1 * (1.0 - lm1 * r - x)), detail::pos(x - r)});
    };
    const double cands[] = {0.0, 1.0, 0.5, (lm1 * (1.0 - lm1 * r) + r) / L, r, 1.0 - r, 1.0 - lm1 * r};
    double best = 0.0;
    for (double x : cands) best = std::max(best, inner(std::clamp(x, 0.0, 1.0)));
    d += (L - 2) * best;
  }
  return d;
}

// outage of the aligned no-cooperation scheme: every squared direct gain
// must clear SNR^(r-1)
inline double outage_nc_align(int L, double r, double snr_db) {
  detail::check_dmt_args(L, r);
  const double P = from_db(snr_db);
  return 1.0 - std::exp(-L * std::pow(P, r - 1.0));
}

namespace detail {

// P(sum of two unit exponentials above s), the Erlang-2 tail
inline double erlang2_tail(double s) { return s <= 0.0 ? 1.0 : std::exp(-s) * (1.0 + s); }

// probability that one transmitter's cooperation phase fails: some subset of
// its L-1 peer links is too weak for the corresponding joint threshold
inline double random_coop_fail(int L, double r, double P, long long mc_samples, std::uint64_t seed) {
  const double th1 = std::pow(P, 2.0 * r - 1.0);
  if (L == 2) return 1.0 - std::exp(-th1);
  if (L == 3) {
    const double th2 = std::pow(P, 4.0 * r - 1.0);
    return 1.0 - std::exp(-2.0 * th1) * erlang2_tail(th2 - 2.0 * th1);
  }
  // larger sets: Monte Carlo over the same event algebra; the weakest
  // subsets of each size are prefixes of the sorted gains
  std::vector<double> th(L);
  for (int j = 1; j < L; ++j) th[j] = std::pow(P, 2.0 * j * r - 1.0);
  std::vector<char> fail(mc_samples, 0);
  parallel_chunks(mc_samples, [&](long long lo, long long hi) {
    std::vector<double> g(L - 1);
    for (long long i = lo; i < hi; ++i) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
      for (int j = 0; j < L - 1; ++j) g[j] = rng.exponential();
      std::sort(g.begin(), g.end());
      double sum = 0.0;
      for (int j = 1; j <= L - 1; ++j) {
        sum += g[j - 1];
        if (sum < th[j]) {
          fail[i] = 1;
          break;
        }
      }
    }
  });
  long long c = 0;
  for (char f : fail) c += f;
  return static_cast<double>(c) / static_cast<double>(mc_samples);
}

}  // namespace detail

// outage of random-coding cooperation: a message is lost only when its
// cooperation phase fails or its own direct link is weak, independently
// across the L transmitters
inline double outage_random_coop(int L, double r, double snr_db, long long mc_samples = 200000,
                                 std::uint64_t seed = 999) {
  detail::check_dmt_args(L, r);
  const double P = from_db(snr_db);
  const double p_coop = detail::random_coop_fail(L, r, P, mc_samples, seed);
  const double p_direct = 1.0 - std::exp(-std::pow(P, 2.0 * r - 1.0));
  const double p_one = p_coop + p_direct - p_coop * p_direct;
  return std::pow(p_one, L);
}

inline double outage_closed_form(const std::string& scheme, int L, double r, double snr_db) {
  if (scheme == "nc_align") return outage_nc_align(L, r, snr_db);
  if (scheme == "random_coop") return outage_random_coop(L, r, snr_db);
  throw std::invalid_argument("outage_closed_form: unknown scheme '" + scheme + "'");
}

using RateEvaluator = std::function<double(const ChannelPair&, double /*P*/)>;

struct OutageEstimate {
  double prob = 0.0;
  double std_err = 0.0;
  long long samples = 0;
};

// Monte Carlo outage: draw Rayleigh channels, evaluate the scheme's rate,
// compare against (r/2)·log2(SNR). Per-sample seeds keep the result
// independent of the thread count.
inline OutageEstimate estimate_outage_mc(const RateEvaluator& rate_fn, int L, int M, double r, double snr_db,
                                         long long num_samples, std::uint64_t seed) {
  detail::check_dmt_args(L, r);
  if (num_samples < 1) throw std::invalid_argument("estimate_outage_mc: need samples");
  const double P = from_db(snr_db);
  const double target = 0.5 * r * log2_safe(P);
  std::vector<char> out(num_samples, 0);
  parallel_chunks(num_samples, [&](long long lo, long long hi) {
    for (long long i = lo; i < hi; ++i) {
      ChannelPair ch = draw_rayleigh(L, M, derive_seed(seed, static_cast<std::uint64_t>(i)));
      if (rate_fn(ch, P) < target) out[i] = 1;
    }
  });
  long long c = 0;
  for (char f : out) c += f;
  OutageEstimate e;
  e.samples = num_samples;
  e.prob = static_cast<double>(c) / static_cast<double>(num_samples);
  e.std_err = std::sqrt(std::max(e.prob * (1.0 - e.prob), 0.0) / static_cast<double>(num_samples));
  return e;
}

// rate of the aligned no-cooperation scheme at multiplexing gain r; -inf
// when some direct gain misses the alignment threshold, so its Monte Carlo
// outage matches outage_nc_align in distribution
inline RateEvaluator make_nc_align_evaluator(double r) {
  return [r](const ChannelPair& ch, double P) {
    const int L = ch.num_transmitters();
    const double thr = std::pow(P, r - 1.0);
    for (int l = 0; l < L; ++l)
      if (ch.H(l, 0) * ch.H(l, 0) < thr) return -kInf;
    return 0.5 * log2_safe((1.0 + L * std::pow(P, r)) / L);
  };
}

// event-level evaluator for random-coding cooperation, for cross-checking
// the closed form: +inf when transmitter 0's phases both succeed, -inf
// otherwise (peer links sit in column 0 of G)
inline RateEvaluator make_random_coop_event_evaluator(double r) {
  return [r](const ChannelPair& ch, double P) {
    const int L = ch.num_transmitters();
    std::vector<double> g;
    for (int lp = 0; lp < L; ++lp)
      if (lp != 0) g.push_back(ch.G(lp, 0) * ch.G(lp, 0));
    std::sort(g.begin(), g.end());
    double sum = 0.0;
    for (int j = 1; j <= L - 1; ++j) {
      sum += g[j - 1];
      if (sum < std::pow(P, 2.0 * j * r - 1.0)) return -kInf;
    }
    if (ch.H(0, 0) * ch.H(0, 0) < std::pow(P, 2.0 * r - 1.0)) return -kInf;
    return kInf;
  };
}

struct DiversityFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points_used = 0;
  std::vector<std::string> warnings;
};

// least-squares slope of -log10(outage) against log10(SNR)
inline DiversityFit fit_diversity_slope(const std::vector<double>& snr_db, const std::vector<double>& prob) {
  if (snr_db.size() != prob.size()) throw std::invalid_argument("fit_diversity_slope: length mismatch");
  DiversityFit fit;
  std::vector<double> xs, ys;
  for (size_t i = 0; i < prob.size(); ++i) {
    if (prob[i] <= 0.0) {
      fit.warnings.push_back("skipping zero-outage cell at " + std::to_string(snr_db[i]) + " dB");
      continue;
    }
    xs.push_back(snr_db[i] / 10.0);
    ys.push_back(-std::log10(prob[i]));
  }
  fit.points_used = static_cast<int>(xs.size());
  if (fit.points_used < 3) throw std::invalid_argument("fit_diversity_slope: fewer than 3 usable points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < fit.points_used; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double n = fit.points_used;
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-12) throw std::invalid_argument("fit_diversity_slope: degenerate abscissae");
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

}  // namespace ccf
