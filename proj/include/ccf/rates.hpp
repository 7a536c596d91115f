#pragma once
// Achievable-rate formulas and upper bounds for cooperative
// compute-and-forward. Everything is a direct evaluation of the closed
// forms; the only iteration anywhere is the one-dimensional correlation
// search inside the two-node cut-set bound, which reduces to a quadratic
// crossing solve.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ccf/channel.hpp"
#include "ccf/lattice.hpp"
#include "ccf/linalg.hpp"

namespace ccf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// multiple-access ceiling: min over nonempty user subsets of the symmetric
// per-user rate. An empty gain vector imposes no constraint.
inline double c_mac(const Vec& gains, double P, double sigma2) {
  if (P <= 0 || sigma2 <= 0) throw std::invalid_argument("c_mac: P and sigma2 must be positive");
  const int n = static_cast<int>(gains.size());
  if (n == 0) return kInf;
  if (n > 20) throw std::invalid_argument("c_mac: too many users for subset enumeration");
  double best = kInf;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double s = 0.0;
    int cnt = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        s += gains[i] * gains[i];
        ++cnt;
      }
    best = std::min(best, std::log2(1.0 + P * s / sigma2) / (2.0 * cnt));
  }
  return best;
}

// the coefficient matrix must have full column rank and no all-zero column
inline void validate_coefficients(const IntMat& A, int L, int M) {
  if (A.rows != L || A.cols != M) throw std::invalid_argument("coefficients: wrong shape");
  for (int m = 0; m < M; ++m) {
    bool nz = false;
    for (int l = 0; l < L; ++l) nz = nz || (A(l, m) != 0);
    if (!nz) throw std::invalid_argument("coefficients: column " + std::to_string(m) + " is zero");
  }
  if (int_rank(A) != M) throw std::invalid_argument("coefficients: rank deficient");
}

namespace detail {

// compute-and-forward rate for one receiver: effective channel h, integer
// coefficients a, effective noise variance N
inline double ng_term(const Vec& h, const std::vector<long long>& a, double P, double N) {
  const double hh = norm2(h);
  const double aa = norm2_int(a);
  double ah = 0.0;
  for (size_t i = 0; i < h.size(); ++i) ah += static_cast<double>(a[i]) * h[i];
  double gap = aa * hh - ah * ah;  // Cauchy-Schwarz, nonnegative up to roundoff
  if (gap < 0) gap = 0;
  const double val = 0.5 * std::log2(N + P * hh) - 0.5 * std::log2(aa * N + P * gap);
  return val > 0 ? val : 0.0;
}

}  // namespace detail

// one-shot compute-and-forward: every receiver decodes its own integer
// combination, noise is unit variance
inline double rate_nc(const Mat& H, double P, const IntMat& A) {
  if (P <= 0) throw std::invalid_argument("rate_nc: P must be positive");
  validate_coefficients(A, H.rows, H.cols);
  double worst = kInf;
  for (int m = 0; m < H.cols; ++m)
    worst = std::min(worst, detail::ng_term(H.col(m), A.col(m), P, 1.0));
  return worst;
}

struct SteeringConfig {
  std::vector<int> B;  // cooperating transmitter indices, sorted, unique
  Mat V;               // L x (M+1); column 0 = fresh signal weights, column m = beam for receiver m-1

  void validate(int L, int M) const {
    if (V.rows != L || V.cols != M + 1) throw std::invalid_argument("SteeringConfig: V must be L x (M+1)");
    for (size_t i = 0; i < B.size(); ++i) {
      if (B[i] < 0 || B[i] >= L) throw std::invalid_argument("SteeringConfig: B index out of range");
      if (i > 0 && B[i] <= B[i - 1]) throw std::invalid_argument("SteeringConfig: B must be sorted unique");
    }
    for (int l = 0; l < L; ++l) {
      double s = 0.0;
      for (int m = 0; m <= M; ++m) s += V(l, m) * V(l, m);
      if (s > 1.0 + 1e-12) throw std::invalid_argument("SteeringConfig: power constraint violated at transmitter " + std::to_string(l));
      bool in_b = std::find(B.begin(), B.end(), l) != B.end();
      if (!in_b)
        for (int m = 1; m <= M; ++m)
          if (V(l, m) != 0.0) throw std::invalid_argument("SteeringConfig: non-cooperating transmitter carries a beam");
    }
  }

  bool in_B(int l) const { return std::find(B.begin(), B.end(), l) != B.end(); }
};

inline SteeringConfig superposition_only(const Vec& v0, int M) {
  SteeringConfig s;
  s.V = Mat(static_cast<int>(v0.size()), M + 1);
  for (size_t l = 0; l < v0.size(); ++l) s.V(static_cast<int>(l), 0) = v0[l];
  return s;
}

struct RateBreakdown {
  double overall = 0;
  double mac_term = kInf;        // +inf when B is empty
  double resolution_term = 0;    // of the bottleneck receiver
  double vestigial_term = 0;
  int argmin_receiver = 0;
  Vec I_mr, I_mv;                // per-receiver interference powers
};

// block-Markov cooperative rate: the minimum of the cooperators' decoding
// ceiling and, per receiver, the resolution + vestigial sum
inline RateBreakdown rate_coop(const Mat& H, const Mat& G, double P, const IntMat& A, const SteeringConfig& s) {
  const int L = H.rows, M = H.cols;
  if (P <= 0) throw std::invalid_argument("rate_coop: P must be positive");
  if (G.rows != L || G.cols != L) throw std::invalid_argument("rate_coop: G must be L x L");
  validate_coefficients(A, L, M);
  s.validate(L, M);

  RateBreakdown out;
  const Vec v0 = s.V.col(0);

  out.mac_term = kInf;
  for (int l : s.B) {
    Vec peers;
    peers.reserve(L - 1);
    for (int lp = 0; lp < L; ++lp)
      if (lp != l) peers.push_back(G(lp, l) * v0[lp]);
    out.mac_term = std::min(out.mac_term, c_mac(peers, P, 1.0));
  }

  out.I_mr.assign(M, 0.0);
  out.I_mv.assign(M, 0.0);
  double worst = kInf;
  for (int m = 0; m < M; ++m) {
    const Vec hm = H.col(m);
    const Vec hv0 = hadamard(hm, v0);
    double imv = 0.0;
    for (int mp = 0; mp < M; ++mp) {
      if (mp == m) continue;
      double c = dot(hm, s.V.col(mp + 1));
      imv += c * c;
    }
    imv *= P;
    const double imr = imv + P * norm2(hv0);
    out.I_mv[m] = imv;
    out.I_mr[m] = imr;

    const double beam = dot(hm, s.V.col(m + 1));
    const double res = 0.5 * std::log2(1.0 + P * beam * beam / (1.0 + imr));
    const double vest = detail::ng_term(hv0, A.col(m), P, 1.0 + imv);
    if (res + vest < worst) {
      worst = res + vest;
      out.argmin_receiver = m;
      out.resolution_term = res;
      out.vestigial_term = vest;
    }
  }
  out.overall = std::min(out.mac_term, worst);
  return out;
}

// direction in the null space of the other receivers' channels maximizing
// the gain toward receiver m; unit norm, sign fixed so the gain is >= 0
inline Vec zero_forcing_vector(const Mat& H, int m) {
  const int L = H.rows, M = H.cols;
  if (m < 0 || m >= M) throw std::invalid_argument("zero_forcing_vector: bad receiver index");
  // orthonormalize the other columns, then project them out of h_m
  std::vector<Vec> basis;
  for (int mp = 0; mp < M; ++mp) {
    if (mp == m) continue;
    Vec q = H.col(mp);
    for (const Vec& b : basis) {
      double c = dot(q, b);
      for (int l = 0; l < L; ++l) q[l] -= c * b[l];
    }
    double nn = std::sqrt(norm2(q));
    if (nn > 1e-12) basis.push_back(scale(q, 1.0 / nn));
  }
  Vec v = H.col(m);
  for (const Vec& b : basis) {
    double c = dot(v, b);
    for (int l = 0; l < L; ++l) v[l] -= c * b[l];
  }
  double nn = std::sqrt(norm2(v));
  if (nn < 1e-9) {
    // h_m lies in the span of the others: any null direction has zero gain.
    // Deterministic fallback: first coordinate vector with a nontrivial
    // projection onto the null space.
    for (int i = 0; i < L; ++i) {
      Vec e(L, 0.0);
      e[i] = 1.0;
      for (const Vec& b : basis) {
        double c = dot(e, b);
        for (int l = 0; l < L; ++l) e[l] -= c * b[l];
      }
      double en = std::sqrt(norm2(e));
      if (en > 1e-9) {
        v = scale(e, 1.0 / en);
        break;
      }
    }
  } else {
    v = scale(v, 1.0 / nn);
  }
  double g = dot(v, H.col(m));
  if (g < 0)
    for (double& x : v) x = -x;
  return v;
}

// zero-forcing special case: all transmitters cooperate, beams null the cross
// receivers, magnitudes share a common scale chosen to respect every
// transmitter's power budget given v0
inline double rate_zf(const Mat& H, const Mat& G, double P, const IntMat& A, const Vec& v0) {
  const int L = H.rows, M = H.cols;
  if (static_cast<int>(v0.size()) != L) throw std::invalid_argument("rate_zf: v0 must have L entries");
  validate_coefficients(A, L, M);

  std::vector<Vec> dirs(M);
  for (int m = 0; m < M; ++m) dirs[m] = zero_forcing_vector(H, m);

  double t = kInf;
  for (int l = 0; l < L; ++l) {
    double used = v0[l] * v0[l];
    if (used > 1.0 + 1e-12) throw std::invalid_argument("rate_zf: v0 exceeds the power budget");
    double dd = 0.0;
    for (int m = 0; m < M; ++m) dd += dirs[m][l] * dirs[m][l];
    if (dd > 1e-15) t = std::min(t, std::sqrt(std::max(1.0 - used, 0.0) / dd));
  }
  if (t == kInf) t = 0.0;

  double mac = kInf;
  for (int l = 0; l < L; ++l) {
    Vec peers;
    for (int lp = 0; lp < L; ++lp)
      if (lp != l) peers.push_back(G(lp, l) * v0[lp]);
    mac = std::min(mac, c_mac(peers, P, 1.0));
  }

  double worst = kInf;
  for (int m = 0; m < M; ++m) {
    const Vec hm = H.col(m);
    const Vec hv0 = hadamard(hm, v0);
    const double beam = dot(hm, dirs[m]) * t;
    const auto am = A.col(m);
    const double aa = norm2_int(am);
    double ah = 0.0;
    for (int l = 0; l < L; ++l) ah += static_cast<double>(am[l]) * hv0[l];
    double gap = aa * norm2(hv0) - ah * ah;
    if (gap < 0) gap = 0;
    double term = 0.5 * std::log2(1.0 + P * (norm2(hv0) + beam * beam)) -
                  0.5 * std::log2(aa + P * gap);
    worst = std::min(worst, term > 0 ? term : 0.0);
  }
  return std::min(mac, worst);
}

// superposition-only cooperation: compute-and-forward over the power-scaled
// effective channel
inline double rate_superposition(const Mat& H, double P, const IntMat& A, const Vec& v0) {
  if (static_cast<int>(v0.size()) != H.rows) throw std::invalid_argument("rate_superposition: v0 must have L entries");
  for (double v : v0)
    if (std::abs(v) > 1.0 + 1e-12) throw std::invalid_argument("rate_superposition: |v0| must be <= 1");
  Mat He = H;
  for (int l = 0; l < H.rows; ++l)
    for (int m = 0; m < H.cols; ++m) He(l, m) *= v0[l];
  return rate_nc(He, P, A);
}

// two-block random-coding scheme, single receiver
inline double rate_random(const Mat& H, const Mat& G, double P, const std::vector<int>& B) {
  const int L = H.rows;
  if (H.cols != 1) throw std::invalid_argument("rate_random: single receiver only");
  if (B.empty()) throw std::invalid_argument("rate_random: B must be nonempty");
  double mac = kInf;
  for (int l : B) {
    if (l < 0 || l >= L) throw std::invalid_argument("rate_random: B index out of range");
    Vec peers;
    for (int lp = 0; lp < L; ++lp)
      if (lp != l) peers.push_back(G(lp, l));
    mac = std::min(mac, 0.5 * c_mac(peers, P, 1.0));
  }
  double sum = 0.0;
  for (int l : B) sum += H(l, 0);
  const double coherent = 0.25 * std::log2(1.0 + P * sum * sum);
  return std::min(mac, coherent);
}

// coherent MISO ceiling, single receiver
inline double bound_miso(const Vec& h, double P) {
  if (h.empty()) throw std::invalid_argument("bound_miso: empty channel");
  if (P <= 0) throw std::invalid_argument("bound_miso: P must be positive");
  return 0.5 * std::log2(1.0 + P * norm2(h));
}

// two-transmitter cut-set bound with correlated inputs. For each choice of
// the "source" transmitter: broadcast cut (1-rho^2 power fraction toward the
// receiver and the partner) against the coherent two-user cut, maximized
// over the input correlation. Both cuts are monotone in rho so the max sits
// at an endpoint or at their crossing, which is a quadratic root.
inline double bound_cutset(const Mat& H, const Mat& G, double P) {
  if (H.rows != 2 || H.cols != 1) throw std::invalid_argument("bound_cutset: implemented for L=2, M=1");
  if (P <= 0) throw std::invalid_argument("bound_cutset: P must be positive");
  const double h1 = H(0, 0), h2 = H(1, 0);
  if (h1 * h2 < 0) throw std::invalid_argument("bound_cutset: gains must share a sign");

  auto eval = [&](double hl, double gl, double rho) {
    const double bc = 0.5 * std::log2(1.0 + P * (1.0 - rho * rho) * (hl * hl + gl * gl));
    const double mc = 0.5 * std::log2(1.0 + P * (h1 * h1 + h2 * h2 + 2.0 * h1 * h2 * rho));
    return std::min(bc, mc);
  };

  double bound = kInf;
  for (int l = 0; l < 2; ++l) {
    const double hl = H(l, 0);
    const double gl = (l == 0) ? G(0, 1) : G(1, 0);  // gain toward the partner
    const double se = hl * hl + gl * gl;
    std::vector<double> cand = {0.0, 1.0};
    if (se > 0) {
      // (1-rho^2) se = h1^2 + h2^2 + 2 h1 h2 rho
      const double a = se, b = 2.0 * h1 * h2, c = h1 * h1 + h2 * h2 - se;
      const double disc = b * b - 4.0 * a * c;
      if (disc >= 0) {
        const double r1 = (-b + std::sqrt(disc)) / (2.0 * a);
        const double r2 = (-b - std::sqrt(disc)) / (2.0 * a);
        for (double r : {r1, r2})
          if (r > 0.0 && r < 1.0) cand.push_back(r);
      }
    }
    double top = 0.0;
    for (double r : cand) top = std::max(top, eval(hl, gl, r));
    bound = std::min(bound, top);
  }
  return bound;
}

namespace detail {

// iterated antiderivatives of the standard normal density:
// I_0 = pdf, I_1 = cdf, I_m' = I_{m-1}
inline double gauss_iter_integral(int m, double x) {
  const double pdf = std::exp(-0.5 * x * x) * 0.3989422804014326779399461;
  const double cdf = 0.5 * std::erfc(-x * 0.7071067811865475244008444);
  if (m == 0) return pdf;
  if (m == 1) return cdf;
  double a = pdf, b = cdf;
  for (int i = 2; i <= m; ++i) {
    double c = (x * b + a) / static_cast<double>(i - 1);
    a = b;
    b = c;
  }
  return b;
}

// density of sum of centered uniform boxes (widths w) plus N(0, sigma2):
// signed sum of iterated Gaussian antiderivatives over the box corners
inline double box_gauss_density(const Vec& w, double sigma2, double y) {
  const double sd = std::sqrt(sigma2);
  const int kk = static_cast<int>(w.size());
  if (kk == 0) return std::exp(-0.5 * y * y / sigma2) / std::sqrt(6.283185307179586 * sigma2);
  double coef = std::pow(sd, kk - 1);
  for (double wl : w) coef /= wl;
  double acc = 0.0;
  for (unsigned mask = 0; mask < (1u << kk); ++mask) {
    double arg = y;
    int neg = 0;
    for (int i = 0; i < kk; ++i) {
      if (mask & (1u << i)) {
        arg += w[i] / 2.0;
      } else {
        arg -= w[i] / 2.0;
        ++neg;
      }
    }
    const double s = (neg % 2 == 0) ? 1.0 : -1.0;
    acc += s * gauss_iter_integral(kk, arg / sd);
  }
  return coef * acc;
}

}  // namespace detail

// Monte Carlo estimate of the normalized mutual information between the
// dithered lattice inputs of the listed transmitters and the channel output,
// conditioned on the other inputs. Codewords are drawn through the actual
// encoding map; with cubic shaping the coordinates are i.i.d., so the sample
// entropy uses the exact scalar density of box-convolved Gaussian noise.
inline double mutual_info_check(const CodebookParams& params, const Vec& gains, double P, double sigma2,
                                long long num_samples, std::uint64_t seed = 12345) {
  if (P <= 0 || sigma2 <= 0) throw std::invalid_argument("mutual_info_check: P and sigma2 must be positive");
  if (num_samples < 1) throw std::invalid_argument("mutual_info_check: need samples");
  Vec active;
  for (double g : gains)
    if (g != 0.0) active.push_back(g);
  if (active.empty()) return 0.0;
  if (active.size() > 10) throw std::invalid_argument("mutual_info_check: too many users");

  Codebook cb = build_codebook(params);
  const double beta = params.beta();
  const double amp = std::sqrt(P / params.second_moment());  // per-dim codeword power -> P

  Vec widths(active.size());
  for (size_t l = 0; l < active.size(); ++l) widths[l] = std::abs(active[l]) * amp * beta;

  Rng rng(derive_seed(seed, 0x517E));
  double acc = 0.0;
  long long used = 0;
  for (long long s = 0; s < num_samples; ++s) {
    for (int i = 0; i < params.n; ++i) {
      double y = std::sqrt(sigma2) * rng.normal();
      for (size_t l = 0; l < active.size(); ++l) {
        // one dithered codeword coordinate; crypto lemma makes it uniform
        FieldMessage w = random_message(params, rng);
        Vec lam = to_real(cb, phi(cb, w));
        double dith = beta * (rng.uniform01() - 0.5);
        Vec cl = mod_shaping(params, Vec{lam[i] + dith});
        y += active[l] * amp * cl[0];
      }
      double f = detail::box_gauss_density(widths, sigma2, y);
      if (f < 1e-300) f = 1e-300;
      acc += -std::log2(f);
      ++used;
    }
  }
  const double h_y = acc / static_cast<double>(used);
  const double h_n = 0.5 * std::log2(6.283185307179586 * 2.718281828459045 * sigma2);
  return h_y - h_n;
}

}  // namespace ccf
