#pragma once
// End-to-end block-Markov simulation of the cooperative compute-and-forward
// link. One round carries num_blocks fresh message blocks through T+1 slots:
// cooperating transmitters decode each other's fresh signals, re-encode the
// resolution part of each receiver's integer combination, and beamform it in
// the next slot; each receiver first decodes the resolution point from the
// following slot, cancels its own beam, then closes the vestigial part with
// a dithered lattice quantization step.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ccf/channel.hpp"
#include "ccf/lattice.hpp"
#include "ccf/linalg.hpp"
#include "ccf/rates.hpp"
#include "ccf/rng.hpp"

namespace ccf {

// MMSE receiver scaling for a signal sqrt(P)*g_eff*c in interference plus
// noise, assuming unit codeword power; used for both gamma and alpha
inline double mmse_coefficients(double g_eff, double P, double interference_plus_noise) {
  const double den = P * g_eff * g_eff + interference_plus_noise;
  if (den <= 0.0) return 0.0;
  return std::sqrt(P) * g_eff / den;
}

namespace detail {

// general form: signal S*c with Var(c) = var_c
inline double mmse_gamma(double S, double var_c, double ipn) {
  const double den = S * S * var_c + ipn;
  if (den <= 0.0) return 0.0;
  return S * var_c / den;
}

}  // namespace detail

// Joint minimum-distance decoding of the peers' fresh messages at a
// cooperating transmitter (the desk-scale stand-in for typical-sequence
// decoding; exhaustive over the product codebook, optimal for Gaussian
// noise). known_signals are subtracted from the received block first;
// gains[i] scales peer i's codeword, whose dither is dithers[i].
inline std::vector<FieldMessage> transmitter_decode(const Codebook& cb, Vec received,
                                                    const std::vector<Vec>& known_signals, double P,
                                                    const std::vector<double>& gains,
                                                    const std::vector<Vec>& dithers,
                                                    double* min_distance = nullptr) {
  const int n = cb.params.n;
  if (static_cast<int>(received.size()) != n) throw std::invalid_argument("transmitter_decode: wrong dimension");
  if (gains.size() != dithers.size()) throw std::invalid_argument("transmitter_decode: gains/dithers mismatch");
  for (const Vec& s : known_signals)
    for (int i = 0; i < n; ++i) received[i] -= s[i];

  const size_t peers = gains.size();
  const long long reps = static_cast<long long>(cb.reps_full.size());
  if (std::pow(static_cast<double>(reps), static_cast<double>(peers)) > 2e6)
    throw std::invalid_argument("transmitter_decode: product codebook too large");
  const double sqrtP = std::sqrt(P);

  std::vector<std::vector<Vec>> contrib(peers, std::vector<Vec>(reps, Vec(n)));
  for (size_t pi = 0; pi < peers; ++pi)
    for (long long r = 0; r < reps; ++r) {
      Vec c = cb.reps_full_real[r];
      for (int i = 0; i < n; ++i) c[i] += dithers[pi][i];
      c = mod_shaping(cb.params, c);
      for (int i = 0; i < n; ++i) contrib[pi][r][i] = sqrtP * gains[pi] * c[i];
    }

  std::vector<long long> idx(peers, 0), best_idx(peers, 0);
  double best_d2 = std::numeric_limits<double>::infinity();
  for (;;) {
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double diff = received[i];
      for (size_t pi = 0; pi < peers; ++pi) diff -= contrib[pi][idx[pi]][i];
      d2 += diff * diff;
    }
    if (d2 < best_d2) {
      best_d2 = d2;
      best_idx = idx;
    }
    size_t pi = 0;
    while (pi < peers && ++idx[pi] == reps) idx[pi++] = 0;
    if (pi == peers || peers == 0) break;
  }
  if (min_distance) *min_distance = std::sqrt(best_d2);

  // representative order is the message mixed-radix order (first symbol fastest)
  std::vector<FieldMessage> out(peers);
  for (size_t pi = 0; pi < peers; ++pi) {
    FieldMessage w(cb.params.k);
    long long rem = best_idx[pi];
    for (int j = 0; j < cb.params.k; ++j) {
      w[j] = rem % cb.params.p;
      rem /= cb.params.p;
    }
    out[pi] = std::move(w);
  }
  return out;
}

struct RoundConfig {
  CodebookParams code;
  Mat H, G;                // L x M direct gains, L x L cross gains
  double P = 10.0;
  double noise_var = 1.0;
  SteeringConfig steering;
  IntMat A;                // L x M integer coefficients (per-receiver combinations)
  int num_blocks = 3;      // fresh blocks per round (T)
  bool genie = false;      // feed transmitters the true peer messages
  std::uint64_t seed = 1;

  void validate() const {
    code.validate();
    if (H.rows < 1 || H.cols < 1) throw std::invalid_argument("RoundConfig: H is empty");
    if (G.rows != H.rows || G.cols != H.rows) throw std::invalid_argument("RoundConfig: G must be L x L");
    steering.validate(H.rows, H.cols);
    validate_coefficients(A, H.rows, H.cols);
    if (P <= 0.0) throw std::invalid_argument("RoundConfig: P must be positive");
    if (noise_var < 0.0) throw std::invalid_argument("RoundConfig: negative noise variance");
    if (num_blocks < 1 || num_blocks > 64) throw std::invalid_argument("RoundConfig: num_blocks in [1,64]");
    if (!genie && !steering.B.empty()) {
      double combos = std::pow(static_cast<double>(code.p), static_cast<double>(code.k) * (H.rows - 1));
      if (combos > 2e6) throw std::invalid_argument("RoundConfig: joint decode search too large");
    }
  }
};

struct BlockReport {
  int block = 0;            // 1-based fresh-block index
  double tx_dist = 0.0;     // worst decoding distances, for diagnostics
  double res_dist = 0.0;
  double vest_dist = 0.0;
};

struct RoundOutcome {
  // per-block flags, aggregated over cooperators / receivers
  std::vector<char> transmitter_decode_ok;
  std::vector<char> resolution_ok;
  std::vector<char> vestigial_ok;
  std::vector<char> function_recovered;
  // best-effort reconstruction per receiver per block
  std::vector<std::vector<FieldMessage>> recovered;
  std::vector<BlockReport> blocks;
  int recovered_blocks = 0;
  bool all_recovered = false;
};

// one simulated round with explicit fresh messages (messages[l][t-1]);
// dithers and noise are deterministic in rng_seed
inline RoundOutcome run_round(const RoundConfig& cfg, const std::vector<std::vector<FieldMessage>>& messages,
                              std::uint64_t rng_seed) {
  cfg.validate();
  const int L = cfg.H.rows, M = cfg.H.cols, T = cfg.num_blocks, n = cfg.code.n;
  if (static_cast<int>(messages.size()) != L) throw std::invalid_argument("run_round: need L message lists");
  for (const auto& ml : messages)
    if (static_cast<int>(ml.size()) != T) throw std::invalid_argument("run_round: need T messages per transmitter");

  const double sqrtP = std::sqrt(cfg.P);
  const double sig_c2 = cfg.code.second_moment();
  const double sd = std::sqrt(cfg.noise_var);
  const Codebook cb = build_codebook(cfg.code);
  const Mat& V = cfg.steering.V;
  const std::vector<int>& B = cfg.steering.B;

  // ground truth per fresh block t = 1..T (index 0 unused)
  std::vector<std::vector<FieldMessage>> w(L, std::vector<FieldMessage>(T + 1));
  std::vector<std::vector<Vec>> dith_t(L, std::vector<Vec>(T + 1));
  std::vector<std::vector<Vec>> c_fresh(L, std::vector<Vec>(T + 1));
  for (int l = 0; l < L; ++l)
    for (int t = 1; t <= T; ++t) {
      w[l][t] = messages[l][t - 1];
      if (static_cast<int>(w[l][t].size()) != cfg.code.k) throw std::invalid_argument("run_round: message length != k");
      dith_t[l][t] = dither_draw(cfg.code, rng_seed, 0x2000ULL + 64ULL * l + t);
      Vec lam = to_real(cb, phi(cb, w[l][t]));
      for (int i = 0; i < n; ++i) lam[i] += dith_t[l][t][i];
      c_fresh[l][t] = mod_shaping(cfg.code, lam);
    }

  std::vector<std::vector<FieldMessage>> f(M, std::vector<FieldMessage>(T + 1));
  std::vector<std::vector<LatticePoint>> lam_r(M, std::vector<LatticePoint>(T + 1));
  std::vector<std::vector<LatticePoint>> lam_v(M, std::vector<LatticePoint>(T + 1));
  std::vector<std::vector<Vec>> dith_s(M, std::vector<Vec>(T + 1));
  for (int m = 0; m < M; ++m)
    for (int t = 1; t <= T; ++t) {
      std::vector<FieldMessage> all;
      for (int l = 0; l < L; ++l) all.push_back(w[l][t]);
      f[m][t] = field_combine(cfg.code.p, all, cfg.A.col(m));
      lam_r[m][t] = phi_r(cb, f[m][t]);
      lam_v[m][t] = phi_v(cb, f[m][t]);
      dith_s[m][t] = dither_draw(cfg.code, rng_seed, 0x3000ULL + 64ULL * m + t);
    }

  // noise drawn up front in a fixed order so decode outcomes cannot shift
  // later draws; raw normals are scaled at use (common random numbers
  // across noise levels)
  std::vector<std::vector<Vec>> rx_noise(M, std::vector<Vec>(T + 2, Vec(n)));
  for (int m = 0; m < M; ++m) {
    Rng nr(derive_seed(rng_seed, 0x4000ULL + m));
    for (int t = 1; t <= T + 1; ++t)
      for (int i = 0; i < n; ++i) rx_noise[m][t][i] = nr.normal();
  }
  std::vector<std::vector<Vec>> tx_noise(L, std::vector<Vec>(T + 1, Vec(n)));
  for (int l = 0; l < L; ++l) {
    Rng nr(derive_seed(rng_seed, 0x5000ULL + l));
    for (int t = 1; t <= T; ++t)
      for (int i = 0; i < n; ++i) tx_noise[l][t][i] = nr.normal();
  }

  // est[l][lp][t]: transmitter l's view of w[lp][t]; crm_tx[l][m][t]: the
  // resolution codeword l re-encodes from that view
  std::vector<std::vector<std::vector<FieldMessage>>> est(
      L, std::vector<std::vector<FieldMessage>>(L, std::vector<FieldMessage>(T + 1)));
  std::vector<std::vector<std::vector<Vec>>> crm_tx(
      L, std::vector<std::vector<Vec>>(M, std::vector<Vec>(T + 1)));

  RoundOutcome out;
  out.blocks.assign(T, BlockReport{});
  out.transmitter_decode_ok.assign(T, 1);
  out.resolution_ok.assign(T, 1);
  out.vestigial_ok.assign(T, 1);
  out.function_recovered.assign(T, 1);
  out.recovered.assign(M, std::vector<FieldMessage>(T));
  for (int t = 1; t <= T; ++t) out.blocks[t - 1].block = t;

  std::vector<std::vector<Vec>> y(M, std::vector<Vec>(T + 2, Vec(n, 0.0)));

  for (int t = 1; t <= T + 1; ++t) {
    // transmit signals
    std::vector<Vec> x(L, Vec(n, 0.0));
    for (int l = 0; l < L; ++l) {
      if (t <= T)
        for (int i = 0; i < n; ++i) x[l][i] += V(l, 0) * c_fresh[l][t][i];
      if (t >= 2 && cfg.steering.in_B(l))
        for (int m = 0; m < M; ++m)
          for (int i = 0; i < n; ++i) x[l][i] += V(l, m + 1) * crm_tx[l][m][t - 1][i];
      for (int i = 0; i < n; ++i) x[l][i] *= sqrtP;
    }

    for (int m = 0; m < M; ++m)
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int l = 0; l < L; ++l) s += cfg.H(l, m) * x[l][i];
        y[m][t][i] = s + sd * rx_noise[m][t][i];
      }

    if (t > T) break;  // flush slot carries no fresh block

    // cooperating transmitters decode the fresh blocks of all peers
    for (int l : B) {
      if (cfg.genie) {
        for (int lp = 0; lp < L; ++lp) est[l][lp][t] = w[lp][t];
      } else {
        Vec z(n, 0.0);
        for (int i = 0; i < n; ++i) {
          double s = 0.0;
          for (int lp = 0; lp < L; ++lp)
            if (lp != l) s += cfg.G(lp, l) * x[lp][i];
          z[i] = s + sd * tx_noise[l][t][i];
        }
        // cancel peer beams assuming peers re-encoded the same estimates
        std::vector<Vec> known;
        if (t >= 2)
          for (int lp : B) {
            if (lp == l) continue;
            Vec ks(n, 0.0);
            for (int m = 0; m < M; ++m)
              for (int i = 0; i < n; ++i)
                ks[i] += sqrtP * cfg.G(lp, l) * V(lp, m + 1) * crm_tx[l][m][t - 1][i];
            known.push_back(std::move(ks));
          }
        std::vector<int> peers;
        std::vector<double> gains;
        std::vector<Vec> dithers;
        for (int lp = 0; lp < L; ++lp) {
          if (lp == l) continue;
          peers.push_back(lp);
          gains.push_back(cfg.G(lp, l) * V(lp, 0));
          dithers.push_back(dith_t[lp][t]);
        }
        double dist = 0.0;
        std::vector<FieldMessage> decoded = transmitter_decode(cb, z, known, cfg.P, gains, dithers, &dist);
        BlockReport& rep = out.blocks[t - 1];
        rep.tx_dist = std::max(rep.tx_dist, dist);
        for (size_t pi = 0; pi < peers.size(); ++pi) {
          est[l][peers[pi]][t] = decoded[pi];
          if (!(decoded[pi] == w[peers[pi]][t])) out.transmitter_decode_ok[t - 1] = 0;
        }
        est[l][l][t] = w[l][t];
      }
      // re-encode resolution codewords for the next slot
      std::vector<FieldMessage> view;
      for (int lp = 0; lp < L; ++lp) view.push_back(est[l][lp][t]);
      for (int m = 0; m < M; ++m) {
        FieldMessage fh = field_combine(cfg.code.p, view, cfg.A.col(m));
        Vec c = to_real(cb, phi_r(cb, fh));
        for (int i = 0; i < n; ++i) c[i] += dith_s[m][t][i];
        crm_tx[l][m][t] = mod_shaping(cfg.code, c);
      }
    }
  }

  // receiver decoding: resolution of block tau from slot tau+1, then the
  // vestigial part from slot tau with the receiver's own beam cancelled
  for (int m = 0; m < M; ++m) {
    double geff = 0.0;
    for (int l : B) geff += cfg.H(l, m) * V(l, m + 1);
    Vec htilde(L);
    for (int l = 0; l < L; ++l) htilde[l] = cfg.H(l, m) * V(l, 0);
    double other_beams = 0.0;
    for (int mp = 0; mp < M; ++mp) {
      if (mp == m) continue;
      double c = 0.0;
      for (int l : B) c += cfg.H(l, m) * V(l, mp + 1);
      other_beams += c * c;
    }

    Vec chat_prev;  // own decoded resolution codeword of the previous block
    for (int tau = 1; tau <= T; ++tau) {
      BlockReport& rep = out.blocks[tau - 1];

      const bool fresh_next = (tau + 1 <= T);
      double ipn_r = cfg.noise_var + cfg.P * sig_c2 * other_beams;
      if (fresh_next) ipn_r += cfg.P * sig_c2 * norm2(htilde);
      const double gamma = detail::mmse_gamma(sqrtP * geff, sig_c2, ipn_r);
      Vec yq(n);
      for (int i = 0; i < n; ++i) yq[i] = gamma * y[m][tau + 1][i] - dith_s[m][tau][i];
      yq = mod_shaping(cfg.code, yq);
      LatticePoint qr = quantize_sublattice(cb, Sublattice::resolution, yq);
      Vec qr_real = to_real(cb, qr);
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) d2 += (yq[i] - qr_real[i]) * (yq[i] - qr_real[i]);
      rep.res_dist = std::max(rep.res_dist, std::sqrt(d2));
      LatticePoint lam_hat_r = reduce_mod_shaping(cb, qr);
      const bool res_ok_m = (lam_hat_r == lam_r[m][tau]);
      if (!res_ok_m) out.resolution_ok[tau - 1] = 0;

      Vec chat = to_real(cb, lam_hat_r);
      for (int i = 0; i < n; ++i) chat[i] += dith_s[m][tau][i];
      chat = mod_shaping(cfg.code, chat);

      Vec yv = y[m][tau];
      if (tau >= 2)
        for (int i = 0; i < n; ++i) yv[i] -= sqrtP * geff * chat_prev[i];
      double ipn_v = cfg.noise_var;
      if (tau >= 2) ipn_v += cfg.P * sig_c2 * other_beams;
      double ah = 0.0;
      for (int l = 0; l < L; ++l) ah += static_cast<double>(cfg.A(l, m)) * htilde[l];
      const double aden = cfg.P * sig_c2 * norm2(htilde) + ipn_v;
      const double alpha = aden > 0.0 ? sqrtP * ah * sig_c2 / aden : 0.0;
      Vec yd(n);
      Vec lam_hat_r_real = to_real(cb, lam_hat_r);
      for (int i = 0; i < n; ++i) {
        double dsum = 0.0;
        for (int l = 0; l < L; ++l) dsum += static_cast<double>(cfg.A(l, m)) * dith_t[l][tau][i];
        yd[i] = alpha * yv[i] - lam_hat_r_real[i] - dsum;
      }
      yd = mod_shaping(cfg.code, yd);
      LatticePoint qv = quantize_sublattice(cb, Sublattice::vestigial, yd);
      Vec qv_real = to_real(cb, qv);
      d2 = 0.0;
      for (int i = 0; i < n; ++i) d2 += (yd[i] - qv_real[i]) * (yd[i] - qv_real[i]);
      rep.vest_dist = std::max(rep.vest_dist, std::sqrt(d2));
      LatticePoint lam_hat_v = reduce_mod_shaping(cb, qv);
      const bool vest_ok_m = (lam_hat_v == lam_v[m][tau]);
      if (!vest_ok_m) out.vestigial_ok[tau - 1] = 0;

      // best-effort reconstruction (always a valid message)
      FieldMessage fhat = phi_inverse(cb, reduce_mod_shaping(cb, point_add(lam_hat_r, lam_hat_v)));
      out.recovered[m][tau - 1] = fhat;
      if (!res_ok_m || !vest_ok_m || !(fhat == f[m][tau])) out.function_recovered[tau - 1] = 0;

      chat_prev = chat;
    }
  }

  for (int t = 0; t < T; ++t)
    if (out.function_recovered[t]) ++out.recovered_blocks;
  out.all_recovered = (out.recovered_blocks == T);
  return out;
}

// convenience: fresh messages drawn from the config seed
inline RoundOutcome run_round(const RoundConfig& cfg) {
  cfg.validate();
  const int L = cfg.H.rows, T = cfg.num_blocks;
  std::vector<std::vector<FieldMessage>> messages(L, std::vector<FieldMessage>(T));
  for (int l = 0; l < L; ++l)
    for (int t = 0; t < T; ++t) {
      Rng mr(derive_seed(cfg.seed, 0x1000ULL + 64ULL * l + (t + 1)));
      messages[l][t] = random_message(cfg.code, mr);
    }
  return run_round(cfg, messages, cfg.seed);
}

}  // namespace ccf
