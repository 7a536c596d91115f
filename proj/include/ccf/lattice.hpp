#pragma once
// Construction-A nested lattice codes at desk scale, with the
// resolution/vestigial splitting of the codebook.
//
// The shaping lattice is the scaled integer lattice beta*Z^n with the
// half-open fundamental cell (-beta/2, beta/2]^n. Every coding-lattice point
// is beta/p times an integer vector, so lattice points are stored as exact
// integer "units" (coordinates = beta * units / p) and all of the algebraic
// identities are checked in integer arithmetic; doubles only appear where a
// noisy channel output has to be quantized.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccf/linalg.hpp"
#include "ccf/rational.hpp"
#include "ccf/rng.hpp"

namespace ccf {

inline bool is_prime_small(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

struct CodebookParams {
  int n = 2;       // lattice dimension
  int k = 1;       // message length over F_p
  int k_r = 0;     // leading symbols carried by the resolution sublattice
  long long p = 2; // field size, prime
  Rational beta_sq = Rational(1);  // squared shaping scale; 12 gives unit second moment
  std::uint64_t seed = 1;

  double beta() const { return std::sqrt(to_double(beta_sq)); }
  // per-dimension second moment of a dither (or codeword) uniform on the cell
  double second_moment() const { return to_double(beta_sq) / 12.0; }

  void validate() const {
    if (n < 1 || n > 24) throw std::invalid_argument("CodebookParams: n out of range");
    if (k < 1 || k > n) throw std::invalid_argument("CodebookParams: need 1 <= k <= n");
    if (k_r < 0 || k_r > k) throw std::invalid_argument("CodebookParams: need 0 <= k_r <= k");
    if (!is_prime_small(p)) throw std::invalid_argument("CodebookParams: p must be prime");
    if (beta_sq <= Rational(0)) throw std::invalid_argument("CodebookParams: beta_sq must be positive");
    double total = std::pow(static_cast<double>(p), k);
    if (total > 2097152.0) throw std::invalid_argument("CodebookParams: p^k too large for exhaustive codebook");
  }

  double rate_total() const { return k * std::log2(static_cast<double>(p)) / n; }
  double rate_resolution() const { return k_r * std::log2(static_cast<double>(p)) / n; }
  double rate_vestigial() const { return (k - k_r) * std::log2(static_cast<double>(p)) / n; }

  bool operator==(const CodebookParams&) const = default;
};

inline std::string params_to_string(const CodebookParams& c) {
  std::ostringstream os;
  os << "n=" << c.n << ";k=" << c.k << ";k_r=" << c.k_r << ";p=" << c.p
     << ";beta_sq=" << c.beta_sq.numerator() << "/" << c.beta_sq.denominator()
     << ";seed=" << c.seed;
  return os.str();
}

inline CodebookParams params_from_string(const std::string& s) {
  CodebookParams c;
  long long bn = 1, bd = 1;
  std::istringstream is(s);
  std::string tok;
  int seen = 0;
  while (std::getline(is, tok, ';')) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("params_from_string: bad token " + tok);
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "n") c.n = std::stoi(val);
    else if (key == "k") c.k = std::stoi(val);
    else if (key == "k_r") c.k_r = std::stoi(val);
    else if (key == "p") c.p = std::stoll(val);
    else if (key == "beta_sq") {
      auto slash = val.find('/');
      if (slash == std::string::npos) throw std::invalid_argument("params_from_string: beta_sq needs num/den");
      bn = std::stoll(val.substr(0, slash));
      bd = std::stoll(val.substr(slash + 1));
    } else if (key == "seed") c.seed = std::stoull(val);
    else throw std::invalid_argument("params_from_string: unknown key " + key);
    ++seen;
  }
  if (seen != 6) throw std::invalid_argument("params_from_string: expected 6 fields");
  c.beta_sq = Rational(bn, bd);
  c.validate();
  return c;
}

// message over F_p, entries in [0, p)
using FieldMessage = std::vector<long long>;

struct LatticePoint {
  std::vector<long long> units;  // coordinates are beta * units / p
  bool operator==(const LatticePoint&) const = default;
};

enum class Sublattice { coding, resolution, vestigial };

namespace detail {

inline long long mod_p(long long v, long long p) {
  long long m = v % p;
  return m < 0 ? m + p : m;
}

// lift a residue in [0, p) into the centered range (-p/2, p/2]
inline long long centered(long long c, long long p) { return (2 * c > p) ? c - p : c; }

inline long long pow_mod(long long b, long long e, long long p) {
  long long r = 1;
  b = mod_p(b, p);
  while (e > 0) {
    if (e & 1) r = mod_p(r * b, p);
    b = mod_p(b * b, p);
    e >>= 1;
  }
  return r;
}

inline long long inv_mod(long long a, long long p) {
  a = mod_p(a, p);
  if (a == 0) throw std::domain_error("inv_mod: zero");
  return pow_mod(a, p - 2, p);
}

inline int rank_mod_p(IntMat F, long long p) {
  int rank = 0;
  for (int c = 0; c < F.cols && rank < F.rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < F.rows; ++r)
      if (mod_p(F(r, c), p) != 0) { pivot = r; break; }
    if (pivot < 0) continue;
    for (int cc = 0; cc < F.cols; ++cc) std::swap(F(pivot, cc), F(rank, cc));
    long long inv = inv_mod(F(rank, c), p);
    for (int r = rank + 1; r < F.rows; ++r) {
      long long f = mod_p(F(r, c) * inv, p);
      for (int cc = 0; cc < F.cols; ++cc) F(r, cc) = mod_p(F(r, cc) - f * F(rank, cc), p);
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

struct Codebook {
  CodebookParams params;
  IntMat F;                    // n x k generator over F_p, entries in [0, p)
  std::uint64_t seed_used = 0; // seed that produced the full-rank F

  // mod-p solver for phi_inverse: E*F row-reduced, pivots recorded
  IntMat solve_e;              // n x n row-op matrix
  IntMat solve_u;              // n x k reduced generator
  std::vector<int> pivot_col;  // pivot column of row i, for i < k

  // enumerated codeword representatives (message order is mixed-radix with
  // the first symbol fastest); real coords cached for the quantizer
  std::vector<LatticePoint> reps_full, reps_res, reps_vest;
  std::vector<Vec> reps_full_real, reps_res_real, reps_vest_real;

  const std::vector<LatticePoint>& reps(Sublattice s) const {
    switch (s) {
      case Sublattice::coding: return reps_full;
      case Sublattice::resolution: return reps_res;
      default: return reps_vest;
    }
  }
  const std::vector<Vec>& reps_real(Sublattice s) const {
    switch (s) {
      case Sublattice::coding: return reps_full_real;
      case Sublattice::resolution: return reps_res_real;
      default: return reps_vest_real;
    }
  }
};

inline Vec to_real(const Codebook& cb, const LatticePoint& x) {
  const double scale = cb.params.beta() / static_cast<double>(cb.params.p);
  Vec v(x.units.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = scale * static_cast<double>(x.units[i]);
  return v;
}

// [G p^-1 F w] mod shaping, in exact units
inline LatticePoint phi(const Codebook& cb, const FieldMessage& w) {
  const auto& prm = cb.params;
  if (static_cast<int>(w.size()) != prm.k) throw std::invalid_argument("phi: message length != k");
  LatticePoint out;
  out.units.resize(prm.n);
  for (int i = 0; i < prm.n; ++i) {
    long long acc = 0;
    for (int j = 0; j < prm.k; ++j) {
      if (w[j] < 0 || w[j] >= prm.p) throw std::invalid_argument("phi: message symbol out of range");
      acc += cb.F(i, j) * w[j];
    }
    out.units[i] = detail::centered(detail::mod_p(acc, prm.p), prm.p);
  }
  return out;
}

// resolution part: first k_r message symbols through the first k_r columns
inline LatticePoint phi_r(const Codebook& cb, const FieldMessage& w) {
  const auto& prm = cb.params;
  if (static_cast<int>(w.size()) != prm.k) throw std::invalid_argument("phi_r: message length != k");
  LatticePoint out;
  out.units.resize(prm.n);
  for (int i = 0; i < prm.n; ++i) {
    long long acc = 0;
    for (int j = 0; j < prm.k_r; ++j) acc += cb.F(i, j) * w[j];
    out.units[i] = detail::centered(detail::mod_p(acc, prm.p), prm.p);
  }
  return out;
}

inline LatticePoint phi_v(const Codebook& cb, const FieldMessage& w) {
  const auto& prm = cb.params;
  if (static_cast<int>(w.size()) != prm.k) throw std::invalid_argument("phi_v: message length != k");
  LatticePoint out;
  out.units.resize(prm.n);
  for (int i = 0; i < prm.n; ++i) {
    long long acc = 0;
    for (int j = prm.k_r; j < prm.k; ++j) acc += cb.F(i, j) * w[j];
    out.units[i] = detail::centered(detail::mod_p(acc, prm.p), prm.p);
  }
  return out;
}

inline LatticePoint point_add(const LatticePoint& a, const LatticePoint& b) {
  if (a.units.size() != b.units.size()) throw std::invalid_argument("point_add: size mismatch");
  LatticePoint c;
  c.units.resize(a.units.size());
  for (size_t i = 0; i < a.units.size(); ++i) c.units[i] = a.units[i] + b.units[i];
  return c;
}

// reduce a lattice point modulo the shaping lattice (exact)
inline LatticePoint reduce_mod_shaping(const Codebook& cb, const LatticePoint& x) {
  LatticePoint out;
  out.units.resize(x.units.size());
  for (size_t i = 0; i < x.units.size(); ++i)
    out.units[i] = detail::centered(detail::mod_p(x.units[i], cb.params.p), cb.params.p);
  return out;
}

// mod shaping for real vectors: result in (-beta/2, beta/2]^n
inline Vec mod_shaping(const CodebookParams& prm, const Vec& x) {
  const double beta = prm.beta();
  Vec out(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    out[i] = x[i] - beta * std::ceil(x[i] / beta - 0.5);
  return out;
}

// exact rational version; requires beta itself to be rational
inline std::vector<Rational> mod_shaping(const CodebookParams& prm, const std::vector<Rational>& x) {
  Rational beta = sqrt_exact(prm.beta_sq);
  std::vector<Rational> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = mod_centered(x[i], beta);
  return out;
}

namespace detail {

inline void enumerate_reps(const Codebook& cb, Sublattice which, std::vector<LatticePoint>& pts, std::vector<Vec>& reals) {
  const auto& prm = cb.params;
  int lo = 0, hi = prm.k;  // active message positions
  if (which == Sublattice::resolution) hi = prm.k_r;
  if (which == Sublattice::vestigial) lo = prm.k_r;
  long long count = 1;
  for (int j = lo; j < hi; ++j) count *= prm.p;
  pts.clear();
  reals.clear();
  pts.reserve(count);
  reals.reserve(count);
  FieldMessage w(prm.k, 0);
  for (long long idx = 0; idx < count; ++idx) {
    long long rem = idx;
    for (int j = lo; j < hi; ++j) {
      w[j] = rem % prm.p;
      rem /= prm.p;
    }
    LatticePoint pt = phi(cb, w);
    reals.push_back(to_real(cb, pt));
    pts.push_back(std::move(pt));
  }
}

}  // namespace detail

// Draws F with entries uniform over F_p; a rank-deficient draw is discarded
// and the next seed tried, so the codebook is a deterministic function of
// (params, seed).
inline Codebook build_codebook(const CodebookParams& params) {
  params.validate();
  Codebook cb;
  cb.params = params;
  std::uint64_t seed = params.seed;
  for (;;) {
    Rng rng(derive_seed(seed, 0xF00DULL));
    IntMat F(params.n, params.k);
    for (int i = 0; i < params.n; ++i)
      for (int j = 0; j < params.k; ++j) F(i, j) = static_cast<long long>(rng.below(static_cast<std::uint64_t>(params.p)));
    if (detail::rank_mod_p(F, params.p) == params.k) {
      cb.F = F;
      cb.seed_used = seed;
      break;
    }
    ++seed;
  }

  // Gauss-Jordan over F_p on [F | I] so phi_inverse can solve F w = c
  const int n = params.n, k = params.k;
  const long long p = params.p;
  IntMat U = cb.F, E(n, n);
  for (int i = 0; i < n; ++i) E(i, i) = 1;
  int row = 0;
  cb.pivot_col.clear();
  for (int c = 0; c < k && row < n; ++c) {
    int pivot = -1;
    for (int r = row; r < n; ++r)
      if (detail::mod_p(U(r, c), p) != 0) { pivot = r; break; }
    if (pivot < 0) continue;  // cannot happen for full column rank
    for (int cc = 0; cc < k; ++cc) std::swap(U(pivot, cc), U(row, cc));
    for (int cc = 0; cc < n; ++cc) std::swap(E(pivot, cc), E(row, cc));
    long long inv = detail::inv_mod(U(row, c), p);
    for (int cc = 0; cc < k; ++cc) U(row, cc) = detail::mod_p(U(row, cc) * inv, p);
    for (int cc = 0; cc < n; ++cc) E(row, cc) = detail::mod_p(E(row, cc) * inv, p);
    for (int r = 0; r < n; ++r) {
      if (r == row) continue;
      long long f = detail::mod_p(U(r, c), p);
      if (f == 0) continue;
      for (int cc = 0; cc < k; ++cc) U(r, cc) = detail::mod_p(U(r, cc) - f * U(row, cc), p);
      for (int cc = 0; cc < n; ++cc) E(r, cc) = detail::mod_p(E(r, cc) - f * E(row, cc), p);
    }
    cb.pivot_col.push_back(c);
    ++row;
  }
  cb.solve_e = E;
  cb.solve_u = U;

  detail::enumerate_reps(cb, Sublattice::coding, cb.reps_full, cb.reps_full_real);
  detail::enumerate_reps(cb, Sublattice::resolution, cb.reps_res, cb.reps_res_real);
  detail::enumerate_reps(cb, Sublattice::vestigial, cb.reps_vest, cb.reps_vest_real);
  return cb;
}

// message recovery: phi is injective on F_p^k, so any point of the coding
// lattice reduces to a unique message
inline FieldMessage phi_inverse(const Codebook& cb, const LatticePoint& x) {
  const auto& prm = cb.params;
  if (static_cast<int>(x.units.size()) != prm.n) throw std::invalid_argument("phi_inverse: wrong dimension");
  const long long p = prm.p;
  std::vector<long long> c(prm.n);
  for (int i = 0; i < prm.n; ++i) c[i] = detail::mod_p(x.units[i], p);
  // d = E c; rows up to k hold the reduced system, the rest must vanish
  std::vector<long long> d(prm.n, 0);
  for (int i = 0; i < prm.n; ++i) {
    long long acc = 0;
    for (int j = 0; j < prm.n; ++j) acc += cb.solve_e(i, j) * c[j];
    d[i] = detail::mod_p(acc, p);
  }
  FieldMessage w(prm.k, 0);
  for (int i = 0; i < prm.k; ++i) w[cb.pivot_col[i]] = d[i];
  for (int i = prm.k; i < prm.n; ++i)
    if (d[i] != 0) throw std::invalid_argument("phi_inverse: point not on the coding lattice");
  // verify (guards against callers passing an unreduced representative)
  LatticePoint check = phi(cb, w);
  LatticePoint red = reduce_mod_shaping(cb, x);
  if (!(check == red)) throw std::invalid_argument("phi_inverse: inconsistent point");
  return w;
}

// nearest point of the chosen sublattice (codeword representatives plus all
// shaping translates; the translate per representative has a per-coordinate
// closed form since the shaping lattice is a scaled cubic lattice).
// Equidistant candidates resolve to the lexicographically smallest
// coordinate vector, consistent with the half-open cell convention.
inline LatticePoint quantize_sublattice(const Codebook& cb, Sublattice which, const Vec& y) {
  const auto& prm = cb.params;
  if (static_cast<int>(y.size()) != prm.n) throw std::invalid_argument("quantize_sublattice: wrong dimension");
  const double beta = prm.beta();
  const auto& reps = cb.reps(which);
  const auto& reals = cb.reps_real(which);

  LatticePoint best;
  double best_d2 = std::numeric_limits<double>::infinity();
  std::vector<long long> cand(prm.n);
  for (size_t r = 0; r < reps.size(); ++r) {
    double d2 = 0.0;
    for (int i = 0; i < prm.n; ++i) {
      double t = (y[i] - reals[r][i]) / beta;
      // nearest integer, half-way ties toward the smaller value
      long long z = static_cast<long long>(std::ceil(t - 0.5));
      cand[i] = reps[r].units[i] + prm.p * z;
      double diff = y[i] - (reals[r][i] + beta * static_cast<double>(z));
      d2 += diff * diff;
    }
    if (d2 < best_d2 || (d2 == best_d2 && std::lexicographical_compare(cand.begin(), cand.end(), best.units.begin(), best.units.end()))) {
      best_d2 = d2;
      best.units = cand;
    }
  }
  return best;
}

// finite-field linear combination of messages
inline FieldMessage field_combine(long long p, const std::vector<FieldMessage>& msgs, const std::vector<long long>& coeffs) {
  if (msgs.size() != coeffs.size()) throw std::invalid_argument("field_combine: size mismatch");
  if (msgs.empty()) throw std::invalid_argument("field_combine: no messages");
  size_t k = msgs[0].size();
  FieldMessage out(k, 0);
  for (size_t l = 0; l < msgs.size(); ++l) {
    if (msgs[l].size() != k) throw std::invalid_argument("field_combine: ragged messages");
    long long a = detail::mod_p(coeffs[l], p);
    for (size_t j = 0; j < k; ++j) out[j] = detail::mod_p(out[j] + a * msgs[l][j], p);
  }
  return out;
}

// dither uniform over the shaping cell (-beta/2, beta/2]^n
inline Vec dither_draw(const CodebookParams& prm, std::uint64_t seed, std::uint64_t stream) {
  Rng rng(derive_seed(seed, stream));
  const double beta = prm.beta();
  Vec t(prm.n);
  for (int i = 0; i < prm.n; ++i) t[i] = beta * (rng.uniform01() - 0.5);
  return t;
}

inline FieldMessage random_message(const CodebookParams& prm, Rng& rng) {
  FieldMessage w(prm.k);
  for (int j = 0; j < prm.k; ++j) w[j] = static_cast<long long>(rng.below(static_cast<std::uint64_t>(prm.p)));
  return w;
}

}  // namespace ccf
