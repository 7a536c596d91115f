#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccf/linksim.hpp"
#include "ccf/scenarios.hpp"

using namespace ccf;

namespace {

CodebookParams small_code(int n, int k, int k_r, long long p) {
  CodebookParams c;
  c.n = n;
  c.k = k;
  c.k_r = k_r;
  c.p = p;
  c.beta_sq = Rational(12);
  c.seed = 3;
  return c;
}

RoundConfig two_tx_base(const CodebookParams& code) {
  RoundConfig cfg;
  cfg.code = code;
  cfg.H = Mat(2, 1, 1.0);
  cfg.G = Mat(2, 2, 1.0);
  cfg.G(0, 0) = cfg.G(1, 1) = 0.0;
  cfg.P = 4.0;
  cfg.noise_var = 0.0;
  cfg.A = IntMat(2, 1, 1);
  cfg.steering.V = Mat(2, 2);
  return cfg;
}

}  // namespace

TEST_CASE("MMSE scaling limits", "[linksim]") {
  // vanishing interference: 1/(sqrt(P) g)
  REQUIRE(mmse_coefficients(2.0, 4.0, 0.0) == Catch::Approx(0.25).epsilon(1e-14));
  // balanced point P g^2 = ipn: half that
  REQUIRE(mmse_coefficients(1.0, 4.0, 4.0) == Catch::Approx(0.25).epsilon(1e-14));
  REQUIRE(mmse_coefficients(0.0, 4.0, 1.0) == 0.0);
  REQUIRE(mmse_coefficients(0.0, 4.0, 0.0) == 0.0);  // degenerate denominator
  double prev = kInf;
  for (double ipn : {0.1, 1.0, 10.0, 100.0}) {
    double v = mmse_coefficients(1.5, 10.0, ipn);
    REQUIRE(v < prev);
    prev = v;
  }
}

TEST_CASE("transmitter joint decode is exact without noise", "[linksim]") {
  CodebookParams prm = small_code(2, 1, 0, 3);
  prm.beta_sq = Rational(4);
  Codebook cb = build_codebook(prm);
  const double P = 9.0;

  FieldMessage w1 = {1}, w2 = {2};
  Vec d1 = dither_draw(prm, 11, 1), d2 = dither_draw(prm, 11, 2);
  auto codeword = [&](const FieldMessage& w, const Vec& d) {
    Vec c = to_real(cb, phi(cb, w));
    for (size_t i = 0; i < c.size(); ++i) c[i] += d[i];
    return mod_shaping(prm, c);
  };
  Vec c1 = codeword(w1, d1), c2 = codeword(w2, d2);
  const double g1 = 1.0, g2 = 0.5;
  Vec rx(2);
  for (int i = 0; i < 2; ++i) rx[i] = std::sqrt(P) * (g1 * c1[i] + g2 * c2[i]);

  double dist = -1.0;
  auto decoded = transmitter_decode(cb, rx, {}, P, {g1, g2}, {d1, d2}, &dist);
  REQUIRE(decoded.size() == 2);
  REQUIRE(decoded[0] == w1);
  REQUIRE(decoded[1] == w2);
  REQUIRE(dist < 1e-9);

  SECTION("known signals are subtracted before decoding") {
    Vec kv = {0.3, -0.2};
    Vec rx2 = rx;
    for (int i = 0; i < 2; ++i) rx2[i] += kv[i];
    auto again = transmitter_decode(cb, rx2, {kv}, P, {g1, g2}, {d1, d2});
    REQUIRE(again[0] == w1);
    REQUIRE(again[1] == w2);
  }

  SECTION("argument validation") {
    REQUIRE_THROWS_AS(transmitter_decode(cb, Vec{1.0}, {}, P, {g1}, {d1}), std::invalid_argument);
    REQUIRE_THROWS_AS(transmitter_decode(cb, rx, {}, P, {g1, g2}, {d1}), std::invalid_argument);
    std::vector<double> many_gains(14, 1.0);
    std::vector<Vec> many_dithers(14, d1);
    REQUIRE_THROWS_AS(transmitter_decode(cb, rx, {}, P, many_gains, many_dithers),
                      std::invalid_argument);
  }
}

TEST_CASE("round config validation", "[linksim]") {
  RoundConfig cfg = two_tx_base(small_code(4, 2, 1, 5));
  cfg.steering.V(0, 0) = cfg.steering.V(1, 0) = 1.0;
  REQUIRE_NOTHROW(cfg.validate());

  SECTION("shape errors") {
    RoundConfig bad = cfg;
    bad.G = Mat(3, 3);
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.steering.V = Mat(2, 3);
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.A = IntMat(3, 1, 1);
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
  }

  SECTION("scalar errors") {
    RoundConfig bad = cfg;
    bad.P = 0.0;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.noise_var = -1.0;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.num_blocks = 0;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.num_blocks = 65;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
  }

  SECTION("joint decode size guard respects the genie") {
    RoundConfig big;
    big.code = small_code(8, 4, 1, 7);
    big.H = Mat(3, 1, 1.0);
    big.G = Mat(3, 3, 1.0);
    for (int l = 0; l < 3; ++l) big.G(l, l) = 0.0;
    big.A = IntMat(3, 1, 1);
    big.steering.B = {0, 1, 2};
    big.steering.V = Mat(3, 2, 0.5);
    REQUIRE_THROWS_AS(big.validate(), std::invalid_argument);  // 7^8 joint hypotheses
    big.genie = true;
    REQUIRE_NOTHROW(big.validate());
  }
}

TEST_CASE("noiseless superposition round is recovered exactly", "[linksim]") {
  // no cooperation, no resolution sublattice: the receiver closes the whole
  // combination through the vestigial step
  RoundConfig cfg = two_tx_base(small_code(4, 2, 0, 5));
  cfg.steering.V(0, 0) = cfg.steering.V(1, 0) = 1.0;
  cfg.num_blocks = 2;
  cfg.seed = 21;
  RoundOutcome out = run_round(cfg);
  REQUIRE(out.all_recovered);
  REQUIRE(out.recovered_blocks == 2);
  for (int t = 0; t < 2; ++t) {
    REQUIRE(out.transmitter_decode_ok[t] == 1);
    REQUIRE(out.resolution_ok[t] == 1);
    REQUIRE(out.vestigial_ok[t] == 1);
    REQUIRE(out.blocks[t].vest_dist < 1e-9);
  }
}

TEST_CASE("noiseless genie round with a full resolution lattice", "[linksim]") {
  // everything rides the beamformed resolution codeword; the vestigial
  // sublattice is trivial
  RoundConfig cfg = two_tx_base(small_code(4, 2, 2, 5));
  cfg.steering.B = {0, 1};
  cfg.steering.V(0, 1) = cfg.steering.V(1, 1) = 1.0;
  cfg.genie = true;
  cfg.num_blocks = 3;
  cfg.seed = 22;
  RoundOutcome out = run_round(cfg);
  REQUIRE(out.all_recovered);
  for (int t = 0; t < 3; ++t) {
    REQUIRE(out.resolution_ok[t] == 1);
    REQUIRE(out.blocks[t].res_dist < 1e-9);
  }
}

TEST_CASE("noiseless cooperative round with live transmitter decoding", "[linksim]") {
  RoundConfig cfg = two_tx_base(small_code(4, 2, 2, 5));
  cfg.steering.B = {0, 1};
  cfg.steering.V(0, 0) = cfg.steering.V(1, 0) = 0.125;
  cfg.steering.V(0, 1) = cfg.steering.V(1, 1) = std::sqrt(1.0 - 0.125 * 0.125);
  cfg.num_blocks = 1;
  cfg.seed = 23;
  RoundOutcome out = run_round(cfg);
  REQUIRE(out.all_recovered);
  REQUIRE(out.transmitter_decode_ok[0] == 1);
  REQUIRE(out.blocks[0].tx_dist < 1e-9);
  REQUIRE(out.resolution_ok[0] == 1);
  REQUIRE(out.vestigial_ok[0] == 1);
}

TEST_CASE("reference operating point recovers every block", "[linksim]") {
  for (int s = 0; s < 20; ++s) {
    RoundConfig cfg = default_linksim_config(30.0, 1.0);
    cfg.seed = derive_seed(808, s);
    REQUIRE(run_round(cfg).all_recovered);
  }
}

TEST_CASE("recovery degrades with receiver noise under common randoms", "[linksim]") {
  int lo = 0, hi = 0;
  for (int s = 0; s < 20; ++s) {
    RoundConfig cfg = default_linksim_config(30.0, 0.25);
    cfg.seed = derive_seed(909, s);
    lo += run_round(cfg).recovered_blocks;
    cfg.noise_var = 16.0;
    hi += run_round(cfg).recovered_blocks;
  }
  REQUIRE(lo == 60);  // all blocks at the quiet end
  REQUIRE(hi < lo);
}

TEST_CASE("genie side information never hurts", "[linksim]") {
  // when live decoding succeeds the rounds are identical...
  for (int s = 0; s < 5; ++s) {
    RoundConfig cfg = default_linksim_config(30.0, 1.0);
    cfg.seed = derive_seed(1010, s);
    RoundOutcome live = run_round(cfg);
    cfg.genie = true;
    RoundOutcome genie = run_round(cfg);
    bool tx_all_ok = true;
    for (char ok : live.transmitter_decode_ok) tx_all_ok = tx_all_ok && ok;
    REQUIRE(tx_all_ok);
    REQUIRE(live.function_recovered == genie.function_recovered);
  }
  // ...and under heavy noise the genie wins in aggregate
  int live_total = 0, genie_total = 0;
  for (int s = 0; s < 12; ++s) {
    RoundConfig cfg = default_linksim_config(30.0, 16.0);
    cfg.seed = derive_seed(1111, s);
    live_total += run_round(cfg).recovered_blocks;
    cfg.genie = true;
    genie_total += run_round(cfg).recovered_blocks;
  }
  REQUIRE(genie_total + 2 >= live_total);
}

TEST_CASE("rounds are deterministic in the seed", "[linksim]") {
  RoundConfig cfg = default_linksim_config(30.0, 4.0);
  cfg.seed = 4321;
  RoundOutcome a = run_round(cfg);
  RoundOutcome b = run_round(cfg);
  REQUIRE(a.function_recovered == b.function_recovered);
  REQUIRE(a.recovered == b.recovered);
  for (size_t t = 0; t < a.blocks.size(); ++t) {
    REQUIRE(a.blocks[t].tx_dist == b.blocks[t].tx_dist);
    REQUIRE(a.blocks[t].res_dist == b.blocks[t].res_dist);
    REQUIRE(a.blocks[t].vest_dist == b.blocks[t].vest_dist);
  }
  cfg.seed = 4322;
  RoundOutcome c = run_round(cfg);
  bool any_diff = false;
  for (size_t t = 0; t < a.blocks.size(); ++t) any_diff = any_diff || a.blocks[t].res_dist != c.blocks[t].res_dist;
  REQUIRE(any_diff);
}
