#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ccf/channel.hpp"

using namespace ccf;

TEST_CASE("rayleigh draws are positive, reproducible, unit mean square", "[channel]") {
  ChannelPair a = draw_rayleigh(3, 2, 42);
  ChannelPair b = draw_rayleigh(3, 2, 42);
  ChannelPair c = draw_rayleigh(3, 2, 43);
  REQUIRE(a.H.rows == 3);
  REQUIRE(a.H.cols == 2);
  REQUIRE(a.G.rows == 3);
  REQUIRE(a.G.cols == 3);
  bool same = true, differ = false;
  for (int l = 0; l < 3; ++l)
    for (int m = 0; m < 2; ++m) {
      REQUIRE(a.H(l, m) > 0.0);
      same = same && a.H(l, m) == b.H(l, m);
      differ = differ || a.H(l, m) != c.H(l, m);
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) {
        REQUIRE(a.G(i, j) == 0.0);
        continue;
      }
      REQUIRE(a.G(i, j) > 0.0);
      same = same && a.G(i, j) == b.G(i, j);
    }
  REQUIRE(same);
  REQUIRE(differ);

  double sum_sq = 0.0;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) sum_sq += std::pow(draw_rayleigh(1, 1, 100 + t).H(0, 0), 2);
  REQUIRE(sum_sq / trials == Catch::Approx(1.0).margin(0.08));

  REQUIRE_THROWS_AS(draw_rayleigh(0, 1, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(draw_rayleigh(2, 0, 1), std::invalid_argument);
}

TEST_CASE("arc geometry gains follow the chord path loss", "[channel]") {
  GeometryScenario sc;
  sc.num_transmitters = 2;
  sc.circle_radius = 1.0;
  sc.pathloss_exponent = 4.0;

  SECTION("antipodal pair: chord 2, amplitude 2^-2") {
    ChannelPair ch = place_at_angles(sc, Vec{0.0, M_PI});
    REQUIRE(ch.H(0, 0) == Catch::Approx(1.0));
    REQUIRE(ch.H(1, 0) == Catch::Approx(1.0));
    REQUIRE(ch.G(0, 1) == Catch::Approx(0.25).epsilon(1e-12));
    REQUIRE(ch.G(1, 0) == ch.G(0, 1));
  }

  SECTION("coincident transmitters hit the gain clamp") {
    ChannelPair ch = place_at_angles(sc, Vec{0.7, 0.7});
    REQUIRE(ch.G(0, 1) == sc.gain_clamp);
    REQUIRE(ch.G(1, 0) == sc.gain_clamp);
  }

  SECTION("larger radius weakens the direct link") {
    sc.circle_radius = 2.0;
    ChannelPair ch = place_at_angles(sc, Vec{0.0, 1.0});
    REQUIRE(ch.H(0, 0) == Catch::Approx(std::pow(2.0, -2.0)).epsilon(1e-12));
  }

  REQUIRE_THROWS_AS(place_at_angles(sc, Vec{0.0}), std::invalid_argument);
  sc.arclength = -1.0;
  REQUIRE_THROWS_AS(place_at_angles(sc, Vec{0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("random arc placement is deterministic in the seed", "[channel]") {
  GeometryScenario sc;
  sc.num_transmitters = 3;
  sc.arclength = 2.0;
  ChannelPair a = place_on_arc(sc, 9);
  ChannelPair b = place_on_arc(sc, 9);
  ChannelPair c = place_on_arc(sc, 10);
  bool same = true, differ = false;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      same = same && a.G(i, j) == b.G(i, j);
      differ = differ || a.G(i, j) != c.G(i, j);
    }
  REQUIRE(same);
  REQUIRE(differ);

  SECTION("zero arclength collapses every pair onto the clamp") {
    sc.arclength = 0.0;
    ChannelPair ch = place_on_arc(sc, 123);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) REQUIRE(ch.G(i, j) == sc.gain_clamp);
  }
}

TEST_CASE("sweep presets pin the worked-example channels", "[channel]") {
  ChannelPair e1 = preset_scenario("example1", 3.0);
  REQUIRE(e1.H.rows == 2);
  REQUIRE(e1.H.cols == 1);
  REQUIRE(e1.H(0, 0) == 1.0);
  REQUIRE(e1.G(0, 1) == 3.0);
  REQUIRE(e1.G(1, 0) == 3.0);

  ChannelPair e3 = preset_scenario("example3", 0.5);
  REQUIRE(e3.H(1, 0) == 0.5);
  REQUIRE(e3.G(0, 1) == 1.0);

  ChannelPair e4 = preset_scenario("example4", 0.25);
  REQUIRE(e4.H.cols == 2);
  REQUIRE(e4.H(1, 0) == 0.25);
  REQUIRE(e4.H(1, 1) == 1.0);

  REQUIRE_THROWS_AS(preset_scenario("nope", 1.0), std::invalid_argument);
}

TEST_CASE("channel pair validation rejects malformed gain matrices", "[channel]") {
  ChannelPair ch;
  ch.H = Mat(2, 1, 1.0);
  ch.G = Mat(3, 3);
  REQUIRE_THROWS_AS(ch.validate(), std::invalid_argument);
  ch.G = Mat(2, 2);
  ch.G(0, 0) = 0.1;
  REQUIRE_THROWS_AS(ch.validate(), std::invalid_argument);
  ch.G(0, 0) = 0.0;
  REQUIRE_NOTHROW(ch.validate());
}
