#pragma once
// Channel models: i.i.d. Rayleigh draws (unit mean-square amplitude), the
// arc geometry with path-loss gains, and the fixed sweep presets used by the
// worked examples.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ccf/linalg.hpp"
#include "ccf/rng.hpp"

namespace ccf {

struct ChannelPair {
  Mat H;  // L x M forward gains, H(l,m) = transmitter l -> receiver m
  Mat G;  // L x L cross gains, G(i,j) = transmitter i -> transmitter j; zero diagonal

  int num_transmitters() const { return H.rows; }
  int num_receivers() const { return H.cols; }

  void validate() const {
    if (H.rows < 1 || H.cols < 1) throw std::invalid_argument("ChannelPair: empty H");
    if (G.rows != H.rows || G.cols != H.rows) throw std::invalid_argument("ChannelPair: G must be L x L");
    for (int l = 0; l < G.rows; ++l)
      if (G(l, l) != 0.0) throw std::invalid_argument("ChannelPair: G diagonal must be zero");
  }
};

// amplitudes sqrt(Exp(1)), i.e. squared gains are unit-mean exponential
inline ChannelPair draw_rayleigh(int L, int M, std::uint64_t seed) {
  if (L < 1 || M < 1) throw std::invalid_argument("draw_rayleigh: L and M must be positive");
  ChannelPair ch;
  ch.H = Mat(L, M);
  ch.G = Mat(L, L);
  Rng rng(derive_seed(seed, 0x11AD));
  for (int l = 0; l < L; ++l)
    for (int m = 0; m < M; ++m) ch.H(l, m) = std::sqrt(rng.exponential());
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) ch.G(i, j) = (i == j) ? 0.0 : std::sqrt(rng.exponential());
  return ch;
}

struct GeometryScenario {
  int num_transmitters = 3;
  double arclength = 1.0;          // radians of arc the transmitters occupy
  double pathloss_exponent = 4.0;  // alpha; amplitude gain = d^(-alpha/2)
  double circle_radius = 1.0;
  double gain_clamp = 1e6;         // max amplitude when transmitters collide

  void validate() const {
    if (num_transmitters < 1) throw std::invalid_argument("GeometryScenario: need transmitters");
    if (arclength < 0 || circle_radius <= 0 || pathloss_exponent < 0 || gain_clamp <= 0)
      throw std::invalid_argument("GeometryScenario: bad parameter");
  }
};

// deterministic core: transmitters at the given angles on the circle,
// single receiver at the centre
inline ChannelPair place_at_angles(const GeometryScenario& sc, const Vec& angles) {
  sc.validate();
  const int L = sc.num_transmitters;
  if (static_cast<int>(angles.size()) != L) throw std::invalid_argument("place_at_angles: wrong angle count");
  ChannelPair ch;
  ch.H = Mat(L, 1);
  ch.G = Mat(L, L);
  const double R = sc.circle_radius;
  const double direct = std::pow(R, -sc.pathloss_exponent / 2.0);
  for (int l = 0; l < L; ++l) ch.H(l, 0) = std::min(direct, sc.gain_clamp);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      if (i == j) continue;
      double d = 2.0 * R * std::abs(std::sin((angles[i] - angles[j]) / 2.0));
      double g = d > 0 ? std::pow(d, -sc.pathloss_exponent / 2.0) : sc.gain_clamp;
      ch.G(i, j) = std::min(g, sc.gain_clamp);
    }
  return ch;
}

// angles drawn i.i.d. uniform over the arc
inline ChannelPair place_on_arc(const GeometryScenario& sc, std::uint64_t seed) {
  sc.validate();
  Rng rng(derive_seed(seed, 0xA2C));
  Vec angles(sc.num_transmitters);
  for (double& a : angles) a = rng.uniform(0.0, sc.arclength);
  return place_at_angles(sc, angles);
}

// fixed-geometry sweeps from the worked examples; x is the swept value
inline ChannelPair preset_scenario(std::string_view name, double x) {
  ChannelPair ch;
  if (name == "example1") {
    // two transmitters, one receiver, unit forward gains, cross gain swept
    ch.H = Mat(2, 1, 1.0);
    ch.G = Mat(2, 2);
    ch.G(0, 1) = x;
    ch.G(1, 0) = x;
  } else if (name == "example3") {
    // second forward gain swept, cross gains unity
    ch.H = Mat(2, 1, 1.0);
    ch.H(1, 0) = x;
    ch.G = Mat(2, 2);
    ch.G(0, 1) = 1.0;
    ch.G(1, 0) = 1.0;
  } else if (name == "example4") {
    // two receivers; the gain from transmitter 2 to receiver 1 swept
    ch.H = Mat(2, 2, 1.0);
    ch.H(1, 0) = x;
    ch.G = Mat(2, 2);
    ch.G(0, 1) = 1.0;
    ch.G(1, 0) = 1.0;
  } else {
    throw std::invalid_argument("preset_scenario: unknown preset " + std::string(name));
  }
  ch.validate();
  return ch;
}

}  // namespace ccf
