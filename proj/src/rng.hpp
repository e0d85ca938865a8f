#pragma once

#include <array>
#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace polywind {

// Counter-based stream derivation: every (seed, stream, replicate) triple maps
// to its own engine state, so a replicate's path never depends on which worker
// runs it or in what order.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  using Engine = std::mt19937_64;

  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t replicate) {
    std::uint64_t state = seed;
    state ^= splitmix64(state) + stream * 0xD1B54A32D192ED03ULL;
    state ^= splitmix64(state) + replicate * 0xABC98388FB8FAC03ULL;
    std::array<std::uint32_t, 8> words{};
    for (std::size_t i = 0; i < words.size(); i += 2) {
      const std::uint64_t w = splitmix64(state);
      words[i] = static_cast<std::uint32_t>(w);
      words[i + 1] = static_cast<std::uint32_t>(w >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
  }

  double gaussian() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  Engine& engine() { return engine_; }

 private:
  Engine engine_;
  boost::random::normal_distribution<double> normal_;
  boost::random::uniform_01<double> uniform_;
};

}  // namespace polywind
