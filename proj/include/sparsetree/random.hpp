#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sparsetree {

// Seeded stream. Independent phases of a search (vertex sampling, reduction,
// final selection) each take their own substream split off a master seed by a
// fixed label, so toggling one phase never shifts the draws of another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  Rng substream(std::string_view label) const;
  Rng substream(std::uint64_t index) const;

  double uniform(double lo, double hi);
  std::size_t uniform_index(std::size_t n);  // in [0, n)
  std::uint64_t next_u64() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace sparsetree
