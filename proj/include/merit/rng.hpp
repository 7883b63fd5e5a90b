#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace merit {

std::uint64_t fnv1a64(std::string_view s);

// Stable per-stage seed fan-out: one root seed, distinct streams per stage
// name, reproducible across platforms.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stage);

// mt19937_64 with hand-rolled distributions. std::uniform_real_distribution
// and std::normal_distribution are implementation-defined, which would break
// the byte-identical artifact contract across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1), 53-bit resolution
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // standard normal, Box-Muller with cached pair
  double gaussian();

  // [0, n)
  std::size_t uniform_index(std::size_t n) { return gen_() % n; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace merit
