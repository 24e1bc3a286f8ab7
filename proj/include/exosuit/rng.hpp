#pragma once

#include <cstdint>
#include <random>

namespace exosuit {

/// splitmix64 step; used to derive independent stream seeds so that results
/// do not depend on execution order of parallel grid tasks.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
  uint64_t s = master ^ (0xA0761D6478BD642FULL * (stream + 1));
  uint64_t a = splitmix64(s);
  uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

/// Deterministic Gaussian generator (Box-Muller over mt19937_64 uniforms);
/// avoids std::normal_distribution, whose output is implementation-defined.
class GaussianRng {
 public:
  explicit GaussianRng(uint64_t seed) : gen_(seed) {}

  double uniform() {  // (0, 1)
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace exosuit
