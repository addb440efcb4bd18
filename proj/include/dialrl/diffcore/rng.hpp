#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace dialrl {

// Deterministic splitmix64-based generator. Distribution sampling is
// hand-rolled so streams are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (0,1), both endpoints excluded
  double uniform_open() {
    double u = uniform01();
    return u > 0.0 ? u : 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // uniform integer in [0, n)
  std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

  // standard normal via Box-Muller
  double gaussian() {
    double u1 = uniform_open();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // derive an independent stream named by a label
  Rng substream(const std::string& name) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : name) h = (h ^ c) * 0x100000001b3ull;
    return Rng(state_ ^ h ^ 0x6a09e667f3bcc909ull);
  }

 private:
  std::uint64_t state_;
};

}  // namespace dialrl
