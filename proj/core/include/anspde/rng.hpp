#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace anspde {

/// Philox4x32-10 counter-based generator. A draw is a pure function of
/// (key, counter), so ensemble workers can pull from disjoint counter ranges
/// in any order and still reproduce the exact same stream.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
      const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
      const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

/// Deterministic stream of Gaussians/uniforms keyed by (seed, stream).
/// `stream` is typically a trajectory or sample index; the two counter words
/// passed to each call select the draw within the stream.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        stream_(stream) {}

  /// Two iid U(0,1) values, strictly inside the open interval.
  std::array<double, 2> uniform2(std::uint64_t a, std::uint64_t b) const {
    const auto r = Philox4x32::block(
        {std::uint32_t(a), std::uint32_t(a >> 32) ^ std::uint32_t(stream_),
         std::uint32_t(b) ^ std::uint32_t(stream_ >> 32), std::uint32_t(b >> 32)},
        key_);
    return {to_unit(r[0], r[1]), to_unit(r[2], r[3])};
  }

  /// Two iid N(0,1) values via Box-Muller from one Philox block.
  std::array<double, 2> gaussian2(std::uint64_t a, std::uint64_t b) const {
    const auto u = uniform2(a, b);
    const double rad = std::sqrt(-2.0 * std::log(u[0]));
    const double ang = 2.0 * kPi * u[1];
    return {rad * std::cos(ang), rad * std::sin(ang)};
  }

  double gaussian(std::uint64_t a, std::uint64_t b) const { return gaussian2(a, b)[0]; }

  std::uint64_t stream() const { return stream_; }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  static double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t v = (std::uint64_t(hi) << 32) | lo;
    return double(v >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
};

/// Convenience sequential wrapper when draws have no natural index.
class SequentialRng {
 public:
  SequentialRng(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto g = rng_.gaussian2(next_++, 0);
    spare_ = g[1];
    have_spare_ = true;
    return g[0];
  }

  double uniform() { return rng_.uniform2(next_++, 1)[0]; }

 private:
  CounterRng rng_;
  std::uint64_t next_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace anspde
